#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pgmap/graph.hpp"

namespace pgmap {

/// Dense per-pixel line likelihoods in [0,1], row-major.
struct ProbRaster {
  ProbRaster() = default;
  ProbRaster(int rows, int cols, GeoScale scale, float fill = 0.0f);

  int rows = 0;
  int cols = 0;
  GeoScale scale;
  std::vector<float> values;

  float at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  float& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
  bool in_bounds(int r, int c) const { return r >= 0 && r < rows && c >= 0 && c < cols; }
};

/// As ProbRaster but with values constrained to {0,1}.
struct BinaryMask {
  BinaryMask() = default;
  BinaryMask(int rows, int cols, GeoScale scale, std::uint8_t fill = 0);

  int rows = 0;
  int cols = 0;
  GeoScale scale;
  std::vector<std::uint8_t> values;

  std::uint8_t at(int r, int c) const { return values[static_cast<std::size_t>(r) * cols + c]; }
  std::uint8_t& at(int r, int c) { return values[static_cast<std::size_t>(r) * cols + c]; }
};

struct PixelRC {
  int row = 0;
  int col = 0;
  friend bool operator==(PixelRC a, PixelRC b) { return a.row == b.row && a.col == b.col; }
  friend bool operator<(PixelRC a, PixelRC b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  }
};

namespace detail {

// Membership test for the width-w band around segment p->q: perpendicular
// distance to the segment's line <= w/2 and longitudinal projection within
// [-w/2, L + w/2] (flat end caps). Requires p != q.
inline bool band_contains(double pr, double pc, double dr, double dc,
                          double len, double h, double r, double c) {
  const double vr = r - pr;
  const double vc = c - pc;
  const double cross = dr * vc - dc * vr;
  if (std::abs(cross) > h * len) return false;
  const double dot = dr * vr + dc * vc;
  return dot >= -h * len && dot <= len * len + h * len;
}

inline int clamp_int(double v, int lo, int hi) {
  if (v < lo) return lo;
  if (v > hi) return hi;
  return static_cast<int>(v);
}

}  // namespace detail

/// Visits every in-bounds pixel whose center lies in the width-w band around
/// segment p->q (see detail::band_contains). For p == q the band degenerates
/// to the disc of radius w/2 around p. Visit order is deterministic and
/// symmetric in (p, q). Widths >= 1; even widths are accepted and resolve by
/// the same distance rule.
template <class Fn>
void for_each_band_pixel(PixelPoint p, PixelPoint q, int width_px, int rows,
                         int cols, Fn&& fn) {
  if (width_px < 1) throw ValidationError("band width must be >= 1 px");
  if (rows <= 0 || cols <= 0) return;
  const double h = width_px / 2.0;

  if (p == q) {
    const double h2 = h * h;
    const int r0 = detail::clamp_int(std::ceil(p.row - h), 0, rows - 1);
    const int r1 = detail::clamp_int(std::floor(p.row + h), 0, rows - 1);
    for (int r = r0; r <= r1; ++r) {
      const double dr2 = (r - p.row) * (r - p.row);
      if (dr2 > h2) continue;
      const double half = std::sqrt(h2 - dr2);
      const int c0 = detail::clamp_int(std::ceil(p.col - half), 0, cols - 1);
      const int c1 = detail::clamp_int(std::floor(p.col + half), 0, cols - 1);
      for (int c = c0; c <= c1; ++c) {
        const double dc2 = (c - p.col) * (c - p.col);
        if (dr2 + dc2 <= h2) fn(r, c);
      }
    }
    return;
  }

  // Canonical endpoint order keeps the arithmetic (and thus any borderline
  // rounding) identical for (p,q) and (q,p).
  if (q.row < p.row || (q.row == p.row && q.col < p.col)) std::swap(p, q);

  const double dr = q.row - p.row;
  const double dc = q.col - p.col;
  const double len = std::hypot(dr, dc);
  const double hl = h * len;

  // Scan along the major axis; for each line solve the two band constraints
  // for the minor coordinate, then confirm candidates with the exact test.
  const bool col_major = std::abs(dc) >= std::abs(dr);
  const double major_p = col_major ? p.col : p.row;
  const double major_q = col_major ? q.col : q.row;
  const double minor_p = col_major ? p.row : p.col;
  const int major_count = col_major ? cols : rows;
  const int minor_count = col_major ? rows : cols;
  // Derivatives along major/minor for the cross/dot forms below.
  const double dM = col_major ? dc : dr;  // != 0 by major-axis choice
  const double dm = col_major ? dr : dc;

  // A cap corner can stick out h*sqrt(2) beyond an endpoint along an axis.
  const double reach = h * 1.4142135623730951 + 1.0;
  const int m0 = std::max(0, static_cast<int>(std::floor(std::min(major_p, major_q) - reach)) - 1);
  const int m1 = std::min(major_count - 1,
                          static_cast<int>(std::ceil(std::max(major_p, major_q) + reach)) + 1);

  for (int m = m0; m <= m1; ++m) {
    const double a = m - major_p;  // offset along major axis
    // cross = dm * a - dM * u  where u = minor offset; |cross| <= hl.
    double lo1 = (dm * a - hl) / dM;
    double hi1 = (dm * a + hl) / dM;
    if (lo1 > hi1) std::swap(lo1, hi1);
    // dot = dm * u + dM * a; dot in [-hl, len^2 + hl].
    double lo = lo1;
    double hi = hi1;
    if (dm != 0.0) {
      double lo2 = (-hl - dM * a) / dm;
      double hi2 = (len * len + hl - dM * a) / dm;
      if (lo2 > hi2) std::swap(lo2, hi2);
      lo = std::max(lo, lo2);
      hi = std::min(hi, hi2);
    } else {
      const double dot = dM * a;
      if (dot < -hl || dot > len * len + hl) continue;
    }
    if (lo > hi) continue;

    const int u0 = std::max(0, static_cast<int>(std::floor(lo + minor_p)) - 1);
    const int u1 = std::min(minor_count - 1,
                            static_cast<int>(std::ceil(hi + minor_p)) + 1);
    for (int u = u0; u <= u1; ++u) {
      const double r = col_major ? u : static_cast<double>(m);
      const double c = col_major ? static_cast<double>(m) : u;
      if (!detail::band_contains(p.row, p.col, dr, dc, len, h, r, c)) continue;
      if (col_major)
        fn(u, m);
      else
        fn(m, u);
    }
  }
}

/// The band's pixel set, sorted by (row, col).
std::vector<PixelRC> thick_segment_pixels(PixelPoint p, PixelPoint q,
                                          int width_px, int rows, int cols);

/// Union of the centroid-to-centroid bands of every edge. Default width is
/// the 30 px used for ground-truth line masks at 0.3 m/px.
BinaryMask rasterize_gt_lines(const GridGraph& graph, int rows, int cols,
                              int width_px = 30, GeoScale scale = GeoScale());

struct MaskOverlap {
  long long intersection = 0;
  long long set_union = 0;
};

/// Raw overlap counts, for aggregating IoU across tiles. Throws on shape
/// mismatch.
MaskOverlap mask_overlap(const BinaryMask& a, const BinaryMask& b);

/// |a AND b| / |a OR b|; 1.0 when both masks are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// value >= threshold -> 1, else 0. Threshold must be in [0,1].
BinaryMask binarize(const ProbRaster& raster, double threshold);

ProbRaster to_raster(const BinaryMask& mask);

struct RasterLoadResult {
  ProbRaster raster;
  long clamped = 0;  // inputs outside [0,1] clamped at load
};

// Binary raster container: 16-byte header (magic "PGR1", u32 rows, u32 cols,
// f32 meters/px, all little-endian) followed by rows*cols row-major f32
// values. 8-bit grayscale PGM (P5, maxval 255) is also accepted on load with
// values mapped v/255.
std::string serialize_raster(const ProbRaster& raster);
RasterLoadResult parse_raster(std::string_view bytes,
                              GeoScale pgm_scale = GeoScale());

void save_raster(const ProbRaster& raster, const std::string& path);
RasterLoadResult load_raster(const std::string& path,
                             GeoScale pgm_scale = GeoScale());

}  // namespace pgmap
