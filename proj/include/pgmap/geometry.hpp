#pragma once

#include <optional>
#include <string>

#include "pgmap/error.hpp"

namespace pgmap {

// Pixel coordinates are row-major with the origin at the top-left corner of
// the raster; row grows downward. Values may be fractional and may lie
// outside any particular raster (consumers clamp). The pixel at integer
// index (r, c) has its center at continuous coordinate (r, c).
struct PixelPoint {
  double row = 0.0;
  double col = 0.0;

  friend PixelPoint operator+(PixelPoint a, PixelPoint b) {
    return {a.row + b.row, a.col + b.col};
  }
  friend PixelPoint operator-(PixelPoint a, PixelPoint b) {
    return {a.row - b.row, a.col - b.col};
  }
  friend bool operator==(PixelPoint a, PixelPoint b) {
    return a.row == b.row && a.col == b.col;
  }
};

/// Ground sampling distance in meters per pixel.
class GeoScale {
 public:
  GeoScale() : GeoScale(0.3) {}
  explicit GeoScale(double meters_per_pixel) : mpp_(meters_per_pixel) {
    if (!(mpp_ > 0.0))
      throw ValidationError("meters_per_pixel must be positive");
  }

  double meters_per_pixel() const { return mpp_; }
  double to_meters(double pixels) const { return pixels * mpp_; }
  double to_pixels(double meters) const { return meters / mpp_; }

  friend bool operator==(const GeoScale& a, const GeoScale& b) {
    return a.mpp_ == b.mpp_;
  }

 private:
  double mpp_;
};

// Node classes: T = tower, OT = ambiguous "other tower" (kept as a graph
// node, excluded from evaluation), EN = artificial edge node where a line
// crosses a tile border.
enum class NodeKind { T, OT, EN };

std::string to_string(NodeKind kind);
NodeKind parse_node_kind(const std::string& token);

/// Axis-aligned box t = (r, c, h, w): top-left corner plus extent in pixels.
/// T/OT boxes need positive extent; EN nodes carry a degenerate 1x1 box
/// centered on the border-crossing point. Confidence is present on
/// predictions only.
struct TowerBox {
  TowerBox(PixelPoint top_left, double height_px, double width_px,
           NodeKind kind = NodeKind::T,
           std::optional<double> confidence = std::nullopt);

  /// 1x1 EN box whose centroid sits exactly at `crossing`.
  static TowerBox edge_node(PixelPoint crossing);

  PixelPoint top_left;
  double height_px;
  double width_px;
  NodeKind kind;
  std::optional<double> confidence;

  friend bool operator==(const TowerBox& a, const TowerBox& b) {
    return a.top_left == b.top_left && a.height_px == b.height_px &&
           a.width_px == b.width_px && a.kind == b.kind &&
           a.confidence == b.confidence;
  }
};

PixelPoint centroid(const TowerBox& box);

double centroid_distance_px(const TowerBox& a, const TowerBox& b);
double centroid_distance_m(const TowerBox& a, const TowerBox& b,
                           const GeoScale& scale);

/// Intersection-over-union of the two rectangles. 1 iff identical extents,
/// 0 iff disjoint.
double box_iou(const TowerBox& a, const TowerBox& b);

}  // namespace pgmap
