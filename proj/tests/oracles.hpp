// Test-only brute-force oracles. These recompute expected results through
// independent routes (window scans, exhaustive enumeration) and must stay
// decoupled from the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "pgmap/raster.hpp"
#include "pgmap/scene.hpp"

namespace oracle {

// Window-scan enumeration of the band pixel set: every in-bounds pixel is
// tested against a projection-based distance rule (the library solves
// interval bounds per scanline instead).
inline std::vector<pgmap::PixelRC> band_pixels(pgmap::PixelPoint p,
                                               pgmap::PixelPoint q,
                                               int width_px, int rows,
                                               int cols) {
  const double h = width_px / 2.0;
  const double reach = h * 2.0;  // generous: cap corners stick out h*sqrt(2)
  const int r0 = std::max(0, static_cast<int>(std::floor(std::min(p.row, q.row) - reach)) - 2);
  const int r1 = std::min(rows - 1, static_cast<int>(std::ceil(std::max(p.row, q.row) + reach)) + 2);
  const int c0 = std::max(0, static_cast<int>(std::floor(std::min(p.col, q.col) - reach)) - 2);
  const int c1 = std::min(cols - 1, static_cast<int>(std::ceil(std::max(p.col, q.col) + reach)) + 2);

  const double dr = q.row - p.row;
  const double dc = q.col - p.col;
  const double len2 = dr * dr + dc * dc;
  const double len = std::sqrt(len2);

  std::vector<pgmap::PixelRC> out;
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      bool inside;
      if (len2 == 0.0) {
        inside = std::hypot(r - p.row, c - p.col) <= h;
      } else {
        // Scaled comparisons keep exact inputs exact at the boundary.
        const double cross = dr * (c - p.col) - dc * (r - p.row);
        const double lon_scaled = (r - p.row) * dr + (c - p.col) * dc;
        inside = cross * cross <= (h * len) * (h * len) &&
                 lon_scaled >= -h * len && lon_scaled <= len2 + h * len;
      }
      if (inside) out.push_back({r, c});
    }
  }
  return out;
}

// Every-point AP through the per-true-positive formulation: the k-th true
// positive contributes the best precision among ranks that reach k TPs.
inline double average_precision(
    std::vector<std::pair<double, bool>> labels, long long n_gt) {
  if (n_gt == 0) return labels.empty() ? 1.0 : 0.0;
  if (labels.empty()) return 0.0;
  std::stable_sort(labels.begin(), labels.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  const std::size_t n = labels.size();
  std::vector<long long> cum_tp(n);
  std::vector<double> prec(n);
  long long tp = 0;
  for (std::size_t j = 0; j < n; ++j) {
    tp += labels[j].second ? 1 : 0;
    cum_tp[j] = tp;
    prec[j] = static_cast<double>(tp) / static_cast<double>(j + 1);
  }
  double sum = 0.0;
  for (long long k = 1; k <= tp; ++k) {
    double best = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (cum_tp[j] >= k) best = std::max(best, prec[j]);
    sum += best;
  }
  return sum / static_cast<double>(n_gt);
}

// Expected EN count for a tile decomposition, via a global crossing walk:
// cut each edge at every internal grid line, assign sub-intervals to tiles
// by their midpoints (exact border points go to the lower-index tile), and
// count every run boundary that is not the owning endpoint.
inline long long en_count(const pgmap::SceneAnnotation& scene, int tile_rows,
                          int tile_cols) {
  const int n_tr = (scene.rows + tile_rows - 1) / tile_rows;
  const int n_tc = (scene.cols + tile_cols - 1) / tile_cols;
  auto tile_index = [](double coord, int size, int n) {
    int idx = static_cast<int>(std::floor(coord / size));
    if (idx > 0 && coord == static_cast<double>(idx) * size) --idx;
    return std::clamp(idx, 0, n - 1);
  };
  auto tile_of = [&](pgmap::PixelPoint pt) {
    return std::pair{tile_index(pt.row, tile_rows, n_tr),
                     tile_index(pt.col, tile_cols, n_tc)};
  };

  long long count = 0;
  const auto& g = scene.graph;
  for (const auto& [u, v] : g.edges()) {
    const pgmap::PixelPoint pu = pgmap::centroid(g.box(u));
    const pgmap::PixelPoint pv = pgmap::centroid(g.box(v));
    const auto tu = tile_of(pu);
    const auto tv = tile_of(pv);

    std::vector<double> ts{0.0, 1.0};
    auto add_crossings = [&](double start, double delta, int size, int n) {
      if (delta == 0.0) return;
      for (int k = 1; k < n; ++k) {
        const double t = (static_cast<double>(k) * size - start) / delta;
        if (t > 0.0 && t < 1.0) ts.push_back(t);
      }
    };
    add_crossings(pu.row, pv.row - pu.row, tile_rows, n_tr);
    add_crossings(pu.col, pv.col - pu.col, tile_cols, n_tc);
    std::sort(ts.begin(), ts.end());
    ts.erase(std::unique(ts.begin(), ts.end()), ts.end());

    // Merge consecutive sub-intervals living in the same tile.
    struct Run {
      std::pair<int, int> tile;
      double t0, t1;
    };
    std::vector<Run> runs;
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
      const double tm = (ts[k] + ts[k + 1]) / 2.0;
      const pgmap::PixelPoint mid{pu.row + tm * (pv.row - pu.row),
                                  pu.col + tm * (pv.col - pu.col)};
      const auto tile = tile_of(mid);
      if (!runs.empty() && runs.back().tile == tile) {
        runs.back().t1 = ts[k + 1];
      } else {
        runs.push_back({tile, ts[k], ts[k + 1]});
      }
    }
    for (const auto& run : runs) {
      if (!(run.t0 == 0.0 && run.tile == tu)) ++count;
      if (!(run.t1 == 1.0 && run.tile == tv)) ++count;
    }
  }
  return count;
}

// Pixel-counting IoU for boxes on the integer grid.
inline double box_iou_by_counting(const pgmap::TowerBox& a,
                                  const pgmap::TowerBox& b) {
  auto cells = [](const pgmap::TowerBox& box) {
    std::set<std::pair<int, int>> out;
    for (int r = static_cast<int>(box.top_left.row);
         r < static_cast<int>(box.top_left.row + box.height_px); ++r)
      for (int c = static_cast<int>(box.top_left.col);
           c < static_cast<int>(box.top_left.col + box.width_px); ++c)
        out.insert({r, c});
    return out;
  };
  const auto ca = cells(a);
  const auto cb = cells(b);
  long long inter = 0;
  for (const auto& cell : ca) inter += cb.count(cell);
  const long long uni =
      static_cast<long long>(ca.size() + cb.size()) - inter;
  return uni == 0 ? 0.0 : static_cast<double>(inter) / uni;
}

// Graph isomorphism under a (kind, centroid) node bijection with tolerance.
inline bool scenes_isomorphic(const pgmap::SceneAnnotation& a,
                              const pgmap::SceneAnnotation& b,
                              double tol_px) {
  const auto& ga = a.graph;
  const auto& gb = b.graph;
  if (ga.node_count() != gb.node_count()) return false;
  if (ga.edge_count() != gb.edge_count()) return false;

  std::map<pgmap::NodeId, pgmap::NodeId> a_to_b;
  std::set<pgmap::NodeId> used;
  for (const auto& [ia, ba] : ga.nodes()) {
    bool found = false;
    for (const auto& [ib, bb] : gb.nodes()) {
      if (used.count(ib) || ba.kind != bb.kind) continue;
      const pgmap::PixelPoint ca = pgmap::centroid(ba);
      const pgmap::PixelPoint cb = pgmap::centroid(bb);
      if (std::hypot(ca.row - cb.row, ca.col - cb.col) <= tol_px) {
        a_to_b.emplace(ia, ib);
        used.insert(ib);
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  for (const auto& [u, v] : ga.edges())
    if (!gb.has_edge(a_to_b.at(u), a_to_b.at(v))) return false;
  return true;
}

}  // namespace oracle
