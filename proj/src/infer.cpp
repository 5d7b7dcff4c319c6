#include "pgmap/infer.hpp"

#include <algorithm>
#include <thread>
#include <tuple>

namespace pgmap {

void InferParams::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw ValidationError("gamma must lie in [0,1]");
  if (!(max_span_m > 0.0)) throw ValidationError("max_span_m must be positive");
  if (path_width_px < 1) throw ValidationError("path_width_px must be >= 1");
  if (!(conf_threshold >= 0.0 && conf_threshold <= 1.0))
    throw ValidationError("conf_threshold must lie in [0,1]");
  if (!(nms_overlap >= 0.0 && nms_overlap <= 1.0))
    throw ValidationError("nms_overlap must lie in [0,1]");
}

DetectionSet filter_by_confidence(const DetectionSet& dets, double threshold) {
  DetectionSet kept;
  kept.reserve(dets.size());
  for (const auto& det : dets) {
    if (!det.confidence)
      throw ValidationError("detection without a confidence score");
    if (*det.confidence > threshold) kept.push_back(det);
  }
  return kept;
}

namespace {

// NMS processing order: confidence descending, equal confidences resolved
// toward the lexicographically smaller (row, col, h, w).
bool nms_before(const TowerBox& a, const TowerBox& b) {
  if (*a.confidence != *b.confidence) return *a.confidence > *b.confidence;
  return std::tie(a.top_left.row, a.top_left.col, a.height_px, a.width_px) <
         std::tie(b.top_left.row, b.top_left.col, b.height_px, b.width_px);
}

}  // namespace

DetectionSet nms(const DetectionSet& dets, double overlap_threshold) {
  std::vector<std::size_t> order(dets.size());
  for (std::size_t k = 0; k < dets.size(); ++k) {
    if (!dets[k].confidence)
      throw ValidationError("detection without a confidence score");
    order[k] = k;
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return nms_before(dets[a], dets[b]);
  });

  DetectionSet kept;
  std::vector<bool> suppressed(dets.size(), false);
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (suppressed[order[i]]) continue;
    const TowerBox& winner = dets[order[i]];
    kept.push_back(winner);
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      if (suppressed[order[j]]) continue;
      if (box_iou(winner, dets[order[j]]) > overlap_threshold)
        suppressed[order[j]] = true;
    }
  }
  return kept;
}

double path_score(const ProbRaster& c, PixelPoint p, PixelPoint q,
                  int width_px) {
  double sum = 0.0;
  long long n = 0;
  for_each_band_pixel(p, q, width_px, c.rows, c.cols, [&](int r, int col) {
    sum += c.at(r, col);
    ++n;
  });
  if (n == 0) return 0.0;  // path fully out of bounds: no evidence, no edge
  return sum / static_cast<double>(n);
}

GridGraph infer_adjacency(const std::vector<TowerBox>& towers,
                          const ProbRaster& c, const InferParams& params,
                          int threads, InferStats* stats) {
  params.validate();
  if (threads < 1) threads = 1;

  GridGraph graph;
  for (std::size_t k = 0; k < towers.size(); ++k)
    graph.add_node(static_cast<NodeId>(k), towers[k]);

  // Distance gate first; only surviving pairs pay for path integration.
  std::vector<std::pair<int, int>> candidates;
  for (std::size_t i = 0; i < towers.size(); ++i) {
    for (std::size_t j = i + 1; j < towers.size(); ++j) {
      if (centroid_distance_m(towers[i], towers[j], c.scale) <
          params.max_span_m)
        candidates.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
  }

  std::vector<double> scores(candidates.size(), 0.0);
  std::vector<unsigned char> empty_path(candidates.size(), 0);
  auto score_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      const auto [i, j] = candidates[k];
      const PixelPoint pi = centroid(towers[i]);
      const PixelPoint pj = centroid(towers[j]);
      double sum = 0.0;
      long long n = 0;
      for_each_band_pixel(pi, pj, params.path_width_px, c.rows, c.cols,
                          [&](int r, int col) {
                            sum += c.at(r, col);
                            ++n;
                          });
      if (n == 0) {
        empty_path[k] = 1;
        scores[k] = 0.0;
      } else {
        scores[k] = sum / static_cast<double>(n);
      }
    }
  };

  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(threads),
                            std::max<std::size_t>(candidates.size(), 1));
  if (n_workers <= 1) {
    score_range(0, candidates.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (candidates.size() + n_workers - 1) / n_workers;
    for (std::size_t w = 0; w < n_workers; ++w) {
      const std::size_t begin = w * chunk;
      const std::size_t end = std::min(begin + chunk, candidates.size());
      if (begin >= end) break;
      pool.emplace_back(score_range, begin, end);
    }
    for (auto& t : pool) t.join();
  }

  InferStats local;
  local.candidate_pairs = static_cast<long long>(candidates.size());
  for (std::size_t k = 0; k < candidates.size(); ++k) {
    local.empty_path_pairs += empty_path[k];
    if (scores[k] >= params.gamma) {
      graph.add_edge(candidates[k].first, candidates[k].second);
      ++local.connected_pairs;
    }
  }
  if (stats) *stats = local;
  return graph;
}

}  // namespace pgmap
