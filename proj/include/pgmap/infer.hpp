#pragma once

#include <vector>

#include "pgmap/raster.hpp"

namespace pgmap {

/// Detector output: boxes carrying confidence scores.
using DetectionSet = std::vector<TowerBox>;

/// Gates for detection post-processing and graph inference.
struct InferParams {
  double gamma = 0.2;           // minimum mean line score along a path
  double max_span_m = 600.0;    // candidate pairs must be closer than this
  int path_width_px = 9;        // band width for path integration
  double conf_threshold = 0.5;  // detections kept iff confidence > this
  double nms_overlap = 0.5;     // boxes suppressed iff IoU > this

  void validate() const;
};

/// Keeps detections with confidence strictly above `threshold`, preserving
/// order. Every detection must carry a confidence.
DetectionSet filter_by_confidence(const DetectionSet& dets, double threshold);

/// Greedy NMS: repeatedly keep the highest-confidence box and drop all boxes
/// whose IoU with it exceeds `overlap_threshold`. Equal confidences break
/// ties toward the lexicographically smaller (row, col, h, w).
DetectionSet nms(const DetectionSet& dets, double overlap_threshold);

/// Mean of C over the width-w band between p and q, counting in-bounds
/// pixels only. Returns 0 when no band pixel is in bounds.
double path_score(const ProbRaster& c, PixelPoint p, PixelPoint q,
                  int width_px);

struct InferStats {
  long long candidate_pairs = 0;   // pairs that passed the distance gate
  long long connected_pairs = 0;
  long long empty_path_pairs = 0;  // candidate paths fully out of bounds
};

/// Connects tower i and j iff their centroid distance is strictly below
/// max_span_m and the path score is at least gamma. Nodes are the input
/// towers with ids 0..n-1 in order. Pairs may be scored on several threads;
/// the resulting graph is identical regardless of thread count.
GridGraph infer_adjacency(const std::vector<TowerBox>& towers,
                          const ProbRaster& c, const InferParams& params,
                          int threads = 1, InferStats* stats = nullptr);

}  // namespace pgmap
