#pragma once

#include <string>
#include <utility>
#include <vector>

#include "pgmap/infer.hpp"
#include "pgmap/scene.hpp"

namespace pgmap {

inline constexpr double kDefaultTauM = 3.0;

/// One-to-one assignment between predictions and ground truth. Indices refer
/// to positions in the input vectors. EN and OT ground-truth boxes are not
/// evaluation targets: they appear in neither `pairs` nor `unmatched_gt`.
struct MatchResult {
  struct Pair {
    int pred = 0;
    int gt = 0;
    double measure = 0.0;  // distance in meters or IoU, per linker
  };
  std::vector<Pair> pairs;
  std::vector<int> unmatched_pred;
  std::vector<int> unmatched_gt;
};

/// Greedy one-to-one linking by centroid distance: predictions in descending
/// confidence order (missing confidence ranks as 1.0, ties by index) each
/// take the nearest free T-kind ground-truth box within tau_m meters.
MatchResult link_by_distance(const std::vector<TowerBox>& preds,
                             const std::vector<TowerBox>& gts, double tau_m,
                             const GeoScale& scale);

/// As link_by_distance but a prediction takes the free ground-truth box of
/// maximum IoU, requiring IoU strictly above tau_iou.
MatchResult link_by_iou(const std::vector<TowerBox>& preds,
                        const std::vector<TowerBox>& gts, double tau_iou);

/// All-points average precision: area under the precision envelope of the
/// PR curve. Labels are (confidence, is_true_positive), sorted internally by
/// descending confidence (stable). Conventions: n_gt = 0 yields 1 with no
/// predictions and 0 otherwise; no predictions with n_gt > 0 yields 0.
double average_precision(std::vector<std::pair<double, bool>> labels,
                         long long n_gt);

/// Distance-linked AP over the detection ranking (single class).
double dmap(const std::vector<TowerBox>& preds,
            const std::vector<TowerBox>& gts, double tau_m,
            const GeoScale& scale);

/// IoU-linked AP; tau_iou conventionally 0.5 or 0.75.
double map_iou(const std::vector<TowerBox>& preds,
               const std::vector<TowerBox>& gts, double tau_iou);

// Graph recall/precision/F1 over combined tower and line counts:
//   R = (C(T)+C(L)) / N_truth,  P = (C(T)+C(L)) / N_pred.
// Ground-truth EN nodes (and their edges) are dropped entirely; ground-truth
// OT nodes are dropped from N_truth but still absorb predictions: an
// unmatched predicted tower within tau of an OT box is excluded from N_pred
// along with its incident edges, so it is neither credited nor penalized.
// Predicted EN/OT nodes are excluded symmetrically. Degenerate denominators
// give R = 0 (N_truth = 0), P = 0 (N_pred = 0), F1 = 0 (R + P = 0).
struct GraphScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
  long long matched_towers = 0;  // C(T)
  long long matched_lines = 0;   // C(L)
  long long n_pred = 0;
  long long n_truth = 0;
};

GraphScore graph_prf(const GridGraph& pred, const GridGraph& gt, double tau_m,
                     const GeoScale& scale);

/// Symmetric tower agreement between two annotations of the same area:
/// globally greedy mutual matching by ascending centroid distance over
/// T-kind nodes. Percent is matched / max(|a|,|b|) * 100 (100 when both are
/// empty). Distances of the matched pairs are returned for histogramming;
/// the raw counts support aggregation across tiles.
struct AgreementResult {
  double percent = 0.0;
  long long matched = 0;
  long long denom = 0;
  std::vector<double> matched_distances_m;
};

AgreementResult tower_agreement(const GridGraph& a, const GridGraph& b,
                                double tau_m, const GeoScale& scale);

/// An edge agrees iff both endpoint towers are matched and their
/// counterparts are adjacent. Percent over max of the two T-T edge counts.
AgreementResult line_agreement(const GridGraph& a, const GridGraph& b,
                               double tau_m, const GeoScale& scale);

/// Segmentation IoU of a thresholded probability map against the rasterized
/// ground-truth lines (gt_width_px wide).
double score_segmentation(const ProbRaster& pred, const GridGraph& gt_graph,
                          double threshold, int gt_width_px = 30);

// Named metric values plus optional per-section breakdown, serialized as a
// deterministic "name value" text block. Rates print with 6 decimals, counts
// as integers; sections are introduced by "[name]" lines.
struct ScoreReport {
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, long long>> counts;
  std::vector<std::pair<std::string, ScoreReport>> sections;

  void add_metric(const std::string& name, double value);
  void add_count(const std::string& name, long long value);
  std::string to_text() const;
};

}  // namespace pgmap
