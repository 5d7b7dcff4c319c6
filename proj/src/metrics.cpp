#include "pgmap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <tuple>

#include "pgmap/scene_io.hpp"

namespace pgmap {

namespace {

double rank_conf(const TowerBox& box) { return box.confidence.value_or(1.0); }

// Descending confidence, stable on ties, so missing confidences fall back to
// a deterministic id/index order.
std::vector<int> confidence_order(const std::vector<TowerBox>& preds) {
  std::vector<int> order(preds.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return rank_conf(preds[a]) > rank_conf(preds[b]);
  });
  return order;
}

enum class LinkCriterion { DistanceAtMost, IouAbove };

MatchResult link_generic(const std::vector<TowerBox>& preds,
                         const std::vector<TowerBox>& gts, double tau,
                         const GeoScale& scale, LinkCriterion criterion) {
  MatchResult result;
  std::vector<bool> taken(gts.size(), false);

  for (const int p : confidence_order(preds)) {
    int best = -1;
    double best_measure = 0.0;
    for (std::size_t g = 0; g < gts.size(); ++g) {
      if (taken[g] || gts[g].kind != NodeKind::T) continue;
      double m;
      if (criterion == LinkCriterion::DistanceAtMost) {
        m = centroid_distance_m(preds[p], gts[g], scale);
        if (!(m <= tau)) continue;
        if (best != -1 && !(m < best_measure)) continue;
      } else {
        m = box_iou(preds[p], gts[g]);
        if (!(m > tau)) continue;
        if (best != -1 && !(m > best_measure)) continue;
      }
      best = static_cast<int>(g);
      best_measure = m;
    }
    if (best >= 0) {
      taken[best] = true;
      result.pairs.push_back({p, best, best_measure});
    } else {
      result.unmatched_pred.push_back(p);
    }
  }
  std::sort(result.unmatched_pred.begin(), result.unmatched_pred.end());
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (!taken[g] && gts[g].kind == NodeKind::T)
      result.unmatched_gt.push_back(static_cast<int>(g));
  return result;
}

}  // namespace

MatchResult link_by_distance(const std::vector<TowerBox>& preds,
                             const std::vector<TowerBox>& gts, double tau_m,
                             const GeoScale& scale) {
  return link_generic(preds, gts, tau_m, scale, LinkCriterion::DistanceAtMost);
}

MatchResult link_by_iou(const std::vector<TowerBox>& preds,
                        const std::vector<TowerBox>& gts, double tau_iou) {
  return link_generic(preds, gts, tau_iou, GeoScale(),
                      LinkCriterion::IouAbove);
}

double average_precision(std::vector<std::pair<double, bool>> labels,
                         long long n_gt) {
  if (n_gt < 0) throw ValidationError("n_gt must be non-negative");
  if (n_gt == 0) return labels.empty() ? 1.0 : 0.0;
  if (labels.empty()) return 0.0;

  std::stable_sort(labels.begin(), labels.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });

  const std::size_t n = labels.size();
  std::vector<double> precision(n);
  long long tp = 0;
  for (std::size_t k = 0; k < n; ++k) {
    tp += labels[k].second ? 1 : 0;
    precision[k] = static_cast<double>(tp) / static_cast<double>(k + 1);
  }
  // Monotone envelope: precision at recall >= r.
  double best = 0.0;
  std::vector<double> envelope(n);
  for (std::size_t k = n; k-- > 0;) {
    best = std::max(best, precision[k]);
    envelope[k] = best;
  }
  double area = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (labels[k].second) area += envelope[k];
  return area / static_cast<double>(n_gt);
}

namespace {

long long count_t_kind(const std::vector<TowerBox>& boxes) {
  long long n = 0;
  for (const auto& b : boxes)
    if (b.kind == NodeKind::T) ++n;
  return n;
}

double ap_from_match(const std::vector<TowerBox>& preds,
                     const std::vector<TowerBox>& gts, const MatchResult& mr) {
  std::vector<bool> is_tp(preds.size(), false);
  for (const auto& pair : mr.pairs) is_tp[pair.pred] = true;
  std::vector<std::pair<double, bool>> labels;
  labels.reserve(preds.size());
  for (const int p : confidence_order(preds))
    labels.emplace_back(rank_conf(preds[p]), is_tp[p]);
  return average_precision(std::move(labels), count_t_kind(gts));
}

}  // namespace

double dmap(const std::vector<TowerBox>& preds,
            const std::vector<TowerBox>& gts, double tau_m,
            const GeoScale& scale) {
  return ap_from_match(preds, gts, link_by_distance(preds, gts, tau_m, scale));
}

double map_iou(const std::vector<TowerBox>& preds,
               const std::vector<TowerBox>& gts, double tau_iou) {
  return ap_from_match(preds, gts, link_by_iou(preds, gts, tau_iou));
}

GraphScore graph_prf(const GridGraph& pred, const GridGraph& gt, double tau_m,
                     const GeoScale& scale) {
  // Only T-kind predicted nodes are evaluated; predicted EN/OT boxes (as in
  // human annotations replayed as predictions) are invisible to scoring.
  std::vector<NodeId> pred_ids;
  std::vector<TowerBox> pred_boxes;
  for (const auto& [id, box] : pred.nodes()) {
    if (box.kind != NodeKind::T) continue;
    pred_ids.push_back(id);
    pred_boxes.push_back(box);
  }
  std::vector<NodeId> gt_ids;
  std::vector<TowerBox> gt_boxes;
  for (const auto& [id, box] : gt.nodes()) {
    gt_ids.push_back(id);
    gt_boxes.push_back(box);
  }

  const MatchResult mr = link_by_distance(pred_boxes, gt_boxes, tau_m, scale);
  std::map<NodeId, NodeId> matched_gt;  // pred node -> gt node (T-kind)
  for (const auto& pair : mr.pairs)
    matched_gt.emplace(pred_ids[pair.pred], gt_ids[pair.gt]);

  // A leftover prediction sitting on an OT ground-truth box is neither
  // credited nor penalized, along with its edges.
  std::set<NodeId> excused;
  for (const int p : mr.unmatched_pred) {
    for (std::size_t g = 0; g < gt_boxes.size(); ++g) {
      if (gt_boxes[g].kind != NodeKind::OT) continue;
      if (centroid_distance_m(pred_boxes[p], gt_boxes[g], scale) <= tau_m) {
        excused.insert(pred_ids[p]);
        break;
      }
    }
  }

  auto pred_eligible = [&](NodeId id) {
    if (excused.count(id)) return false;
    if (!pred.has_node(id)) return false;
    return pred.box(id).kind == NodeKind::T;
  };

  GraphScore score;
  score.matched_towers = static_cast<long long>(matched_gt.size());

  for (const auto& [u, v] : pred.edges()) {
    if (!pred_eligible(u) || !pred_eligible(v)) continue;
    ++score.n_pred;  // edge term accumulates here; towers added below
    const auto mu = matched_gt.find(u);
    const auto mv = matched_gt.find(v);
    if (mu != matched_gt.end() && mv != matched_gt.end() &&
        gt.has_edge(mu->second, mv->second))
      ++score.matched_lines;
  }
  for (const NodeId id : pred_ids)
    if (pred_eligible(id)) ++score.n_pred;

  for (const auto& [id, box] : gt.nodes())
    if (box.kind == NodeKind::T) ++score.n_truth;
  for (const auto& [a, b] : gt.edges())
    if (gt.box(a).kind == NodeKind::T && gt.box(b).kind == NodeKind::T)
      ++score.n_truth;

  const double hits =
      static_cast<double>(score.matched_towers + score.matched_lines);
  score.recall = score.n_truth > 0 ? hits / score.n_truth : 0.0;
  score.precision = score.n_pred > 0 ? hits / score.n_pred : 0.0;
  score.f1 = score.recall + score.precision > 0.0
                 ? 2.0 * score.recall * score.precision /
                       (score.recall + score.precision)
                 : 0.0;
  return score;
}

namespace {

struct MutualPair {
  NodeId a, b;
  double dist_m;
};

// Globally greedy mutual matching by ascending distance over T-kind nodes;
// symmetric in the two graphs by construction.
std::vector<MutualPair> mutual_match(const GridGraph& a, const GridGraph& b,
                                     double tau_m, const GeoScale& scale) {
  struct Cand {
    double dist;
    NodeId ia, ib;
    bool operator<(const Cand& o) const {
      return std::tie(dist, ia, ib) < std::tie(o.dist, o.ia, o.ib);
    }
  };
  std::vector<Cand> cands;
  for (const auto& [ia, ba] : a.nodes()) {
    if (ba.kind != NodeKind::T) continue;
    for (const auto& [ib, bb] : b.nodes()) {
      if (bb.kind != NodeKind::T) continue;
      const double d = centroid_distance_m(ba, bb, scale);
      if (d <= tau_m) cands.push_back({d, ia, ib});
    }
  }
  std::sort(cands.begin(), cands.end());
  std::set<NodeId> used_a, used_b;
  std::vector<MutualPair> pairs;
  for (const auto& c : cands) {
    if (used_a.count(c.ia) || used_b.count(c.ib)) continue;
    used_a.insert(c.ia);
    used_b.insert(c.ib);
    pairs.push_back({c.ia, c.ib, c.dist});
  }
  return pairs;
}

long long count_t_nodes(const GridGraph& g) {
  long long n = 0;
  for (const auto& [id, box] : g.nodes())
    if (box.kind == NodeKind::T) ++n;
  return n;
}

long long count_tt_edges(const GridGraph& g) {
  long long n = 0;
  for (const auto& [a, b] : g.edges())
    if (g.box(a).kind == NodeKind::T && g.box(b).kind == NodeKind::T) ++n;
  return n;
}

}  // namespace

AgreementResult tower_agreement(const GridGraph& a, const GridGraph& b,
                                double tau_m, const GeoScale& scale) {
  const auto pairs = mutual_match(a, b, tau_m, scale);
  AgreementResult result;
  for (const auto& p : pairs) result.matched_distances_m.push_back(p.dist_m);
  result.matched = static_cast<long long>(pairs.size());
  result.denom = std::max(count_t_nodes(a), count_t_nodes(b));
  result.percent =
      result.denom == 0
          ? 100.0
          : 100.0 * static_cast<double>(result.matched) / result.denom;
  return result;
}

AgreementResult line_agreement(const GridGraph& a, const GridGraph& b,
                               double tau_m, const GeoScale& scale) {
  const auto pairs = mutual_match(a, b, tau_m, scale);
  std::map<NodeId, NodeId> to_b;
  for (const auto& p : pairs) to_b.emplace(p.a, p.b);

  AgreementResult result;
  for (const auto& [u, v] : a.edges()) {
    if (a.box(u).kind != NodeKind::T || a.box(v).kind != NodeKind::T) continue;
    const auto bu = to_b.find(u);
    const auto bv = to_b.find(v);
    if (bu != to_b.end() && bv != to_b.end() &&
        b.has_edge(bu->second, bv->second))
      ++result.matched;
  }
  result.denom = std::max(count_tt_edges(a), count_tt_edges(b));
  result.percent =
      result.denom == 0
          ? 100.0
          : 100.0 * static_cast<double>(result.matched) / result.denom;
  return result;
}

double score_segmentation(const ProbRaster& pred, const GridGraph& gt_graph,
                          double threshold, int gt_width_px) {
  const BinaryMask pred_mask = binarize(pred, threshold);
  const BinaryMask gt_mask = rasterize_gt_lines(gt_graph, pred.rows, pred.cols,
                                                gt_width_px, pred.scale);
  return mask_iou(pred_mask, gt_mask);
}

void ScoreReport::add_metric(const std::string& name, double value) {
  metrics.emplace_back(name, value);
}

void ScoreReport::add_count(const std::string& name, long long value) {
  counts.emplace_back(name, value);
}

std::string ScoreReport::to_text() const {
  std::string out;
  for (const auto& [name, value] : metrics)
    out += name + " " + format_real(value) + "\n";
  for (const auto& [name, value] : counts)
    out += name + " " + std::to_string(value) + "\n";
  for (const auto& [name, section] : sections) {
    out += "[" + name + "]\n";
    out += section.to_text();
  }
  return out;
}

}  // namespace pgmap
