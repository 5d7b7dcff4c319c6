// Acceptance suite: eight pipeline-level criteria, one pass/fail line each.
// Exit code is nonzero if any criterion fails. Every tolerance is pinned
// here; nothing defers to later calibration.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pgmap/infer.hpp"
#include "pgmap/metrics.hpp"
#include "pgmap/scene_io.hpp"
#include "pgmap/synth.hpp"
#include "pgmap/tiling.hpp"

using namespace pgmap;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
  int id;
  std::string name;
  std::function<std::string()> run;  // empty string = pass, else failure note
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fail(const std::string& msg) { return msg; }

// --- 1: greedy matching and AP agree with exhaustive oracles ---------------

std::string criterion_metric_oracle() {
  const auto t0 = Clock::now();
  DetectionNoise noise;
  noise.miss_prob = 0.15;
  noise.false_prob = 0.05;
  noise.jitter_sigma_m = 1.0;
  noise.conf_model = {0.5, 1.0, 0.0, 0.6};

  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    SynthParams p;
    p.seed = 90000 + seed;
    p.n_towers = 1 + static_cast<int>(seed % 6);
    p.rows = p.cols = 1500;
    p.span_min_m = 60;
    p.span_max_m = 100;
    p.min_separation_m = 20;  // still far beyond 2*tau, so stars stay stars
    p.ensure_oracle_recovery = false;
    const SceneAnnotation scene = gen_scene(p);

    DetectionSet preds = corrupt_detections(scene, noise, p.seed);
    if (preds.size() > 6)  // keep both sides at <= 6 boxes
      preds.erase(preds.begin() + 6, preds.end());
    std::vector<TowerBox> gts;
    for (const auto& [id, box] : scene.graph.nodes()) gts.push_back(box);

    const MatchResult greedy =
        link_by_distance(preds, gts, kDefaultTauM, scene.scale);
    const MatchResult best =
        brute_force_match(preds, gts, kDefaultTauM, scene.scale);
    if (greedy.pairs.size() != best.pairs.size())
      return fail("seed " + std::to_string(seed) + ": greedy TP " +
                  std::to_string(greedy.pairs.size()) + " != exhaustive TP " +
                  std::to_string(best.pairs.size()));

    std::vector<bool> is_tp(preds.size(), false);
    for (const auto& pair : greedy.pairs) is_tp[pair.pred] = true;
    std::vector<std::pair<double, bool>> labels;
    for (std::size_t k = 0; k < preds.size(); ++k)
      labels.emplace_back(*preds[k].confidence, is_tp[k]);
    long long n_gt = 0;
    for (const auto& g : gts) n_gt += g.kind == NodeKind::T;

    const double ap = average_precision(labels, n_gt);
    const double ap_oracle = oracle::average_precision(labels, n_gt);
    if (std::abs(ap - ap_oracle) > 1e-9)
      return fail("seed " + std::to_string(seed) + ": AP " +
                  format_real(ap) + " vs oracle " + format_real(ap_oracle));
  }
  const double dt = seconds_since(t0);
  if (dt >= 10.0)
    return fail("took " + format_real(dt) + " s, budget 10 s");
  return {};
}

// --- 2: clean-raster inference recovers every scene ------------------------

std::string criterion_oracle_recovery() {
  const auto t0 = Clock::now();
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SynthParams p;
    p.seed = seed;
    const SceneAnnotation scene = gen_scene(p);  // defaults, self-checked
    const ProbRaster clean = render_clean_raster(scene);

    std::vector<TowerBox> towers;
    for (const auto& [id, box] : scene.graph.nodes()) towers.push_back(box);

    InferParams params;  // gamma 0.2, d 600 m, w 9
    const GridGraph inferred = infer_adjacency(towers, clean, params);
    const GraphScore score =
        graph_prf(inferred, scene.graph, kDefaultTauM, scene.scale);
    if (score.f1 != 1.0)
      return fail("seed " + std::to_string(seed) +
                  ": F1 = " + format_real(score.f1));
  }
  const double dt = seconds_since(t0);
  if (dt >= 60.0)
    return fail("took " + format_real(dt) + " s, budget 60 s");
  return {};
}

// --- 3: edge sets nest along the gamma and distance sweeps -----------------

std::string criterion_monotonicity() {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    SynthParams p;
    p.seed = 70000 + seed;
    p.n_towers = 8;
    p.rows = p.cols = 2000;
    p.span_min_m = 100;
    p.span_max_m = 140;
    p.min_separation_m = 30;
    p.ensure_oracle_recovery = false;
    p.raster_noise = {0.01, 1, 0.25};
    p.detection_noise.miss_prob = 0.1;
    p.detection_noise.false_prob = 0.1;
    p.detection_noise.jitter_sigma_m = 0.8;
    p.detection_noise.conf_model = {0.6, 1.0, 0.1, 0.7};
    const SceneAnnotation scene = gen_scene(p);
    const ProbRaster noisy =
        corrupt_raster(render_clean_raster(scene), p.raster_noise, p.seed);
    const DetectionSet raw =
        corrupt_detections(scene, p.detection_noise, p.seed);
    const DetectionSet towers = nms(filter_by_confidence(raw, 0.5), 0.5);

    auto edges_at = [&](double gamma, double d) {
      InferParams params;
      params.gamma = gamma;
      params.max_span_m = d;
      const GridGraph g = infer_adjacency(towers, noisy, params);
      return std::set<std::pair<NodeId, NodeId>>(g.edges().begin(),
                                                 g.edges().end());
    };
    auto is_subset = [](const auto& a, const auto& b) {
      for (const auto& e : a)
        if (!b.count(e)) return false;
      return true;
    };

    std::set<std::pair<NodeId, NodeId>> prev;
    bool first = true;
    for (const double gamma : {0.1, 0.2, 0.3}) {
      const auto edges = edges_at(gamma, 600.0);
      if (!first && !is_subset(edges, prev))
        return fail("seed " + std::to_string(seed) +
                    ": gamma sweep not nested at " + format_real(gamma));
      prev = edges;
      first = false;
    }
    first = true;
    for (const double d : {1000.0, 800.0, 600.0, 400.0, 200.0}) {
      const auto edges = edges_at(0.2, d);
      if (!first && !is_subset(edges, prev))
        return fail("seed " + std::to_string(seed) +
                    ": distance sweep not nested at " + format_real(d));
      prev = edges;
      first = false;
    }
  }
  return {};
}

// --- 4: centroid-true, half-scale boxes split DmAP from IoU mAP ------------

std::string criterion_dmap_map_gap() {
  const GeoScale scale(0.3);
  std::vector<TowerBox> gts;
  std::vector<TowerBox> preds;
  for (int k = 0; k < 8; ++k) {
    const double r = 40.0 + 25.0 * k;
    const double c = 30.0 + 40.0 * k;
    gts.push_back(TowerBox({r - 6, c - 6}, 12, 12));
    preds.push_back(
        TowerBox({r - 3, c - 3}, 6, 6, NodeKind::T, 1.0 - 0.05 * k));
  }
  for (std::size_t k = 0; k < preds.size(); ++k) {
    const double iou = box_iou(preds[k], gts[k]);
    if (std::abs(iou - 0.25) > 1e-12)
      return fail("constructed IoU is " + format_real(iou) + ", wanted 0.25");
  }
  const double d = dmap(preds, gts, kDefaultTauM, scale);
  const double m75 = map_iou(preds, gts, 0.75);
  if (d != 1.0) return fail("DmAP = " + format_real(d) + ", wanted exactly 1");
  if (m75 != 0.0)
    return fail("mAP_0.75 = " + format_real(m75) + ", wanted exactly 0");
  return {};
}

// --- 5: tile split/merge is lossless and EN counts match the oracle --------

std::string criterion_split_merge() {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    SynthParams p;
    p.seed = 50000 + seed;
    p.n_towers = 7;
    p.rows = p.cols = 1500;
    p.span_min_m = 60;
    p.span_max_m = 100;
    p.min_separation_m = 20;
    p.ensure_oracle_recovery = false;
    const SceneAnnotation scene = gen_scene(p);

    for (const int grid : {2, 3}) {
      const int tr = (scene.rows + grid - 1) / grid;
      const int tc = (scene.cols + grid - 1) / grid;
      const auto tiles = split_at_tiles(scene, tr, tc);

      long long en = 0;
      for (const auto& t : tiles)
        for (const auto& [id, box] : t.graph.nodes())
          en += box.kind == NodeKind::EN;
      const long long expected = oracle::en_count(scene, tr, tc);
      if (en != expected)
        return fail("seed " + std::to_string(seed) + " grid " +
                    std::to_string(grid) + ": EN count " + std::to_string(en) +
                    " != oracle " + std::to_string(expected));

      const MergeResult merged = merge_tiles(tiles);
      if (!merged.warnings.empty())
        return fail("seed " + std::to_string(seed) + ": merge warnings");
      if (!oracle::scenes_isomorphic(merged.scene, scene, 1e-6))
        return fail("seed " + std::to_string(seed) + " grid " +
                    std::to_string(grid) + ": round trip not isomorphic");
    }
  }
  return {};
}

// --- 6: band enumeration equals the window-scan oracle ---------------------

std::string criterion_rasterization_oracle() {
  Rng rng(62001);
  const int widths[] = {1, 9, 30};
  for (int it = 0; it < 1000; ++it) {
    const PixelPoint p{rng.uniform(-30, 150), rng.uniform(-30, 150)};
    const PixelPoint q{rng.uniform(-30, 150), rng.uniform(-30, 150)};
    const int width = widths[rng.below(3)];
    const auto got = thick_segment_pixels(p, q, width, 120, 120);
    const auto expected = oracle::band_pixels(p, q, width, 120, 120);
    if (got != expected)
      return fail("segment " + std::to_string(it) + " width " +
                  std::to_string(width) + ": " + std::to_string(got.size()) +
                  " vs " + std::to_string(expected.size()) + " pixels");
  }
  return {};
}

// --- 7: degenerate inputs keep their documented values ---------------------

std::string criterion_degenerate_inputs() {
  const GeoScale scale(0.3);
  try {
    // empty detections
    if (dmap({}, {TowerBox({0, 0}, 5, 5)}, kDefaultTauM, scale) != 0.0)
      return fail("dmap of no predictions should be 0");
    const GraphScore empty_pred = graph_prf(GridGraph(), GridGraph(), 3, scale);
    if (empty_pred.recall != 0.0 || empty_pred.precision != 0.0 ||
        empty_pred.f1 != 0.0)
      return fail("empty vs empty graph should score zeros");

    // empty gt
    if (average_precision({}, 0) != 1.0)
      return fail("no predictions, no gt should give AP 1");
    if (average_precision({{0.9, false}}, 0) != 0.0)
      return fail("predictions against no gt should give AP 0");

    // single-tower graphs
    GridGraph one;
    one.add_node(0, TowerBox({10, 10}, 5, 5));
    const GraphScore same = graph_prf(one, one, kDefaultTauM, scale);
    if (same.f1 != 1.0) return fail("single tower self-score should be 1");

    // all-OT ground truth
    GridGraph all_ot;
    all_ot.add_node(0, TowerBox({10, 10}, 5, 5, NodeKind::OT));
    const GraphScore ot = graph_prf(one, all_ot, kDefaultTauM, scale);
    if (ot.n_truth != 0 || ot.recall != 0.0 || ot.f1 != 0.0)
      return fail("all-OT gt should give empty truth and zero scores");

    // out-of-bounds paths
    ProbRaster tiny(16, 16, scale, 1.0f);
    if (path_score(tiny, {200, 200}, {240, 240}, 9) != 0.0)
      return fail("fully out-of-bounds path should score 0");
    InferStats stats;
    const std::vector<TowerBox> far = {
        TowerBox({200, 200}, 4, 4, NodeKind::T, 1.0),
        TowerBox({200, 230}, 4, 4, NodeKind::T, 1.0)};
    const GridGraph g = infer_adjacency(far, tiny, InferParams(), 1, &stats);
    if (g.edge_count() != 0 || stats.empty_path_pairs != 1)
      return fail("out-of-bounds candidates should stay unconnected");

    // empty tower list
    if (infer_adjacency({}, tiny, InferParams()).node_count() != 0)
      return fail("no towers should give an empty graph");
  } catch (const std::exception& e) {
    return fail(std::string("unexpected exception: ") + e.what());
  }
  return {};
}

// --- 8: big-tile scoring is fast and bit-stable across threads -------------

std::string criterion_throughput() {
  // 500 towers over a 5000 x 5000 px tile; d tuned to ~2000 candidates
  Rng rng(2024);
  const GeoScale scale(0.3);
  SceneAnnotation scene;
  scene.tile_id = "bench";
  scene.region = Region{"Synthetic"};
  scene.rows = scene.cols = 5000;
  scene.scale = scale;
  std::vector<PixelPoint> pts;
  while (pts.size() < 500) {
    const PixelPoint pt{rng.uniform(60, 4940), rng.uniform(60, 4940)};
    bool ok = true;
    for (const auto& other : pts)
      if (std::hypot(pt.row - other.row, pt.col - other.col) < 30) ok = false;
    if (ok) pts.push_back(pt);
  }
  for (std::size_t k = 0; k < pts.size(); ++k)
    scene.graph.add_node(static_cast<NodeId>(k),
                         TowerBox({pts[k].row - 5, pts[k].col - 5}, 10, 10));
  std::vector<std::pair<double, NodeId>> order;
  for (std::size_t k = 0; k < pts.size(); ++k)
    order.emplace_back(pts[k].row * 10000 + pts[k].col, static_cast<NodeId>(k));
  std::sort(order.begin(), order.end());
  for (std::size_t k = 0; k + 1 < order.size(); ++k)
    scene.graph.add_edge(order[k].second, order[k + 1].second);

  const ProbRaster raster = render_clean_raster(scene);
  std::vector<TowerBox> towers;
  for (const auto& [id, box] : scene.graph.nodes()) {
    TowerBox t = box;
    t.confidence = 1.0;
    towers.push_back(t);
  }
  InferParams params;
  params.max_span_m = 110.0;

  auto score_once = [&](int threads) {
    InferStats stats;
    const GridGraph inferred =
        infer_adjacency(towers, raster, params, threads, &stats);
    const GraphScore s =
        graph_prf(inferred, scene.graph, kDefaultTauM, scale);
    ScoreReport report;
    report.add_metric("recall", s.recall);
    report.add_metric("precision", s.precision);
    report.add_metric("f1", s.f1);
    report.add_count("c_t", s.matched_towers);
    report.add_count("c_l", s.matched_lines);
    report.add_count("candidates", stats.candidate_pairs);
    return std::pair{report.to_text(), stats.candidate_pairs};
  };

  const auto t0 = Clock::now();
  const auto [text1, candidates] = score_once(1);
  const double dt = seconds_since(t0);

  if (candidates < 500 || candidates > 8000)
    return fail("candidate count " + std::to_string(candidates) +
                " is far from the intended ~2000");
  if (dt >= 5.0)
    return fail("single-thread scoring took " + format_real(dt) +
                " s, budget 5 s");
  const auto [text2, c2] = score_once(1);
  if (text1 != text2) return fail("reports differ between identical runs");
  const auto [text8, c8] = score_once(8);
  if (text1 != text8) return fail("reports differ between 1 and 8 threads");
  std::printf("        (throughput: %lld candidates in %.2f s)\n",
              static_cast<long long>(candidates), dt);
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric-oracle equivalence (greedy vs exhaustive, AP vs enumeration)",
       criterion_metric_oracle},
      {2, "end-to-end oracle recovery (clean rasters, default gates)",
       criterion_oracle_recovery},
      {3, "gamma/distance sweep monotonicity on corrupted scenes",
       criterion_monotonicity},
      {4, "DmAP vs IoU-mAP gap on half-scale boxes", criterion_dmap_map_gap},
      {5, "tile split/merge round trip with EN-count oracle",
       criterion_split_merge},
      {6, "band rasterization equals the window-scan oracle",
       criterion_rasterization_oracle},
      {7, "degenerate-input conventions", criterion_degenerate_inputs},
      {8, "throughput and thread determinism on a 5000x5000 tile",
       criterion_throughput},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    std::string note;
    const auto t0 = Clock::now();
    try {
      note = c.run();
    } catch (const std::exception& e) {
      note = std::string("exception: ") + e.what();
    }
    const double dt = seconds_since(t0);
    if (note.empty()) {
      std::printf("PASS  criterion %d: %s  [%.2f s]\n", c.id, c.name.c_str(),
                  dt);
    } else {
      ++failures;
      std::printf("FAIL  criterion %d: %s  [%.2f s]\n      %s\n", c.id,
                  c.name.c_str(), dt, note.c_str());
    }
  }
  if (failures > 0) std::printf("%d criterion(s) failed\n", failures);
  return failures == 0 ? 0 : 1;
}
