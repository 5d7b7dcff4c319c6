#include "doctest.h"

#include <algorithm>
#include <map>

#include "oracles.hpp"
#include "pgmap/scene_io.hpp"
#include "pgmap/synth.hpp"

using namespace pgmap;

TEST_SUITE_BEGIN("synth");

TEST_CASE("same seed reproduces byte-identical scenes") {
  SynthParams p;
  p.seed = 123;
  p.n_towers = 8;
  const SceneAnnotation a = gen_scene(p);
  const SceneAnnotation b = gen_scene(p);
  CHECK(write_annotation(a) == write_annotation(b));

  p.seed = 124;
  CHECK(write_annotation(gen_scene(p)) != write_annotation(a));
}

TEST_CASE("single tower scene has no edges") {
  SynthParams p;
  p.seed = 5;
  p.n_towers = 1;
  const SceneAnnotation s = gen_scene(p);
  CHECK(s.graph.node_count() == 1);
  CHECK(s.graph.edge_count() == 0);
}

TEST_CASE("full chain bias yields a path graph") {
  SynthParams p;
  p.seed = 9;
  p.n_towers = 5;
  p.degree_bias = 1.0;
  const SceneAnnotation s = gen_scene(p);
  CHECK(s.graph.node_count() == 5);
  CHECK(s.graph.edge_count() == 4);
  std::map<std::size_t, int> degree_histogram;
  for (const auto& [id, box] : s.graph.nodes())
    ++degree_histogram[s.graph.degree(id)];
  CHECK(degree_histogram[1] == 2);  // the two chain ends
  CHECK(degree_histogram[2] == 3);
}

TEST_CASE("generated scenes pass annio validation and span limits") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthParams p;
    p.seed = seed;
    p.n_towers = 8;
    const SceneAnnotation s = gen_scene(p);
    CHECK_NOTHROW(validate_scene(s));
    CHECK(parse_annotation(write_annotation(s)) == s);

    for (const auto& [a, b] : s.graph.edges()) {
      const double span_m =
          centroid_distance_m(s.graph.box(a), s.graph.box(b), s.scale);
      CHECK(span_m >= p.span_min_m - 1e-3);
      CHECK(span_m <= p.span_max_m + 1e-3);
    }
  }
}

TEST_CASE("default bias keeps most interior towers at degree 2") {
  long long interior = 0, degree2 = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    SynthParams p;
    p.seed = 300 + seed;
    p.n_towers = 10;
    p.rows = p.cols = 3000;
    p.ensure_oracle_recovery = false;
    const SceneAnnotation s = gen_scene(p);
    for (const auto& [id, box] : s.graph.nodes()) {
      const std::size_t d = s.graph.degree(id);
      if (d >= 2) {
        ++interior;
        degree2 += d == 2;
      }
    }
  }
  REQUIRE(interior > 0);
  CHECK(static_cast<double>(degree2) / interior >= 0.8);
}

TEST_CASE("infeasible packing raises after bounded attempts") {
  SynthParams p;
  p.seed = 1;
  p.n_towers = 100;
  p.rows = p.cols = 400;  // not enough room at 400-px spans
  p.max_attempts = 4;
  p.ensure_oracle_recovery = false;
  CHECK_THROWS_AS(gen_scene(p), ValidationError);
}

TEST_CASE("clean raster is binary with the right band") {
  SynthParams p;
  p.seed = 31;
  p.n_towers = 4;
  const SceneAnnotation s = gen_scene(p);
  const ProbRaster clean = render_clean_raster(s);
  for (const float v : clean.values) CHECK((v == 0.0f || v == 1.0f));

  const BinaryMask direct = rasterize_gt_lines(s.graph, s.rows, s.cols, 30);
  CHECK(binarize(clean, 0.5).values == direct.values);
}

TEST_CASE("raster corruption: identity, wipeout, and in-between") {
  SynthParams p;
  p.seed = 8;
  p.n_towers = 5;
  const SceneAnnotation s = gen_scene(p);
  const ProbRaster clean = render_clean_raster(s);

  CHECK(corrupt_raster(clean, RasterNoise{}, 7).values == clean.values);

  RasterNoise wipe;
  wipe.dropout_prob = 1.0;
  const ProbRaster gone = corrupt_raster(clean, wipe, 7);
  CHECK(std::count_if(gone.values.begin(), gone.values.end(),
                      [](float v) { return v != 0.0f; }) == 0);

  RasterNoise some{0.01, 1, 0.3};
  const ProbRaster noisy = corrupt_raster(clean, some, 7);
  for (const float v : noisy.values) {
    CHECK(v >= 0.0f);
    CHECK(v <= 1.0f);
  }
  const double iou = mask_iou(binarize(noisy, 0.5),
                              rasterize_gt_lines(s.graph, s.rows, s.cols, 30));
  CHECK(iou > 0.0);
  CHECK(iou < 1.0);

  // determinism in the seed
  CHECK(corrupt_raster(clean, some, 7).values == noisy.values);
  CHECK(corrupt_raster(clean, some, 8).values != noisy.values);
}

TEST_CASE("detection corruption: identity, misses, falses, jitter") {
  SynthParams p;
  p.seed = 14;
  p.n_towers = 6;
  const SceneAnnotation s = gen_scene(p);

  const DetectionSet exact = corrupt_detections(s, DetectionNoise{}, 3);
  REQUIRE(exact.size() == s.graph.node_count());
  for (std::size_t k = 0; k < exact.size(); ++k) {
    CHECK(exact[k].confidence == 1.0);
    CHECK(centroid(exact[k]) == centroid(s.graph.nodes()[k].second));
  }

  DetectionNoise all_missed;
  all_missed.miss_prob = 1.0;
  all_missed.false_prob = 0.05;
  all_missed.conf_model = {1.0, 1.0, 0.2, 0.6};
  const DetectionSet only_false = corrupt_detections(s, all_missed, 3);
  for (const auto& d : only_false) CHECK(*d.confidence <= 0.6);

  DetectionNoise jitter;
  jitter.jitter_sigma_m = 0.5;
  const DetectionSet jittered = corrupt_detections(s, jitter, 3);
  std::vector<TowerBox> gts;
  for (const auto& [id, box] : s.graph.nodes()) gts.push_back(box);
  CHECK(dmap(jittered, gts, 3.0, s.scale) == 1.0);
}

TEST_CASE("brute force matching basics") {
  const GeoScale scale(0.3);
  auto at = [](double r, double c) {
    return TowerBox({r - 2, c - 2}, 4, 4, NodeKind::T, 1.0);
  };

  const MatchResult one =
      brute_force_match({at(10, 10)}, {at(10, 12)}, 3.0, scale);
  CHECK(one.pairs.size() == 1);

  const MatchResult two_preds =
      brute_force_match({at(10, 10), at(10, 11)}, {at(10, 12)}, 3.0, scale);
  CHECK(two_preds.pairs.size() == 1);
  CHECK(two_preds.unmatched_pred.size() == 1);

  // interlocked case where greedy-by-confidence drops a pair
  // pred0 (conf high) reaches both gts, pred1 reaches only gt0
  const std::vector<TowerBox> preds = {
      TowerBox({8, 8}, 4, 4, NodeKind::T, 0.9),    // centroid (10,10)
      TowerBox({8, 0}, 4, 4, NodeKind::T, 0.5)};   // centroid (10,2)
  const std::vector<TowerBox> gts = {at(10, 8), at(10, 16)};
  const MatchResult greedy = link_by_distance(preds, gts, 3.0, scale);
  const MatchResult best = brute_force_match(preds, gts, 3.0, scale);
  CHECK(greedy.pairs.size() == 1);  // pred0 takes gt0, pred1 strands
  CHECK(best.pairs.size() == 2);

  // more than 10 per side is out of contract
  std::vector<TowerBox> many(11, at(0, 0));
  CHECK_THROWS_AS(brute_force_match(many, {at(0, 0)}, 3.0, scale),
                  ValidationError);
}

TEST_CASE("rng helpers are deterministic and in range") {
  Rng a(99), b(99);
  for (int k = 0; k < 1000; ++k) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(1);
  for (int k = 0; k < 1000; ++k) CHECK(c.below(7) < 7);
  Rng d(2);
  double sum = 0.0;
  for (int k = 0; k < 4000; ++k) sum += d.normal(0.0, 1.0);
  CHECK(std::abs(sum / 4000.0) < 0.1);
}

TEST_SUITE_END();
