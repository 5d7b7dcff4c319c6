#pragma once

#include <cstdint>
#include <random>

#include "pgmap/metrics.hpp"
#include "pgmap/scene.hpp"

namespace pgmap {

/// Seeded random source with fixed value mappings so that identical seeds
/// reproduce identical scenes on every platform. The engine is the standard
/// mt19937_64; uniforms come from the top 53 bits, bounded integers from
/// rejection sampling, and normals from Box-Muller.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [0, n), n >= 1; unbiased via rejection.
  std::uint64_t below(std::uint64_t n);

  bool bernoulli(double p) { return uniform() < p; }

  double normal(double mean, double stddev);

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Stateless per-coordinate hash used for raster noise.
std::uint64_t splitmix64(std::uint64_t x);

struct RasterNoise {
  double flip_prob = 0.0;      // per-pixel value flip v -> 1-v (speckle)
  int blur_radius_px = 0;      // box blur radius, 0 = none
  double dropout_prob = 0.0;   // per 32x32 block, zeroes the block

  bool is_zero() const {
    return flip_prob == 0.0 && blur_radius_px == 0 && dropout_prob == 0.0;
  }
};

struct ConfModel {
  // Confidence ranges for surviving true boxes and injected false boxes.
  // Defaults keep the zero-noise case exact: true boxes score 1.0.
  double true_lo = 1.0;
  double true_hi = 1.0;
  double false_lo = 0.25;
  double false_hi = 0.75;
};

struct DetectionNoise {
  double miss_prob = 0.0;      // drop a true tower
  double false_prob = 0.0;     // per 256 px grid cell, add a false box
  double jitter_sigma_m = 0.0; // gaussian centroid jitter
  ConfModel conf_model;
};

struct SynthParams {
  std::uint64_t seed = 0;
  int n_towers = 8;
  int rows = 3000;
  int cols = 3000;
  GeoScale scale;

  // Chain geometry. Spans are drawn uniformly from span_m; consecutive
  // spans bend by an angle drawn from turn_deg with a mostly-alternating
  // sign, so chains zigzag forward instead of folding. The defaults keep
  // every non-edge pair's path score well under the gamma = 0.2 inference
  // gate on clean rasters, which the oracle check below then enforces
  // outright.
  double span_min_m = 150.0;
  double span_max_m = 200.0;
  double turn_min_deg = 70.0;
  double turn_max_deg = 110.0;
  double degree_bias = 0.9;      // probability of extending the current chain
  double min_separation_m = 140.0;
  double border_margin_px = 60.0;
  double tower_size_min_px = 8.0;
  double tower_size_max_px = 16.0;

  std::string tile_id;  // default: "synth_<seed>"
  Region region{"Synthetic"};

  // When set, candidate scenes are rejected (and regenerated from a derived
  // seed) until no non-adjacent pair within oracle_span_m scores at least
  // oracle_reject_score on the clean width-30 raster with a width-9 band, so
  // default-parameter inference recovers the graph exactly.
  bool ensure_oracle_recovery = true;
  double oracle_span_m = 600.0;
  double oracle_reject_score = 0.19;
  int gt_line_width_px = 30;
  int oracle_path_width_px = 9;
  int max_attempts = 64;

  RasterNoise raster_noise;
  DetectionNoise detection_noise;
};

/// Deterministic synthetic scene: a forest of mostly degree-2 tower chains.
/// Throws ValidationError when the parameters cannot be packed into the
/// tile (after max_attempts tries).
SceneAnnotation gen_scene(const SynthParams& params);

/// Ground-truth rasterization cast to probabilities {0.0, 1.0}.
ProbRaster render_clean_raster(const SceneAnnotation& scene,
                               int width_px = 30);

/// Applies block dropout, per-pixel speckle, and box blur, in that order.
/// Zero noise returns the input unchanged; output stays in [0,1].
ProbRaster corrupt_raster(const ProbRaster& raster, const RasterNoise& noise,
                          std::uint64_t seed);

/// Simulated detector output for a scene: true towers survive with
/// probability 1-miss_prob (jittered, confidence from the true range) and
/// false boxes appear per grid cell with probability false_prob. EN nodes
/// are never emitted. With zero noise this is the gt boxes at confidence 1.
DetectionSet corrupt_detections(const SceneAnnotation& scene,
                                const DetectionNoise& noise,
                                std::uint64_t seed);

/// Exhaustive max-cardinality one-to-one matching under the distance-tau
/// criterion (T-kind ground truth only). Both sides limited to 10 boxes;
/// test oracle for the greedy linker.
MatchResult brute_force_match(const std::vector<TowerBox>& preds,
                              const std::vector<TowerBox>& gts, double tau_m,
                              const GeoScale& scale);

}  // namespace pgmap
