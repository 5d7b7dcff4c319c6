#include "pgmap/synth.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pgmap/infer.hpp"
#include "pgmap/raster.hpp"
#include "pgmap/scene_io.hpp"

namespace pgmap {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("below(0)");
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return x % n;
}

double Rng::normal(double mean, double stddev) {
  if (has_spare_) {
    has_spare_ = false;
    return mean + stddev * spare_;
  }
  const double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
  const double u2 = uniform();
  const double mag = std::sqrt(-2.0 * std::log(u1));
  const double two_pi = 6.283185307179586476925286766559;
  spare_ = mag * std::sin(two_pi * u2);
  has_spare_ = true;
  return mean + stddev * mag * std::cos(two_pi * u2);
}

namespace {

double unit_from_hash(std::uint64_t h) { return (h >> 11) * 0x1.0p-53; }

void validate_params(const SynthParams& p) {
  if (p.n_towers < 0) throw ValidationError("n_towers must be >= 0");
  if (p.rows <= 0 || p.cols <= 0)
    throw ValidationError("scene extent must be positive");
  if (!(p.span_min_m > 0.0) || !(p.span_max_m >= p.span_min_m))
    throw ValidationError("span range is empty");
  if (!(p.turn_min_deg >= 0.0) || !(p.turn_max_deg >= p.turn_min_deg))
    throw ValidationError("turn range is empty");
  if (!(p.degree_bias >= 0.0 && p.degree_bias <= 1.0))
    throw ValidationError("degree_bias must lie in [0,1]");
  if (!(p.tower_size_min_px > 0.0) ||
      !(p.tower_size_max_px >= p.tower_size_min_px))
    throw ValidationError("tower size range is empty");
  for (const double prob :
       {p.raster_noise.flip_prob, p.raster_noise.dropout_prob,
        p.detection_noise.miss_prob, p.detection_noise.false_prob}) {
    if (!(prob >= 0.0 && prob <= 1.0))
      throw ValidationError("probabilities must lie in [0,1]");
  }
  if (p.raster_noise.blur_radius_px < 0)
    throw ValidationError("blur radius must be >= 0");
  if (!(p.detection_noise.jitter_sigma_m >= 0.0))
    throw ValidationError("jitter sigma must be >= 0");
  if (p.max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
}

struct Layout {
  std::vector<PixelPoint> centroids;
  std::vector<std::pair<int, int>> edges;
};

constexpr double kPi = 3.14159265358979323846;

// Incrementally painted union of the line bands laid down so far, with an
// undo buffer for the most recent edge so rejected placements roll back.
class BandScratch {
 public:
  BandScratch(int rows, int cols) : mask_(rows, cols, GeoScale()) {}

  void paint(PixelPoint a, PixelPoint b, int width_px) {
    undo_.clear();
    for_each_band_pixel(a, b, width_px, mask_.rows, mask_.cols,
                        [this](int r, int c) {
                          auto& v = mask_.at(r, c);
                          if (!v) {
                            v = 1;
                            undo_.push_back(
                                static_cast<std::size_t>(r) * mask_.cols + c);
                          }
                        });
  }
  void unpaint_last() {
    for (const std::size_t k : undo_) mask_.values[k] = 0;
    undo_.clear();
  }
  double chord_score(PixelPoint a, PixelPoint b, int width_px) const {
    long long covered = 0, total = 0;
    for_each_band_pixel(a, b, width_px, mask_.rows, mask_.cols,
                        [&](int r, int c) {
                          covered += mask_.at(r, c);
                          ++total;
                        });
    return total == 0 ? 0.0 : static_cast<double>(covered) / total;
  }

 private:
  BinaryMask mask_;
  std::vector<std::size_t> undo_;
};

std::optional<Layout> try_layout(const SynthParams& p, Rng& rng) {
  Layout layout;
  const double mpp = p.scale.meters_per_pixel();
  const double span_lo = p.span_min_m / mpp;
  const double span_hi = p.span_max_m / mpp;
  const double min_sep = p.min_separation_m / mpp;
  const double margin = p.border_margin_px;
  if (p.rows - 2 * margin <= 0 || p.cols - 2 * margin <= 0) return std::nullopt;

  BandScratch bands(p.rows, p.cols);
  const double oracle_span_px = p.oracle_span_m / mpp;

  int chain_end = -1;
  double chain_dir = 0.0;
  double chain_sign = 1.0;
  std::vector<std::vector<double>> incident_dirs;  // per tower

  auto in_bounds = [&](PixelPoint pt) {
    return pt.row >= margin && pt.row <= p.rows - margin && pt.col >= margin &&
           pt.col <= p.cols - margin;
  };
  auto separated = [&](PixelPoint pt) {
    for (const auto& c : layout.centroids) {
      if (std::hypot(pt.row - c.row, pt.col - c.col) < min_sep) return false;
    }
    return true;
  };
  auto angle_gap = [](double a, double b) {
    double d = std::fmod(std::abs(a - b), 2.0 * kPi);
    if (d > kPi) d = 2.0 * kPi - d;
    return d;
  };
  // Any two edges meeting at a tower must be clearly non-parallel and
  // clearly non-collinear, or the two-hop chord between their far ends runs
  // inside one of the drawn line bands.
  const double gap_lo = std::max(30.0, p.turn_min_deg - 10.0) * kPi / 180.0;
  const double gap_hi = std::min(150.0, p.turn_max_deg + 10.0) * kPi / 180.0;
  auto direction_clear = [&](int base, double dir) {
    for (const double d : incident_dirs[base]) {
      const double gap = angle_gap(dir, d);
      if (gap < gap_lo || gap > gap_hi) return false;
    }
    return true;
  };
  auto step_from = [&](int base, bool use_chain_dir) -> std::optional<int> {
    for (int t = 0; t < 32; ++t) {
      const double span = rng.uniform(span_lo, span_hi);
      double dir;
      if (use_chain_dir) {
        // Sawtooth: the turn sign usually alternates, so the chain advances
        // instead of folding onto itself.
        const double turn =
            rng.uniform(p.turn_min_deg, p.turn_max_deg) * kPi / 180.0;
        if (rng.bernoulli(0.8)) chain_sign = -chain_sign;
        dir = chain_dir + kPi + chain_sign * turn;
      } else {
        dir = rng.uniform(0.0, 2.0 * kPi);
      }
      if (!direction_clear(base, dir)) continue;
      const PixelPoint from = layout.centroids[base];
      const PixelPoint pt{from.row + span * std::sin(dir),
                          from.col + span * std::cos(dir)};
      if (!in_bounds(pt) || !separated(pt)) continue;

      // Would any chord from the new tower to a non-neighbor already clear
      // the inference gate on the clean raster? Then this spot is no good.
      if (p.ensure_oracle_recovery) {
        bands.paint(from, pt, p.gt_line_width_px);
        bool clean = true;
        for (std::size_t t = 0; t < layout.centroids.size() && clean; ++t) {
          if (static_cast<int>(t) == base) continue;
          const PixelPoint other = layout.centroids[t];
          if (std::hypot(pt.row - other.row, pt.col - other.col) >=
              oracle_span_px)
            continue;
          if (bands.chord_score(pt, other, p.oracle_path_width_px) >=
              p.oracle_reject_score)
            clean = false;
        }
        if (!clean) {
          bands.unpaint_last();
          continue;
        }
      }

      const int id = static_cast<int>(layout.centroids.size());
      layout.centroids.push_back(pt);
      layout.edges.emplace_back(base, id);
      incident_dirs[base].push_back(dir);
      incident_dirs.push_back({dir + kPi});
      chain_end = id;
      chain_dir = dir;
      return id;
    }
    return std::nullopt;
  };

  for (int k = 0; k < p.n_towers; ++k) {
    if (k == 0) {
      bool placed = false;
      for (int t = 0; t < 32 && !placed; ++t) {
        PixelPoint pt{rng.uniform(margin, p.rows - margin),
                      rng.uniform(margin, p.cols - margin)};
        if (!separated(pt)) continue;
        layout.centroids.push_back(pt);
        incident_dirs.push_back({});
        placed = true;
      }
      if (!placed) return std::nullopt;
      chain_end = 0;
      chain_dir = rng.uniform(0.0, 2.0 * kPi);
      chain_sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
      continue;
    }
    bool placed = false;
    if (rng.bernoulli(p.degree_bias) && chain_end >= 0)
      placed = step_from(chain_end, true).has_value();
    // Branch from existing towers instead of opening a second component, so
    // the scene stays connected and every chord stays angle-controlled.
    for (int b = 0; b < 8 && !placed; ++b) {
      const int base = static_cast<int>(rng.below(layout.centroids.size()));
      placed = step_from(base, false).has_value();
    }
    if (!placed) return std::nullopt;
  }
  return layout;
}

SceneAnnotation scene_from_layout(const SynthParams& p, const Layout& layout,
                                  Rng& rng) {
  SceneAnnotation scene;
  scene.tile_id =
      p.tile_id.empty() ? "synth_" + std::to_string(p.seed) : p.tile_id;
  scene.region = p.region;
  scene.rows = p.rows;
  scene.cols = p.cols;
  scene.scale = p.scale;
  for (std::size_t k = 0; k < layout.centroids.size(); ++k) {
    const double h =
        quantize_real(rng.uniform(p.tower_size_min_px, p.tower_size_max_px));
    const double w =
        quantize_real(rng.uniform(p.tower_size_min_px, p.tower_size_max_px));
    const PixelPoint c = layout.centroids[k];
    scene.graph.add_node(
        static_cast<NodeId>(k),
        TowerBox({quantize_real(c.row - h / 2.0), quantize_real(c.col - w / 2.0)},
                 h, w, NodeKind::T));
  }
  for (const auto& [a, b] : layout.edges) scene.graph.add_edge(a, b);
  return scene;
}

// True when clean-raster inference at the default gates recovers exactly the
// generated edges: every non-adjacent pair within the candidate distance
// must score clearly below gamma.
bool oracle_recoverable(const SynthParams& p, const SceneAnnotation& scene) {
  const ProbRaster clean = render_clean_raster(scene, p.gt_line_width_px);
  const auto& g = scene.graph;
  const auto& nodes = g.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (std::size_t j = i + 1; j < nodes.size(); ++j) {
      if (g.has_edge(nodes[i].first, nodes[j].first)) continue;
      if (centroid_distance_m(nodes[i].second, nodes[j].second, scene.scale) >=
          p.oracle_span_m)
        continue;
      const double s =
          path_score(clean, centroid(nodes[i].second),
                     centroid(nodes[j].second), p.oracle_path_width_px);
      if (s >= p.oracle_reject_score) return false;
    }
  }
  return true;
}

}  // namespace

SceneAnnotation gen_scene(const SynthParams& params) {
  validate_params(params);
  for (int attempt = 0; attempt < params.max_attempts; ++attempt) {
    Rng rng(splitmix64(params.seed ^ (0x5ca1ab1eull * attempt)));
    const auto layout = try_layout(params, rng);
    if (!layout) continue;
    SceneAnnotation scene = scene_from_layout(params, *layout, rng);
    if (params.ensure_oracle_recovery && params.n_towers > 1 &&
        !oracle_recoverable(params, scene))
      continue;
    validate_scene(scene);
    return scene;
  }
  throw ValidationError(
      "infeasible packing: no admissible scene after " +
      std::to_string(params.max_attempts) + " attempts");
}

ProbRaster render_clean_raster(const SceneAnnotation& scene, int width_px) {
  return to_raster(
      rasterize_gt_lines(scene.graph, scene.rows, scene.cols, width_px,
                         scene.scale));
}

ProbRaster corrupt_raster(const ProbRaster& raster, const RasterNoise& noise,
                          std::uint64_t seed) {
  if (noise.is_zero()) return raster;

  ProbRaster out = raster;
  constexpr int kBlock = 32;
  if (noise.dropout_prob > 0.0) {
    const std::uint64_t tag = splitmix64(seed ^ 0xd20b0c5ull);
    const int nbi = (out.rows + kBlock - 1) / kBlock;
    const int nbj = (out.cols + kBlock - 1) / kBlock;
    for (int bi = 0; bi < nbi; ++bi) {
      for (int bj = 0; bj < nbj; ++bj) {
        const std::uint64_t h =
            splitmix64(tag + static_cast<std::uint64_t>(bi) * nbj + bj);
        if (unit_from_hash(h) >= noise.dropout_prob) continue;
        const int r1 = std::min(out.rows, (bi + 1) * kBlock);
        const int c1 = std::min(out.cols, (bj + 1) * kBlock);
        for (int r = bi * kBlock; r < r1; ++r)
          for (int c = bj * kBlock; c < c1; ++c) out.at(r, c) = 0.0f;
      }
    }
  }
  if (noise.flip_prob > 0.0) {
    const std::uint64_t tag = splitmix64(seed ^ 0xf11b17ull);
    for (std::size_t k = 0; k < out.values.size(); ++k) {
      if (unit_from_hash(splitmix64(tag + k)) < noise.flip_prob)
        out.values[k] = 1.0f - out.values[k];
    }
  }
  if (noise.blur_radius_px > 0) {
    const int r = noise.blur_radius_px;
    ProbRaster tmp = out;
    // horizontal pass
    for (int row = 0; row < out.rows; ++row) {
      for (int col = 0; col < out.cols; ++col) {
        double sum = 0.0;
        int n = 0;
        for (int d = -r; d <= r; ++d) {
          const int c = col + d;
          if (c < 0 || c >= out.cols) continue;
          sum += out.at(row, c);
          ++n;
        }
        tmp.at(row, col) = static_cast<float>(sum / n);
      }
    }
    // vertical pass
    for (int row = 0; row < out.rows; ++row) {
      for (int col = 0; col < out.cols; ++col) {
        double sum = 0.0;
        int n = 0;
        for (int d = -r; d <= r; ++d) {
          const int rr = row + d;
          if (rr < 0 || rr >= out.rows) continue;
          sum += tmp.at(rr, col);
          ++n;
        }
        out.at(row, col) = static_cast<float>(sum / n);
      }
    }
  }
  return out;
}

DetectionSet corrupt_detections(const SceneAnnotation& scene,
                                const DetectionNoise& noise,
                                std::uint64_t seed) {
  Rng rng(splitmix64(seed ^ 0xde7ec7ull));
  const double sigma_px =
      noise.jitter_sigma_m / scene.scale.meters_per_pixel();
  DetectionSet out;

  auto clamp_centroid = [&](TowerBox box) {
    PixelPoint c = centroid(box);
    const double cr = std::clamp(c.row, 0.0, double(scene.rows));
    const double cc = std::clamp(c.col, 0.0, double(scene.cols));
    box.top_left.row = quantize_real(cr - box.height_px / 2.0);
    box.top_left.col = quantize_real(cc - box.width_px / 2.0);
    return box;
  };

  for (const auto& [id, box] : scene.graph.nodes()) {
    if (box.kind == NodeKind::EN) continue;
    if (rng.bernoulli(noise.miss_prob)) continue;
    TowerBox det = box;
    det.kind = NodeKind::T;
    det.top_left.row += rng.normal(0.0, sigma_px);
    det.top_left.col += rng.normal(0.0, sigma_px);
    det.confidence = quantize_real(
        rng.uniform(noise.conf_model.true_lo, noise.conf_model.true_hi));
    out.push_back(clamp_centroid(det));
  }

  if (noise.false_prob > 0.0) {
    constexpr int kCell = 256;
    constexpr double kFalseSizeMin = 8.0;
    constexpr double kFalseSizeMax = 16.0;
    const int nci = (scene.rows + kCell - 1) / kCell;
    const int ncj = (scene.cols + kCell - 1) / kCell;
    for (int ci = 0; ci < nci; ++ci) {
      for (int cj = 0; cj < ncj; ++cj) {
        if (!rng.bernoulli(noise.false_prob)) continue;
        const double h =
            quantize_real(rng.uniform(kFalseSizeMin, kFalseSizeMax));
        const double w =
            quantize_real(rng.uniform(kFalseSizeMin, kFalseSizeMax));
        const double r0 = ci * kCell;
        const double c0 = cj * kCell;
        const double r1 = std::min<double>(scene.rows, r0 + kCell);
        const double c1 = std::min<double>(scene.cols, c0 + kCell);
        TowerBox det({rng.uniform(r0, r1) - h / 2.0,
                      rng.uniform(c0, c1) - w / 2.0},
                     h, w, NodeKind::T,
                     quantize_real(rng.uniform(noise.conf_model.false_lo,
                                               noise.conf_model.false_hi)));
        out.push_back(clamp_centroid(det));
      }
    }
  }
  return out;
}

MatchResult brute_force_match(const std::vector<TowerBox>& preds,
                              const std::vector<TowerBox>& gts, double tau_m,
                              const GeoScale& scale) {
  std::vector<int> gt_idx;
  for (std::size_t g = 0; g < gts.size(); ++g)
    if (gts[g].kind == NodeKind::T) gt_idx.push_back(static_cast<int>(g));
  if (preds.size() > 10 || gt_idx.size() > 10)
    throw ValidationError("brute_force_match handles at most 10 boxes a side");

  const int n = static_cast<int>(preds.size());
  const int m = static_cast<int>(gt_idx.size());
  const int n_masks = 1 << m;

  // value[i][mask]: max TP pairs using preds i.. with gt availability ~mask.
  std::vector<std::vector<int>> value(n + 1, std::vector<int>(n_masks, 0));
  std::vector<std::vector<bool>> feasible(n, std::vector<bool>(m, false));
  for (int i = 0; i < n; ++i)
    for (int g = 0; g < m; ++g)
      feasible[i][g] =
          centroid_distance_m(preds[i], gts[gt_idx[g]], scale) <= tau_m;

  for (int i = n - 1; i >= 0; --i) {
    for (int mask = 0; mask < n_masks; ++mask) {
      int best = value[i + 1][mask];
      for (int g = 0; g < m; ++g) {
        if ((mask >> g) & 1 || !feasible[i][g]) continue;
        best = std::max(best, 1 + value[i + 1][mask | (1 << g)]);
      }
      value[i][mask] = best;
    }
  }

  MatchResult result;
  std::vector<bool> taken(m, false);
  int mask = 0;
  for (int i = 0; i < n; ++i) {
    int chosen = -1;
    for (int g = 0; g < m; ++g) {
      if ((mask >> g) & 1 || !feasible[i][g]) continue;
      if (1 + value[i + 1][mask | (1 << g)] == value[i][mask]) {
        chosen = g;
        break;
      }
    }
    if (chosen >= 0) {
      result.pairs.push_back(
          {i, gt_idx[chosen],
           centroid_distance_m(preds[i], gts[gt_idx[chosen]], scale)});
      taken[chosen] = true;
      mask |= 1 << chosen;
    } else {
      result.unmatched_pred.push_back(i);
    }
  }
  for (int g = 0; g < m; ++g)
    if (!taken[g]) result.unmatched_gt.push_back(gt_idx[g]);
  return result;
}

}  // namespace pgmap
