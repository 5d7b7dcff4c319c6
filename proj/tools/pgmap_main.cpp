// pgmap: power-grid graph inference and scoring toolkit.
//
// Subcommands cover the full pipeline: synthesize benchmark scenes, infer a
// geospatial graph from detector outputs, rasterize ground truth, score
// towers/graphs/segmentation, measure annotator agreement, build train/test
// manifests, and render overlays. Every command is a pure function of its
// files and flags.
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "pgmap/infer.hpp"
#include "pgmap/manifest.hpp"
#include "pgmap/metrics.hpp"
#include "pgmap/render.hpp"
#include "pgmap/scene_io.hpp"
#include "pgmap/synth.hpp"
#include "pgmap/tiling.hpp"

namespace fs = std::filesystem;
using namespace pgmap;

namespace {

constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

struct ScenePair {
  SceneAnnotation pred;
  SceneAnnotation gt;
};

bool scales_match(const GeoScale& a, const GeoScale& b) {
  return std::abs(a.meters_per_pixel() - b.meters_per_pixel()) < 1e-6;
}

std::vector<ScenePair> load_scene_pairs(const std::vector<std::string>& preds,
                                        const std::vector<std::string>& gts) {
  if (preds.empty() || preds.size() != gts.size())
    throw ValidationError("--pred and --gt need the same number of files");
  std::vector<ScenePair> pairs;
  for (std::size_t k = 0; k < preds.size(); ++k) {
    ScenePair pair{load_scene(preds[k]), load_scene(gts[k])};
    if (pair.pred.tile_id != pair.gt.tile_id)
      throw ValidationError("tile mismatch: " + pair.pred.tile_id + " vs " +
                            pair.gt.tile_id);
    if (!scales_match(pair.pred.scale, pair.gt.scale))
      throw ValidationError("scale mismatch on tile " + pair.gt.tile_id);
    pairs.push_back(std::move(pair));
  }
  return pairs;
}

template <class Pair>
std::map<std::string, std::vector<const Pair*>> group_by_region(
    const std::vector<Pair>& pairs) {
  std::map<std::string, std::vector<const Pair*>> groups;
  for (const auto& p : pairs) groups[p.gt.region.name].push_back(&p);
  return groups;
}

// Benchmark-table layout: one section per region plus an unweighted
// "Average" column over regions.
ScoreReport with_region_average(
    std::vector<std::pair<std::string, ScoreReport>> regions) {
  ScoreReport top;
  ScoreReport avg;
  if (!regions.empty()) {
    for (std::size_t m = 0; m < regions[0].second.metrics.size(); ++m) {
      const std::string& name = regions[0].second.metrics[m].first;
      double sum = 0.0;
      for (const auto& [rname, rreport] : regions)
        sum += rreport.metrics[m].second;
      avg.add_metric(name, sum / static_cast<double>(regions.size()));
    }
  }
  top.sections = std::move(regions);
  top.sections.emplace_back("Average", std::move(avg));
  return top;
}

void emit_report(const ScoreReport& report, const std::string& out_path) {
  const std::string text = report.to_text();
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw IoError("cannot open " + out_path + " for writing");
    out << text;
    if (!out) throw IoError("failed writing " + out_path);
  }
}

std::vector<TowerBox> graph_boxes(const GridGraph& g) {
  std::vector<TowerBox> boxes;
  for (const auto& [id, box] : g.nodes()) boxes.push_back(box);
  return boxes;
}

// Per-prediction (confidence, hit) labels for pooled AP across tiles.
void append_labels(const std::vector<TowerBox>& preds, const MatchResult& mr,
                   std::vector<std::pair<double, bool>>& labels) {
  std::vector<bool> is_tp(preds.size(), false);
  for (const auto& pair : mr.pairs) is_tp[pair.pred] = true;
  for (std::size_t k = 0; k < preds.size(); ++k)
    labels.emplace_back(preds[k].confidence.value_or(1.0), is_tp[k]);
}

long long count_t_kind(const std::vector<TowerBox>& boxes) {
  long long n = 0;
  for (const auto& b : boxes) n += b.kind == NodeKind::T;
  return n;
}

// ---------------------------------------------------------------- synth --

struct SynthCli {
  SynthParams params;
  std::string out_dir;
  bool no_ensure = false;
};

void run_synth(const SynthCli& cli) {
  SynthParams params = cli.params;
  params.ensure_oracle_recovery = !cli.no_ensure;

  const SceneAnnotation scene = gen_scene(params);
  const ProbRaster clean = render_clean_raster(scene, params.gt_line_width_px);
  const ProbRaster corrupted =
      corrupt_raster(clean, params.raster_noise, params.seed);
  const DetectionSet detections =
      corrupt_detections(scene, params.detection_noise, params.seed);

  SceneAnnotation det_scene;
  det_scene.tile_id = scene.tile_id;
  det_scene.region = scene.region;
  det_scene.rows = scene.rows;
  det_scene.cols = scene.cols;
  det_scene.scale = scene.scale;
  for (std::size_t k = 0; k < detections.size(); ++k)
    det_scene.graph.add_node(static_cast<NodeId>(k), detections[k]);

  fs::create_directories(cli.out_dir);
  save_scene(scene, cli.out_dir + "/scene.pgs");
  save_raster(clean, cli.out_dir + "/clean.pgr");
  save_raster(corrupted, cli.out_dir + "/raster.pgr");
  save_scene(det_scene, cli.out_dir + "/detections.pgs");
  std::cout << "wrote " << cli.out_dir
            << "/{scene.pgs,clean.pgr,raster.pgr,detections.pgs}\n";
}

// ---------------------------------------------------------------- infer --

struct InferCli {
  std::string detections_path;
  std::string raster_path;
  std::string out_path;
  InferParams params;
  double pgm_scale = 0.3;
  int threads = 1;
};

void run_infer(const InferCli& cli) {
  const SceneAnnotation det_scene = load_scene(cli.detections_path);
  const RasterLoadResult loaded =
      load_raster(cli.raster_path, GeoScale(cli.pgm_scale));
  if (loaded.clamped > 0)
    std::cerr << "note: clamped " << loaded.clamped
              << " out-of-range raster values\n";
  if (loaded.raster.rows != det_scene.rows ||
      loaded.raster.cols != det_scene.cols)
    throw ValidationError("raster shape does not match the detections tile");

  // EN nodes are bookkeeping, not towers; missing confidences mean
  // ground-truth boxes replayed as detections and rank as 1.0.
  DetectionSet dets;
  for (const auto& [id, box] : det_scene.graph.nodes()) {
    if (box.kind == NodeKind::EN) continue;
    TowerBox det = box;
    if (!det.confidence) det.confidence = 1.0;
    dets.push_back(det);
  }

  const DetectionSet kept =
      nms(filter_by_confidence(dets, cli.params.conf_threshold),
          cli.params.nms_overlap);

  InferStats stats;
  const GridGraph graph =
      infer_adjacency(kept, loaded.raster, cli.params, cli.threads, &stats);
  if (stats.empty_path_pairs > 0)
    std::cerr << "note: " << stats.empty_path_pairs
              << " candidate paths were fully out of bounds\n";

  SceneAnnotation out;
  out.tile_id = det_scene.tile_id;
  out.region = det_scene.region;
  out.rows = det_scene.rows;
  out.cols = det_scene.cols;
  out.scale = det_scene.scale;
  out.graph = graph;
  save_scene(out, cli.out_path);
  std::cout << "towers " << graph.node_count() << " edges "
            << graph.edge_count() << " candidates " << stats.candidate_pairs
            << "\n";
}

// ------------------------------------------------------------- scoring --

struct ScoreCli {
  std::vector<std::string> pred_paths;
  std::vector<std::string> gt_paths;
  double tau_m = kDefaultTauM;
  bool macro = false;
  std::string out_path;
};

void run_score_towers(const ScoreCli& cli) {
  const auto pairs = load_scene_pairs(cli.pred_paths, cli.gt_paths);
  std::vector<std::pair<std::string, ScoreReport>> regions;
  for (const auto& [region, tiles] : group_by_region(pairs)) {
    ScoreReport r;
    if (cli.macro) {
      double s_dmap = 0, s_50 = 0, s_75 = 0;
      for (const auto* t : tiles) {
        const auto preds = graph_boxes(t->pred.graph);
        const auto gts = graph_boxes(t->gt.graph);
        s_dmap += dmap(preds, gts, cli.tau_m, t->gt.scale);
        s_50 += map_iou(preds, gts, 0.5);
        s_75 += map_iou(preds, gts, 0.75);
      }
      const double n = static_cast<double>(tiles.size());
      r.add_metric("dmap", s_dmap / n);
      r.add_metric("map_50", s_50 / n);
      r.add_metric("map_75", s_75 / n);
    } else {
      std::vector<std::pair<double, bool>> ld, l50, l75;
      long long n_gt = 0, n_pred = 0;
      for (const auto* t : tiles) {
        const auto preds = graph_boxes(t->pred.graph);
        const auto gts = graph_boxes(t->gt.graph);
        append_labels(preds,
                      link_by_distance(preds, gts, cli.tau_m, t->gt.scale),
                      ld);
        append_labels(preds, link_by_iou(preds, gts, 0.5), l50);
        append_labels(preds, link_by_iou(preds, gts, 0.75), l75);
        n_gt += count_t_kind(gts);
        n_pred += static_cast<long long>(preds.size());
      }
      r.add_metric("dmap", average_precision(ld, n_gt));
      r.add_metric("map_50", average_precision(l50, n_gt));
      r.add_metric("map_75", average_precision(l75, n_gt));
      r.add_count("n_pred", n_pred);
      r.add_count("n_gt", n_gt);
    }
    regions.emplace_back(region, std::move(r));
  }
  emit_report(with_region_average(std::move(regions)), cli.out_path);
}

void run_score_graph(const ScoreCli& cli) {
  const auto pairs = load_scene_pairs(cli.pred_paths, cli.gt_paths);
  std::vector<std::pair<std::string, ScoreReport>> regions;
  for (const auto& [region, tiles] : group_by_region(pairs)) {
    ScoreReport r;
    long long c_t = 0, c_l = 0, n_pred = 0, n_truth = 0;
    double s_r = 0, s_p = 0, s_f = 0;
    for (const auto* t : tiles) {
      const GraphScore s =
          graph_prf(t->pred.graph, t->gt.graph, cli.tau_m, t->gt.scale);
      c_t += s.matched_towers;
      c_l += s.matched_lines;
      n_pred += s.n_pred;
      n_truth += s.n_truth;
      s_r += s.recall;
      s_p += s.precision;
      s_f += s.f1;
    }
    if (cli.macro) {
      const double n = static_cast<double>(tiles.size());
      r.add_metric("recall", s_r / n);
      r.add_metric("precision", s_p / n);
      r.add_metric("f1", s_f / n);
    } else {
      const double hits = static_cast<double>(c_t + c_l);
      const double recall = n_truth > 0 ? hits / n_truth : 0.0;
      const double precision = n_pred > 0 ? hits / n_pred : 0.0;
      const double f1 = recall + precision > 0
                            ? 2 * recall * precision / (recall + precision)
                            : 0.0;
      r.add_metric("recall", recall);
      r.add_metric("precision", precision);
      r.add_metric("f1", f1);
    }
    r.add_count("c_t", c_t);
    r.add_count("c_l", c_l);
    r.add_count("n_pred", n_pred);
    r.add_count("n_truth", n_truth);
    regions.emplace_back(region, std::move(r));
  }
  emit_report(with_region_average(std::move(regions)), cli.out_path);
}

struct ScoreLinesCli {
  std::vector<std::string> raster_paths;
  std::vector<std::string> gt_paths;
  double threshold = 0.5;
  int gt_width_px = 30;
  double pgm_scale = 0.3;
  bool macro = false;
  std::string out_path;
};

void run_score_lines(const ScoreLinesCli& cli) {
  if (cli.raster_paths.empty() ||
      cli.raster_paths.size() != cli.gt_paths.size())
    throw ValidationError(
        "--pred-raster and --gt need the same number of files");

  struct LinePair {
    RasterLoadResult pred;
    SceneAnnotation gt;
  };
  std::vector<LinePair> pairs;
  long long clamped = 0;
  for (std::size_t k = 0; k < cli.raster_paths.size(); ++k) {
    LinePair p{load_raster(cli.raster_paths[k], GeoScale(cli.pgm_scale)),
               load_scene(cli.gt_paths[k])};
    if (p.pred.raster.rows != p.gt.rows || p.pred.raster.cols != p.gt.cols)
      throw ValidationError("raster shape does not match tile " +
                            p.gt.tile_id);
    clamped += p.pred.clamped;
    pairs.push_back(std::move(p));
  }

  std::vector<std::pair<std::string, ScoreReport>> regions;
  for (const auto& [region, tiles] : group_by_region(pairs)) {
    ScoreReport r;
    long long inter = 0, uni = 0;
    double iou_sum = 0;
    for (const auto* t : tiles) {
      const BinaryMask pred = binarize(t->pred.raster, cli.threshold);
      const BinaryMask gt = rasterize_gt_lines(
          t->gt.graph, t->gt.rows, t->gt.cols, cli.gt_width_px, t->gt.scale);
      const MaskOverlap o = mask_overlap(pred, gt);
      inter += o.intersection;
      uni += o.set_union;
      iou_sum += o.set_union == 0
                     ? 1.0
                     : static_cast<double>(o.intersection) / o.set_union;
    }
    if (cli.macro) {
      r.add_metric("seg_iou", iou_sum / static_cast<double>(tiles.size()));
    } else {
      r.add_metric("seg_iou",
                   uni == 0 ? 1.0 : static_cast<double>(inter) / uni);
    }
    r.add_count("intersection_px", inter);
    r.add_count("union_px", uni);
    regions.emplace_back(region, std::move(r));
  }
  ScoreReport top = with_region_average(std::move(regions));
  if (clamped > 0) top.add_count("clamped_values", clamped);
  emit_report(top, cli.out_path);
}

void run_agreement(const ScoreCli& cli) {
  const auto pairs = load_scene_pairs(cli.pred_paths, cli.gt_paths);
  std::vector<std::pair<std::string, ScoreReport>> regions;
  for (const auto& [region, tiles] : group_by_region(pairs)) {
    ScoreReport r;
    long long t_matched = 0, t_denom = 0, l_matched = 0, l_denom = 0;
    std::vector<double> distances;
    for (const auto* t : tiles) {
      const AgreementResult ta =
          tower_agreement(t->pred.graph, t->gt.graph, cli.tau_m, t->gt.scale);
      const AgreementResult la =
          line_agreement(t->pred.graph, t->gt.graph, cli.tau_m, t->gt.scale);
      t_matched += ta.matched;
      t_denom += ta.denom;
      l_matched += la.matched;
      l_denom += la.denom;
      distances.insert(distances.end(), ta.matched_distances_m.begin(),
                       ta.matched_distances_m.end());
    }
    r.add_metric("tower_agreement_pct",
                 t_denom == 0 ? 100.0
                              : 100.0 * static_cast<double>(t_matched) /
                                    static_cast<double>(t_denom));
    r.add_metric("line_agreement_pct",
                 l_denom == 0 ? 100.0
                              : 100.0 * static_cast<double>(l_matched) /
                                    static_cast<double>(l_denom));
    // centroid-distance histogram of matched towers, 0.5 m bins up to tau
    const int n_bins =
        std::max(1, static_cast<int>(std::ceil(cli.tau_m / 0.5)));
    std::vector<long long> bins(n_bins, 0);
    for (const double d : distances) {
      int b = static_cast<int>(d / 0.5);
      if (b >= n_bins) b = n_bins - 1;
      ++bins[b];
    }
    for (int b = 0; b < n_bins; ++b) {
      char name[48];
      std::snprintf(name, sizeof(name), "hist_%.1fm_%.1fm", b * 0.5,
                    (b + 1) * 0.5);
      r.add_count(name, bins[b]);
    }
    regions.emplace_back(region, std::move(r));
  }
  emit_report(with_region_average(std::move(regions)), cli.out_path);
}

// --------------------------------------------------------------- others --

void run_split(const std::string& scenes_dir, const std::string& scheme_name,
               const std::string& out_dir) {
  std::vector<SceneAnnotation> scenes;
  std::vector<fs::path> files;
  if (!fs::is_directory(scenes_dir))
    throw IoError("not a directory: " + scenes_dir);
  for (const auto& entry : fs::directory_iterator(scenes_dir))
    if (entry.path().extension() == ".pgs") files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  for (const auto& f : files) scenes.push_back(load_scene(f.string()));

  const SplitScheme scheme = parse_split_scheme(scheme_name);
  const auto manifests = make_split_manifests(scheme, scenes);
  fs::create_directories(out_dir);
  for (const auto& m : manifests) {
    std::string name = "manifest_" + to_string(m.scheme);
    if (m.held_out_region) name += "_" + m.held_out_region->name;
    name += ".txt";
    const fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << write_manifest(m);
    if (!out) throw IoError("failed writing " + path.string());
    std::cout << path.string() << "\n";
  }
}

void run_rasterize(const std::string& gt_path, const std::string& out_path,
                   int width_px) {
  const SceneAnnotation gt = load_scene(gt_path);
  const BinaryMask mask =
      rasterize_gt_lines(gt.graph, gt.rows, gt.cols, width_px, gt.scale);
  save_raster(to_raster(mask), out_path);
  long long on = 0;
  for (const auto v : mask.values) on += v;
  std::cout << "mask " << mask.rows << "x" << mask.cols << " with " << on
            << " line pixels\n";
}

void run_render(const std::string& gt_path, const std::string& pred_path,
                const std::string& background_path,
                const std::string& out_path, int line_width,
                double pgm_scale) {
  const SceneAnnotation gt = load_scene(gt_path);
  std::optional<SceneAnnotation> pred;
  if (!pred_path.empty()) pred = load_scene(pred_path);
  std::optional<ProbRaster> background;
  if (!background_path.empty())
    background = load_raster(background_path, GeoScale(pgm_scale)).raster;

  RenderOptions options;
  options.line_width_px = line_width;
  const RgbImage img = render_overlay(gt, pred ? &*pred : nullptr,
                                      background ? &*background : nullptr,
                                      options);
  save_ppm(img, out_path);
  std::cout << "wrote " << out_path << " (" << img.cols << "x" << img.rows
            << ")\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"power-grid graph inference and scoring"};
  app.require_subcommand(1);

  SynthCli synth_cli;
  auto* synth_cmd = app.add_subcommand(
      "synth", "generate a synthetic scene, rasters, and detections");
  synth_cmd->add_option("--seed", synth_cli.params.seed, "rng seed");
  synth_cmd->add_option("--n-towers", synth_cli.params.n_towers,
                        "tower count");
  synth_cmd->add_option("--rows", synth_cli.params.rows, "tile rows (px)");
  synth_cmd->add_option("--cols", synth_cli.params.cols, "tile cols (px)");
  double synth_scale = 0.3;
  synth_cmd->add_option("--scale", synth_scale, "meters per pixel");
  std::string synth_region = "Synthetic", synth_tile;
  synth_cmd->add_option("--region", synth_region, "region label");
  synth_cmd->add_option("--tile-id", synth_tile, "tile id");
  synth_cmd->add_option("--span-min-m", synth_cli.params.span_min_m, "");
  synth_cmd->add_option("--span-max-m", synth_cli.params.span_max_m, "");
  synth_cmd->add_option("--degree-bias", synth_cli.params.degree_bias, "");
  synth_cmd->add_option("--miss-prob",
                        synth_cli.params.detection_noise.miss_prob, "");
  synth_cmd->add_option("--false-prob",
                        synth_cli.params.detection_noise.false_prob, "");
  synth_cmd->add_option("--jitter-sigma-m",
                        synth_cli.params.detection_noise.jitter_sigma_m, "");
  synth_cmd->add_option(
      "--true-conf-lo", synth_cli.params.detection_noise.conf_model.true_lo,
      "");
  synth_cmd->add_option(
      "--true-conf-hi", synth_cli.params.detection_noise.conf_model.true_hi,
      "");
  synth_cmd->add_option(
      "--false-conf-lo", synth_cli.params.detection_noise.conf_model.false_lo,
      "");
  synth_cmd->add_option(
      "--false-conf-hi", synth_cli.params.detection_noise.conf_model.false_hi,
      "");
  synth_cmd->add_option("--flip-prob",
                        synth_cli.params.raster_noise.flip_prob, "");
  synth_cmd->add_option("--blur-radius-px",
                        synth_cli.params.raster_noise.blur_radius_px, "");
  synth_cmd->add_option("--dropout-prob",
                        synth_cli.params.raster_noise.dropout_prob, "");
  synth_cmd->add_option("--max-attempts", synth_cli.params.max_attempts, "");
  synth_cmd->add_flag("--no-ensure-recovery", synth_cli.no_ensure,
                      "skip the clean-raster recoverability check");
  synth_cmd->add_option("--out-dir", synth_cli.out_dir, "output directory")
      ->required();

  InferCli infer_cli;
  auto* infer_cmd = app.add_subcommand(
      "infer", "infer the grid graph from detections and a line raster");
  infer_cmd->add_option("--detections", infer_cli.detections_path)->required();
  infer_cmd->add_option("--raster", infer_cli.raster_path)->required();
  infer_cmd->add_option("--out", infer_cli.out_path)->required();
  infer_cmd->add_option("--gamma", infer_cli.params.gamma,
                        "path score threshold");
  infer_cmd->add_option("--max-span-m", infer_cli.params.max_span_m,
                        "candidate distance gate (m)");
  infer_cmd->add_option("--path-width-px", infer_cli.params.path_width_px,
                        "integration band width");
  infer_cmd->add_option("--conf-threshold", infer_cli.params.conf_threshold,
                        "detection confidence gate");
  infer_cmd->add_option("--nms-overlap", infer_cli.params.nms_overlap,
                        "NMS IoU threshold");
  infer_cmd->add_option("--threads", infer_cli.threads, "worker threads");
  infer_cmd->add_option("--pgm-scale", infer_cli.pgm_scale,
                        "meters per pixel for PGM rasters");

  ScoreCli towers_cli;
  auto* towers_cmd = app.add_subcommand(
      "score-towers", "DmAP and IoU-mAP tower detection scores");
  towers_cmd->add_option("--pred", towers_cli.pred_paths)->required();
  towers_cmd->add_option("--gt", towers_cli.gt_paths)->required();
  towers_cmd->add_option("--tau-m", towers_cli.tau_m,
                         "centroid match radius");
  towers_cmd->add_flag("--macro", towers_cli.macro,
                       "average per-tile values instead of pooling");
  towers_cmd->add_option("--out", towers_cli.out_path,
                         "also write the report here");

  ScoreCli graph_cli;
  auto* graph_cmd =
      app.add_subcommand("score-graph", "graph recall/precision/F1");
  graph_cmd->add_option("--pred", graph_cli.pred_paths)->required();
  graph_cmd->add_option("--gt", graph_cli.gt_paths)->required();
  graph_cmd->add_option("--tau-m", graph_cli.tau_m, "centroid match radius");
  graph_cmd->add_flag("--macro", graph_cli.macro);
  graph_cmd->add_option("--out", graph_cli.out_path);

  ScoreLinesCli lines_cli;
  auto* lines_cmd =
      app.add_subcommand("score-lines", "segmentation IoU against gt lines");
  lines_cmd->add_option("--pred-raster", lines_cli.raster_paths)->required();
  lines_cmd->add_option("--gt", lines_cli.gt_paths)->required();
  lines_cmd->add_option("--threshold", lines_cli.threshold,
                        "binarization threshold");
  lines_cmd->add_option("--gt-width-px", lines_cli.gt_width_px,
                        "gt line width");
  lines_cmd->add_option("--pgm-scale", lines_cli.pgm_scale, "");
  lines_cmd->add_flag("--macro", lines_cli.macro);
  lines_cmd->add_option("--out", lines_cli.out_path);

  ScoreCli agree_cli;
  auto* agree_cmd = app.add_subcommand(
      "agreement", "tower/line agreement between two annotation sets");
  agree_cmd->add_option("--a", agree_cli.pred_paths)->required();
  agree_cmd->add_option("--b", agree_cli.gt_paths)->required();
  agree_cmd->add_option("--tau-m", agree_cli.tau_m, "");
  agree_cmd->add_option("--out", agree_cli.out_path);

  std::string split_dir, split_scheme = "A_conventional", split_out;
  auto* split_cmd = app.add_subcommand(
      "split", "build train/test manifests from a directory of scenes");
  split_cmd->add_option("--scenes-dir", split_dir)->required();
  split_cmd->add_option("--scheme", split_scheme,
                        "A_conventional | B_in_domain | C_leave_one_out");
  split_cmd->add_option("--out-dir", split_out)->required();

  std::string rast_gt, rast_out;
  int rast_width = 30;
  auto* rast_cmd = app.add_subcommand(
      "rasterize", "rasterize gt lines into a binary mask");
  rast_cmd->add_option("--gt", rast_gt)->required();
  rast_cmd->add_option("--out", rast_out)->required();
  rast_cmd->add_option("--width-px", rast_width, "line width in pixels");

  std::string render_gt, render_pred, render_bg, render_out;
  int render_width = 3;
  double render_pgm_scale = 0.3;
  auto* render_cmd = app.add_subcommand(
      "render", "overlay gt (green) and prediction (blue) into a PPM image");
  render_cmd->add_option("--gt", render_gt)->required();
  render_cmd->add_option("--pred", render_pred);
  render_cmd->add_option("--background", render_bg);
  render_cmd->add_option("--out", render_out)->required();
  render_cmd->add_option("--line-width-px", render_width, "");
  render_cmd->add_option("--pgm-scale", render_pgm_scale, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*synth_cmd) {
      synth_cli.params.scale = GeoScale(synth_scale);
      synth_cli.params.region = Region{synth_region};
      synth_cli.params.tile_id = synth_tile;
      run_synth(synth_cli);
    } else if (*infer_cmd) {
      run_infer(infer_cli);
    } else if (*towers_cmd) {
      run_score_towers(towers_cli);
    } else if (*graph_cmd) {
      run_score_graph(graph_cli);
    } else if (*lines_cmd) {
      run_score_lines(lines_cli);
    } else if (*agree_cmd) {
      run_agreement(agree_cli);
    } else if (*split_cmd) {
      run_split(split_dir, split_scheme, split_out);
    } else if (*rast_cmd) {
      run_rasterize(rast_gt, rast_out, rast_width);
    } else if (*render_cmd) {
      run_render(render_gt, render_pred, render_bg, render_out, render_width,
                 render_pgm_scale);
    }
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
