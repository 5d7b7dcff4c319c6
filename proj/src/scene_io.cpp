#include "pgmap/scene_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "pgmap/error.hpp"

namespace pgmap {

std::string format_real(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

double quantize_real(double value) {
  return std::strtod(format_real(value).c_str(), nullptr);
}

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

double parse_real(const std::string& tok, int line) {
  char* end = nullptr;
  const double v = std::strtod(tok.c_str(), &end);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ParseError("expected a number, got '" + tok + "'", line);
  return v;
}

long parse_int(const std::string& tok, int line) {
  char* end = nullptr;
  const long v = std::strtol(tok.c_str(), &end, 10);
  if (end != tok.c_str() + tok.size() || tok.empty())
    throw ParseError("expected an integer, got '" + tok + "'", line);
  return v;
}

}  // namespace

SceneAnnotation parse_annotation(std::string_view text) {
  SceneAnnotation scene;
  bool have_header = false;
  std::vector<std::pair<std::pair<NodeId, NodeId>, int>> pending_edges;

  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& tag = toks[0];

    if (tag == "H") {
      if (have_header) throw ParseError("duplicate header", lineno);
      if (toks.size() != 6)
        throw ParseError("header needs tile_id, region, rows, cols, m/px",
                         lineno);
      scene.tile_id = toks[1];
      scene.region = Region{toks[2]};
      scene.rows = static_cast<int>(parse_int(toks[3], lineno));
      scene.cols = static_cast<int>(parse_int(toks[4], lineno));
      scene.scale = GeoScale(parse_real(toks[5], lineno));
      have_header = true;
    } else if (tag == "N") {
      if (!have_header) throw ParseError("node record before header", lineno);
      if (toks.size() != 7 && toks.size() != 8)
        throw ParseError("node record needs id, kind, r, c, h, w [conf]",
                         lineno);
      const NodeId id = static_cast<NodeId>(parse_int(toks[1], lineno));
      NodeKind kind;
      try {
        kind = parse_node_kind(toks[2]);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), lineno);
      }
      const double r = parse_real(toks[3], lineno);
      const double c = parse_real(toks[4], lineno);
      const double h = parse_real(toks[5], lineno);
      const double w = parse_real(toks[6], lineno);
      std::optional<double> conf;
      if (toks.size() == 8) conf = parse_real(toks[7], lineno);
      std::optional<TowerBox> box;
      try {
        box.emplace(PixelPoint{r, c}, h, w, kind, conf);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), lineno);
      }
      // Duplicate ids stay a ValidationError: a cross-record integrity
      // problem, not a problem with this line's syntax.
      scene.graph.add_node(id, *box);
    } else if (tag == "E") {
      if (!have_header) throw ParseError("edge record before header", lineno);
      if (toks.size() != 3)
        throw ParseError("edge record needs two node ids", lineno);
      pending_edges.push_back(
          {{static_cast<NodeId>(parse_int(toks[1], lineno)),
            static_cast<NodeId>(parse_int(toks[2], lineno))},
           lineno});
    } else {
      throw ParseError("unknown record tag '" + tag + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing header record", 0);

  for (const auto& [edge, at] : pending_edges) {
    (void)at;
    scene.graph.add_edge(edge.first, edge.second);
  }
  validate_scene(scene);
  return scene;
}

std::string write_annotation(const SceneAnnotation& scene) {
  std::string out;
  out += "H " + scene.tile_id + " " + scene.region.name + " " +
         std::to_string(scene.rows) + " " + std::to_string(scene.cols) + " " +
         format_real(scene.scale.meters_per_pixel()) + "\n";
  for (const auto& [id, box] : scene.graph.nodes()) {
    out += "N " + std::to_string(id) + " " + to_string(box.kind) + " " +
           format_real(box.top_left.row) + " " + format_real(box.top_left.col) +
           " " + format_real(box.height_px) + " " + format_real(box.width_px);
    if (box.confidence) out += " " + format_real(*box.confidence);
    out += "\n";
  }
  for (const auto& [a, b] : scene.graph.edges())
    out += "E " + std::to_string(a) + " " + std::to_string(b) + "\n";
  return out;
}

SceneAnnotation load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_annotation(buf.str());
}

void save_scene(const SceneAnnotation& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << write_annotation(scene);
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace pgmap
