#include "pgmap/scene.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace pgmap {

namespace {

bool is_token(const std::string& s) {
  return !s.empty() &&
         std::none_of(s.begin(), s.end(), [](unsigned char c) {
           return std::isspace(c) != 0;
         });
}

}  // namespace

void validate_scene(const SceneAnnotation& scene) {
  if (!is_token(scene.tile_id))
    throw ValidationError("tile_id must be a non-empty token");
  if (!is_token(scene.region.name))
    throw ValidationError("region must be a non-empty token");
  if (scene.rows <= 0 || scene.cols <= 0)
    throw ValidationError("scene extent must be positive");

  for (const auto& [id, box] : scene.graph.nodes()) {
    const PixelPoint c = centroid(box);
    if (!(c.row >= 0.0 && c.row <= scene.rows && c.col >= 0.0 &&
          c.col <= scene.cols))
      throw ValidationError("node " + std::to_string(id) +
                            " centroid lies outside the tile");
    if (box.kind == NodeKind::EN) {
      const double to_border =
          std::min(std::min(c.row, scene.rows - c.row),
                   std::min(c.col, scene.cols - c.col));
      if (to_border > 0.5)
        throw ValidationError("EN node " + std::to_string(id) +
                              " does not lie on a tile border");
      if (scene.graph.degree(id) == 0)
        throw ValidationError("EN node " + std::to_string(id) +
                              " has no incident edge");
    }
  }
}

}  // namespace pgmap
