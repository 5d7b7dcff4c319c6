#pragma once

#include <string>

#include "pgmap/graph.hpp"

namespace pgmap {

/// Geographic region label. Three canonical regions plus free-form names;
/// names must be single whitespace-free tokens.
struct Region {
  std::string name;

  bool is_canonical() const {
    return name == "Arizona" || name == "Kansas" || name == "NewZealand";
  }

  friend bool operator==(const Region& a, const Region& b) {
    return a.name == b.name;
  }
  friend bool operator<(const Region& a, const Region& b) {
    return a.name < b.name;
  }
};

inline const Region kArizona{"Arizona"};
inline const Region kKansas{"Kansas"};
inline const Region kNewZealand{"NewZealand"};

/// One tile's worth of annotation: the graph plus the raster extent it lives
/// in. Node centroids must lie inside [0, rows] x [0, cols]; EN nodes must
/// sit on a tile border (within 0.5 px) and have degree >= 1.
struct SceneAnnotation {
  std::string tile_id;
  Region region;
  int rows = 0;
  int cols = 0;
  GeoScale scale;
  GridGraph graph;

  friend bool operator==(const SceneAnnotation& a, const SceneAnnotation& b) {
    return a.tile_id == b.tile_id && a.region == b.region && a.rows == b.rows &&
           a.cols == b.cols && a.scale == b.scale && a.graph == b.graph;
  }
};

/// Throws ValidationError if any scene invariant is violated.
void validate_scene(const SceneAnnotation& scene);

}  // namespace pgmap
