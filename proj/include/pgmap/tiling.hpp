#pragma once

#include <string>
#include <vector>

#include "pgmap/scene.hpp"

namespace pgmap {

// Tile decomposition. Each output tile is at most tile_rows x tile_cols
// pixels (edge tiles keep the remainder) and is self-contained: every edge
// that crosses a tile border is cut, per side, at the geometric crossing
// point and terminated with an artificial EN node there. Tiles a segment
// merely passes through receive a two-EN stub edge. Nodes belong to the tile
// containing their centroid; points exactly on an internal border belong to
// the lower-index tile.
//
// Output tile ids are "<parent>@r<i>c<j>"; merge_tiles relies on that naming
// to reassemble the grid.
std::vector<SceneAnnotation> split_at_tiles(const SceneAnnotation& scene,
                                            int tile_rows, int tile_cols);

struct MergeResult {
  SceneAnnotation scene;
  // One entry per EN node on an internal border that had no counterpart
  // within the 1 px fusion tolerance. The edge stays dangling on its EN.
  std::vector<std::string> warnings;
};

/// Inverse of split_at_tiles up to node ids and ordering: EN pairs within
/// 1 px of each other across an internal border are fused and contracted so
/// the original edges reappear. Throws ValidationError if the tiles do not
/// form a consistent grid.
MergeResult merge_tiles(const std::vector<SceneAnnotation>& tiles);

}  // namespace pgmap
