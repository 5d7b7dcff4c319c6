#pragma once

#include <string>
#include <string_view>

#include "pgmap/scene.hpp"

namespace pgmap {

// Line-oriented scene format, UTF-8 with '\n' terminators and
// space-separated fields. Reals carry exactly 6 decimal places.
//
//   H <tile_id> <region> <rows> <cols> <meters_per_pixel>
//   N <id> <kind> <row> <col> <height> <width> [<confidence>]
//   E <id1> <id2>
//
// The writer emits the header, then nodes in graph order, then edges in
// normalized (min,max) order, so output is byte-stable.

/// Parses and validates a scene. Throws ParseError (with line number) on
/// syntax problems, ValidationError on semantic ones.
SceneAnnotation parse_annotation(std::string_view text);

std::string write_annotation(const SceneAnnotation& scene);

SceneAnnotation load_scene(const std::string& path);
void save_scene(const SceneAnnotation& scene, const std::string& path);

/// Fixed-point rendering used across all text formats: "%.6f".
std::string format_real(double value);

/// Rounds to the nearest value representable in the text formats, i.e.
/// parse(format(v)). Idempotent; coordinates produced by generators go
/// through this so files round-trip exactly.
double quantize_real(double value);

}  // namespace pgmap
