#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pgmap/scene.hpp"

namespace pgmap {

// Data-handling schemes. Test tiles are always the first 20% of each
// region's tiles in lexicographic tile_id order (rounded down, at least one
// per region), so every scheme sees the exact same test set.
//
//   Conventional: one manifest, train on all regions' train portions.
//   InDomain:     one manifest per region, train/test within that region.
//   LeaveOneOut:  one manifest per held-out region, train on the other
//                 regions' train portions only.
enum class SplitScheme { Conventional, InDomain, LeaveOneOut };

std::string to_string(SplitScheme scheme);
SplitScheme parse_split_scheme(const std::string& token);

struct SplitManifest {
  SplitScheme scheme = SplitScheme::Conventional;
  std::optional<Region> held_out_region;
  std::vector<std::string> train;
  std::vector<std::string> test;

  friend bool operator==(const SplitManifest& a, const SplitManifest& b) {
    return a.scheme == b.scheme && a.held_out_region == b.held_out_region &&
           a.train == b.train && a.test == b.test;
  }
};

/// Builds the manifests for `scheme` from the given scenes (only tile_id and
/// region are consulted). Throws ValidationError on duplicate tile ids, an
/// empty scene list, or LeaveOneOut with fewer than two regions.
std::vector<SplitManifest> make_split_manifests(
    SplitScheme scheme, const std::vector<SceneAnnotation>& scenes);

// Manifest text format, same conventions as the scene format:
//   M <scheme> <held_out_region|->
//   train <tile_id>
//   test <tile_id>
std::string write_manifest(const SplitManifest& manifest);
SplitManifest parse_manifest(std::string_view text);

}  // namespace pgmap
