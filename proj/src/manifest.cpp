#include "pgmap/manifest.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "pgmap/error.hpp"

namespace pgmap {

std::string to_string(SplitScheme scheme) {
  switch (scheme) {
    case SplitScheme::Conventional: return "A_conventional";
    case SplitScheme::InDomain: return "B_in_domain";
    case SplitScheme::LeaveOneOut: return "C_leave_one_out";
  }
  throw ValidationError("unknown split scheme");
}

SplitScheme parse_split_scheme(const std::string& token) {
  if (token == "A_conventional") return SplitScheme::Conventional;
  if (token == "B_in_domain") return SplitScheme::InDomain;
  if (token == "C_leave_one_out") return SplitScheme::LeaveOneOut;
  throw ValidationError("unknown split scheme '" + token + "'");
}

namespace {

struct RegionTiles {
  std::vector<std::string> test;   // first 20%, lexicographic
  std::vector<std::string> train;  // the rest
};

std::map<Region, RegionTiles> partition_by_region(
    const std::vector<SceneAnnotation>& scenes) {
  std::map<Region, std::vector<std::string>> tiles;
  std::set<std::string> seen;
  for (const auto& scene : scenes) {
    if (!seen.insert(scene.tile_id).second)
      throw ValidationError("duplicate tile id '" + scene.tile_id + "'");
    tiles[scene.region].push_back(scene.tile_id);
  }
  if (tiles.empty()) throw ValidationError("no scenes to split");

  std::map<Region, RegionTiles> out;
  for (auto& [region, ids] : tiles) {
    std::sort(ids.begin(), ids.end());
    // First 20% of each region tests, rounded down, at least one tile.
    const std::size_t n_test =
        std::max<std::size_t>(1, ids.size() * 20 / 100);
    RegionTiles rt;
    rt.test.assign(ids.begin(), ids.begin() + n_test);
    rt.train.assign(ids.begin() + n_test, ids.end());
    out.emplace(region, std::move(rt));
  }
  return out;
}

}  // namespace

std::vector<SplitManifest> make_split_manifests(
    SplitScheme scheme, const std::vector<SceneAnnotation>& scenes) {
  const auto by_region = partition_by_region(scenes);
  std::vector<SplitManifest> out;

  switch (scheme) {
    case SplitScheme::Conventional: {
      SplitManifest m;
      m.scheme = scheme;
      for (const auto& [region, rt] : by_region) {
        m.train.insert(m.train.end(), rt.train.begin(), rt.train.end());
        m.test.insert(m.test.end(), rt.test.begin(), rt.test.end());
      }
      out.push_back(std::move(m));
      break;
    }
    case SplitScheme::InDomain: {
      for (const auto& [region, rt] : by_region) {
        SplitManifest m;
        m.scheme = scheme;
        m.held_out_region = region;
        m.train = rt.train;
        m.test = rt.test;
        out.push_back(std::move(m));
      }
      break;
    }
    case SplitScheme::LeaveOneOut: {
      if (by_region.size() < 2)
        throw ValidationError(
            "leave-one-out needs at least two regions");
      for (const auto& [held, held_rt] : by_region) {
        SplitManifest m;
        m.scheme = scheme;
        m.held_out_region = held;
        m.test = held_rt.test;
        for (const auto& [region, rt] : by_region) {
          if (region == held) continue;
          m.train.insert(m.train.end(), rt.train.begin(), rt.train.end());
        }
        out.push_back(std::move(m));
      }
      break;
    }
  }
  for (auto& m : out) {
    std::sort(m.train.begin(), m.train.end());
    std::sort(m.test.begin(), m.test.end());
  }
  return out;
}

std::string write_manifest(const SplitManifest& manifest) {
  std::string out = "M " + to_string(manifest.scheme) + " " +
                    (manifest.held_out_region ? manifest.held_out_region->name
                                              : std::string("-")) +
                    "\n";
  for (const auto& id : manifest.train) out += "train " + id + "\n";
  for (const auto& id : manifest.test) out += "test " + id + "\n";
  return out;
}

SplitManifest parse_manifest(std::string_view text) {
  SplitManifest m;
  bool have_header = false;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    if (tag == "M") {
      std::string scheme, held;
      if (!(ls >> scheme >> held))
        throw ParseError("manifest header needs scheme and held-out region",
                         lineno);
      try {
        m.scheme = parse_split_scheme(scheme);
      } catch (const ValidationError& e) {
        throw ParseError(e.what(), lineno);
      }
      if (held != "-") m.held_out_region = Region{held};
      have_header = true;
    } else if (tag == "train" || tag == "test") {
      std::string id;
      if (!(ls >> id)) throw ParseError("missing tile id", lineno);
      (tag == "train" ? m.train : m.test).push_back(id);
    } else {
      throw ParseError("unknown record tag '" + tag + "'", lineno);
    }
  }
  if (!have_header) throw ParseError("missing manifest header", 0);
  return m;
}

}  // namespace pgmap
