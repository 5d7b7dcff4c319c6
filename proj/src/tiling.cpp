#include "pgmap/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <tuple>

#include "pgmap/error.hpp"

namespace pgmap {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

// Tile index along one axis. Points exactly on an internal border belong to
// the lower-index side.
int tile_index(double coord, int tile_size, int n_tiles) {
  int idx = static_cast<int>(std::floor(coord / tile_size));
  if (idx > 0 && coord == static_cast<double>(idx) * tile_size) --idx;
  return std::clamp(idx, 0, n_tiles - 1);
}

struct Span {
  double t0 = 0.0;
  double t1 = 1.0;
};

// Liang-Barsky interval of t for which a + t*(b-a) stays inside the closed
// rectangle [r0,r1] x [c0,c1].
std::optional<Span> clip_segment(PixelPoint a, PixelPoint b, double r0,
                                 double r1, double c0, double c1) {
  Span s;
  auto narrow = [&s](double start, double delta, double lo, double hi) {
    if (delta == 0.0) return start >= lo && start <= hi;
    double ta = (lo - start) / delta;
    double tb = (hi - start) / delta;
    if (ta > tb) std::swap(ta, tb);
    s.t0 = std::max(s.t0, ta);
    s.t1 = std::min(s.t1, tb);
    return true;
  };
  const double dr = b.row - a.row;
  const double dc = b.col - a.col;
  if (!narrow(a.row, dr, r0, r1)) return std::nullopt;
  if (!narrow(a.col, dc, c0, c1)) return std::nullopt;
  if (s.t0 > s.t1) return std::nullopt;
  return s;
}

PixelPoint lerp(PixelPoint a, PixelPoint b, double t) {
  return {a.row + t * (b.row - a.row), a.col + t * (b.col - a.col)};
}

struct TileIndexPair {
  int i = 0;
  int j = 0;
  friend bool operator==(TileIndexPair a, TileIndexPair b) {
    return a.i == b.i && a.j == b.j;
  }
};

}  // namespace

std::vector<SceneAnnotation> split_at_tiles(const SceneAnnotation& scene,
                                            int tile_rows, int tile_cols) {
  if (tile_rows <= 0 || tile_cols <= 0)
    throw ValidationError("tile dimensions must be positive");

  const int n_tr = ceil_div(scene.rows, tile_rows);
  const int n_tc = ceil_div(scene.cols, tile_cols);

  std::vector<SceneAnnotation> tiles(static_cast<std::size_t>(n_tr) * n_tc);
  for (int i = 0; i < n_tr; ++i) {
    for (int j = 0; j < n_tc; ++j) {
      SceneAnnotation& t = tiles[static_cast<std::size_t>(i) * n_tc + j];
      t.tile_id = scene.tile_id + "@r" + std::to_string(i) + "c" +
                  std::to_string(j);
      t.region = scene.region;
      t.scale = scene.scale;
      t.rows = std::min((i + 1) * tile_rows, scene.rows) - i * tile_rows;
      t.cols = std::min((j + 1) * tile_cols, scene.cols) - j * tile_cols;
    }
  }
  auto tile_at = [&](TileIndexPair t) -> SceneAnnotation& {
    return tiles[static_cast<std::size_t>(t.i) * n_tc + t.j];
  };
  auto tile_of = [&](PixelPoint p) {
    return TileIndexPair{tile_index(p.row, tile_rows, n_tr),
                         tile_index(p.col, tile_cols, n_tc)};
  };
  auto origin_of = [&](TileIndexPair t) {
    return PixelPoint{static_cast<double>(t.i) * tile_rows,
                      static_cast<double>(t.j) * tile_cols};
  };

  // Nodes go to the tile containing their centroid; boxes may hang over.
  std::map<NodeId, TileIndexPair> node_tile;
  NodeId next_id = 0;
  for (const auto& [id, box] : scene.graph.nodes()) {
    const TileIndexPair t = tile_of(centroid(box));
    node_tile.emplace(id, t);
    const PixelPoint o = origin_of(t);
    TowerBox local = box;
    local.top_left = box.top_left - o;
    tile_at(t).graph.add_node(id, local);
    next_id = std::max(next_id, id + 1);
  }

  for (const auto& [u, v] : scene.graph.edges()) {
    const TileIndexPair tu = node_tile.at(u);
    const TileIndexPair tv = node_tile.at(v);
    if (tu == tv) {
      tile_at(tu).graph.add_edge(u, v);
      continue;
    }

    const PixelPoint pu = centroid(scene.graph.box(u));
    const PixelPoint pv = centroid(scene.graph.box(v));

    const int i0 = std::clamp(static_cast<int>(std::floor(
                                  std::min(pu.row, pv.row) / tile_rows)) - 1,
                              0, n_tr - 1);
    const int i1 = std::clamp(static_cast<int>(std::floor(
                                  std::max(pu.row, pv.row) / tile_rows)) + 1,
                              0, n_tr - 1);
    const int j0 = std::clamp(static_cast<int>(std::floor(
                                  std::min(pu.col, pv.col) / tile_cols)) - 1,
                              0, n_tc - 1);
    const int j1 = std::clamp(static_cast<int>(std::floor(
                                  std::max(pu.col, pv.col) / tile_cols)) + 1,
                              0, n_tc - 1);

    for (int i = i0; i <= i1; ++i) {
      for (int j = j0; j <= j1; ++j) {
        const TileIndexPair tij{i, j};
        const double r0 = static_cast<double>(i) * tile_rows;
        const double r1 = r0 + tile_at(tij).rows;
        const double c0 = static_cast<double>(j) * tile_cols;
        const double c1 = c0 + tile_at(tij).cols;
        const auto span = clip_segment(pu, pv, r0, r1, c0, c1);
        if (!span || !(span->t1 > span->t0)) continue;
        // Sub-segments running along a shared border would be claimed by
        // both tiles; the midpoint rule keeps exactly one.
        const PixelPoint mid = lerp(pu, pv, (span->t0 + span->t1) / 2.0);
        if (!(tile_of(mid) == tij)) continue;

        SceneAnnotation& tile = tile_at(tij);
        const PixelPoint o = origin_of(tij);
        // A clip end at t=0 or t=1 is the original node when this tile owns
        // it; otherwise the line meets this tile's border there and gets an
        // EN node.
        auto endpoint = [&](double t, double t_node, NodeId original,
                            TileIndexPair home) -> NodeId {
          if (t == t_node && home == tij) return original;
          PixelPoint g = lerp(pu, pv, t);
          PixelPoint local{std::clamp(g.row - o.row, 0.0, double(tile.rows)),
                           std::clamp(g.col - o.col, 0.0, double(tile.cols))};
          const NodeId id = next_id++;
          tile.graph.add_node(id, TowerBox::edge_node(local));
          return id;
        };
        const NodeId a = endpoint(span->t0, 0.0, u, tu);
        const NodeId b = endpoint(span->t1, 1.0, v, tv);
        tile.graph.add_edge(a, b);
      }
    }
  }
  return tiles;
}

namespace {

struct ParsedTileId {
  std::string parent;
  int i = 0;
  int j = 0;
};

std::optional<ParsedTileId> parse_tile_id(const std::string& id) {
  const auto at = id.rfind("@r");
  if (at == std::string::npos) return std::nullopt;
  const auto c = id.find('c', at + 2);
  if (c == std::string::npos) return std::nullopt;
  try {
    ParsedTileId p;
    std::size_t used = 0;
    p.parent = id.substr(0, at);
    p.i = std::stoi(id.substr(at + 2, c - at - 2), &used);
    if (used != c - at - 2) return std::nullopt;
    p.j = std::stoi(id.substr(c + 1), &used);
    if (used != id.size() - c - 1) return std::nullopt;
    if (p.i < 0 || p.j < 0 || p.parent.empty()) return std::nullopt;
    return p;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

struct MergedNode {
  TowerBox box;          // global coordinates
  std::string tile_id;   // provenance, for warnings
  NodeId orig_id = 0;
  bool contracted = false;
  bool fused = false;
};

}  // namespace

MergeResult merge_tiles(const std::vector<SceneAnnotation>& tiles) {
  if (tiles.empty()) throw ValidationError("nothing to merge");

  std::vector<ParsedTileId> parsed(tiles.size());
  for (std::size_t k = 0; k < tiles.size(); ++k) {
    const auto p = parse_tile_id(tiles[k].tile_id);
    if (!p) {
      if (tiles.size() == 1) return {tiles[0], {}};
      throw ValidationError("tile id '" + tiles[k].tile_id +
                            "' lacks the @r<i>c<j> grid suffix");
    }
    parsed[k] = *p;
  }

  int n_tr = 0, n_tc = 0;
  for (const auto& p : parsed) {
    if (p.parent != parsed[0].parent)
      throw ValidationError("tiles come from different parents");
    n_tr = std::max(n_tr, p.i + 1);
    n_tc = std::max(n_tc, p.j + 1);
  }
  std::vector<int> tile_pos(static_cast<std::size_t>(n_tr) * n_tc, -1);
  for (std::size_t k = 0; k < tiles.size(); ++k) {
    int& slot = tile_pos[static_cast<std::size_t>(parsed[k].i) * n_tc +
                         parsed[k].j];
    if (slot != -1) throw ValidationError("duplicate grid tile");
    slot = static_cast<int>(k);
  }
  if (tiles.size() != static_cast<std::size_t>(n_tr) * n_tc)
    throw ValidationError("tiles do not form a complete grid");

  std::vector<int> row_h(n_tr, -1), col_w(n_tc, -1);
  for (std::size_t k = 0; k < tiles.size(); ++k) {
    if (!(tiles[k].scale == tiles[0].scale) ||
        !(tiles[k].region == tiles[0].region))
      throw ValidationError("tiles disagree on scale or region");
    int& h = row_h[parsed[k].i];
    int& w = col_w[parsed[k].j];
    if (h == -1) h = tiles[k].rows;
    if (w == -1) w = tiles[k].cols;
    if (h != tiles[k].rows || w != tiles[k].cols)
      throw ValidationError("tile shapes disagree within the grid");
  }
  std::vector<double> row_origin(n_tr + 1, 0.0), col_origin(n_tc + 1, 0.0);
  for (int i = 0; i < n_tr; ++i) row_origin[i + 1] = row_origin[i] + row_h[i];
  for (int j = 0; j < n_tc; ++j) col_origin[j + 1] = col_origin[j] + col_w[j];

  // Flatten nodes and edges into temp indices, tiles in grid order.
  std::vector<MergedNode> nodes;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n_tr; ++i) {
    for (int j = 0; j < n_tc; ++j) {
      const SceneAnnotation& t =
          tiles[tile_pos[static_cast<std::size_t>(i) * n_tc + j]];
      const PixelPoint o{row_origin[i], col_origin[j]};
      std::map<NodeId, int> local;
      for (const auto& [id, box] : t.graph.nodes()) {
        TowerBox global = box;
        global.top_left = box.top_left + o;
        local.emplace(id, static_cast<int>(nodes.size()));
        nodes.push_back({global, t.tile_id, id, false, false});
      }
      for (const auto& [a, b] : t.graph.edges())
        edges.emplace_back(local.at(a), local.at(b));
    }
  }

  // Union-find for EN fusion.
  std::vector<int> parent(nodes.size());
  for (std::size_t k = 0; k < parent.size(); ++k) parent[k] = static_cast<int>(k);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  auto near_internal_border = [&](PixelPoint p) {
    for (int i = 1; i < n_tr; ++i)
      if (std::abs(p.row - row_origin[i]) <= 1.0) return true;
    for (int j = 1; j < n_tc; ++j)
      if (std::abs(p.col - col_origin[j]) <= 1.0) return true;
    return false;
  };

  struct Candidate {
    double dist;
    int a, b;
    bool operator<(const Candidate& o) const {
      return std::tie(dist, a, b) < std::tie(o.dist, o.a, o.b);
    }
  };
  std::vector<int> en_nodes;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    if (nodes[k].box.kind == NodeKind::EN &&
        near_internal_border(centroid(nodes[k].box)))
      en_nodes.push_back(static_cast<int>(k));

  std::vector<Candidate> candidates;
  for (std::size_t x = 0; x < en_nodes.size(); ++x) {
    for (std::size_t y = x + 1; y < en_nodes.size(); ++y) {
      const int a = en_nodes[x], b = en_nodes[y];
      if (nodes[a].tile_id == nodes[b].tile_id) continue;
      const double d =
          centroid_distance_px(nodes[a].box, nodes[b].box);
      if (d <= 1.0) candidates.push_back({d, a, b});
    }
  }
  std::sort(candidates.begin(), candidates.end());
  for (const auto& cand : candidates) {
    if (nodes[cand.a].fused || nodes[cand.b].fused) continue;
    nodes[cand.a].fused = nodes[cand.b].fused = true;
    parent[find(cand.b)] = find(cand.a);
  }

  MergeResult result;

  // Adjacency over class representatives.
  std::map<int, std::set<int>> adj;
  for (const auto& [a, b] : edges) {
    const int ra = find(a), rb = find(b);
    if (ra == rb) {
      result.warnings.push_back("edge collapsed onto fused EN node " +
                                nodes[a].tile_id + ":" +
                                std::to_string(nodes[a].orig_id));
      continue;
    }
    adj[ra].insert(rb);
    adj[rb].insert(ra);
  }

  // Contract fused EN pairs out of the graph, reconnecting their neighbors.
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int r = static_cast<int>(k);
    if (find(r) != r || !nodes[k].fused) continue;
    auto it = adj.find(r);
    const std::size_t deg = it == adj.end() ? 0 : it->second.size();
    if (deg != 2) {
      result.warnings.push_back(
          "fused EN node " + nodes[k].tile_id + ":" +
          std::to_string(nodes[k].orig_id) + " has degree " +
          std::to_string(deg) + "; not contracted");
      continue;
    }
    const int n1 = *it->second.begin();
    const int n2 = *std::next(it->second.begin());
    adj.erase(it);
    adj[n1].erase(r);
    adj[n2].erase(r);
    adj[n1].insert(n2);
    adj[n2].insert(n1);
    nodes[k].contracted = true;
  }

  // Orphans: unfused ENs sitting on an internal border.
  for (const int k : en_nodes) {
    if (!nodes[k].fused)
      result.warnings.push_back("orphan EN node " + nodes[k].tile_id + ":" +
                                std::to_string(nodes[k].orig_id) +
                                " has no counterpart in the adjacent tile");
  }

  SceneAnnotation merged;
  merged.tile_id = parsed[0].parent;
  merged.region = tiles[0].region;
  merged.scale = tiles[0].scale;
  merged.rows = static_cast<int>(row_origin[n_tr]);
  merged.cols = static_cast<int>(col_origin[n_tc]);

  std::map<int, NodeId> out_id;
  NodeId next = 0;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const int r = static_cast<int>(k);
    if (find(r) != r || nodes[k].contracted) continue;
    out_id.emplace(r, next);
    merged.graph.add_node(next, nodes[k].box);
    ++next;
  }
  for (const auto& [r, neighbors] : adj) {
    for (const int n : neighbors) {
      if (r < n) merged.graph.add_edge(out_id.at(r), out_id.at(n));
    }
  }
  result.scene = std::move(merged);
  return result;
}

}  // namespace pgmap
