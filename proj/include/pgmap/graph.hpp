#pragma once

#include <set>
#include <unordered_map>
#include <utility>
#include <vector>

#include "pgmap/geometry.hpp"

namespace pgmap {

using NodeId = int;

/// Geospatial graph: an ordered list of (id, box) nodes plus a symmetric
/// edge set stored as unordered id pairs. No self-loops; edge endpoints must
/// reference existing nodes.
class GridGraph {
 public:
  using Node = std::pair<NodeId, TowerBox>;
  using EdgeSet = std::set<std::pair<NodeId, NodeId>>;

  void add_node(NodeId id, const TowerBox& box);
  void add_edge(NodeId a, NodeId b);

  bool has_node(NodeId id) const { return index_.count(id) != 0; }
  bool has_edge(NodeId a, NodeId b) const;

  const TowerBox& box(NodeId id) const;
  const std::vector<Node>& nodes() const { return nodes_; }
  const EdgeSet& edges() const { return edges_; }

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  std::size_t degree(NodeId id) const;

  friend bool operator==(const GridGraph& a, const GridGraph& b) {
    return a.nodes_ == b.nodes_ && a.edges_ == b.edges_;
  }

 private:
  std::vector<Node> nodes_;
  std::unordered_map<NodeId, std::size_t> index_;
  EdgeSet edges_;
};

}  // namespace pgmap
