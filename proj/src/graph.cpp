#include "pgmap/graph.hpp"

#include <algorithm>

namespace pgmap {

void GridGraph::add_node(NodeId id, const TowerBox& box) {
  if (index_.count(id))
    throw ValidationError("duplicate node id " + std::to_string(id));
  index_.emplace(id, nodes_.size());
  nodes_.emplace_back(id, box);
}

void GridGraph::add_edge(NodeId a, NodeId b) {
  if (a == b)
    throw ValidationError("self-loop on node " + std::to_string(a));
  if (!has_node(a) || !has_node(b))
    throw ValidationError("edge references unknown node id " +
                          std::to_string(has_node(a) ? b : a));
  edges_.emplace(std::min(a, b), std::max(a, b));
}

bool GridGraph::has_edge(NodeId a, NodeId b) const {
  return edges_.count({std::min(a, b), std::max(a, b)}) != 0;
}

const TowerBox& GridGraph::box(NodeId id) const {
  auto it = index_.find(id);
  if (it == index_.end())
    throw ValidationError("unknown node id " + std::to_string(id));
  return nodes_[it->second].second;
}

std::size_t GridGraph::degree(NodeId id) const {
  std::size_t n = 0;
  for (const auto& [a, b] : edges_)
    if (a == id || b == id) ++n;
  return n;
}

}  // namespace pgmap
