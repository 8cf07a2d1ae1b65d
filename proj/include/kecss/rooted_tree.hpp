#pragma once

#include <span>
#include <vector>

#include "kecss/graph.hpp"

namespace kecss {

struct RootedTree {
  VertexId root = 0;
  std::vector<VertexId> parent;       // root maps to itself
  std::vector<int> depth;
  std::vector<EdgeId> parent_edge;    // -1 at the root
  std::vector<std::vector<VertexId>> children;
  EdgeSet tree_edges;
  std::vector<VertexId> order;        // non-decreasing depth
  std::vector<VertexId> child_of_edge;  // per graph edge; -1 for non-tree edges

  int num_vertices() const { return static_cast<int>(parent.size()); }
  int height() const;
  bool is_tree_edge(EdgeId e) const { return e >= 0 && e < static_cast<EdgeId>(child_of_edge.size()) && child_of_edge[e] != -1; }
  // True if a is an ancestor of d or equal to it.
  bool is_ancestor(VertexId a, VertexId d) const { return tin[a] <= tin[d] && tout[d] <= tout[a]; }
  VertexId lca(VertexId a, VertexId b) const;
  // Tree edges of P_{a,lca} followed by the reversed P_{b,lca}.
  std::vector<EdgeId> path(VertexId a, VertexId b) const;
  // Tree edges from v up to its ancestor a, bottom-up.
  std::vector<EdgeId> path_up(VertexId v, VertexId a) const;

  std::vector<int> tin, tout;
};

// Validates that tree_edges form a spanning tree of g and roots it.
RootedTree make_rooted_tree(const Graph& g, std::span<const EdgeId> tree_edges, VertexId root);

}  // namespace kecss
