#include "kecss/rooted_tree.hpp"

#include <algorithm>
#include <deque>

#include "kecss/errors.hpp"

namespace kecss {

int RootedTree::height() const {
  int h = 0;
  for (int d : depth) h = std::max(h, d);
  return h;
}

VertexId RootedTree::lca(VertexId a, VertexId b) const {
  while (depth[a] > depth[b]) a = parent[a];
  while (depth[b] > depth[a]) b = parent[b];
  while (a != b) {
    a = parent[a];
    b = parent[b];
  }
  return a;
}

std::vector<EdgeId> RootedTree::path_up(VertexId v, VertexId a) const {
  std::vector<EdgeId> out;
  while (v != a) {
    if (v == root) throw PreconditionError("path_up: target is not an ancestor");
    out.push_back(parent_edge[v]);
    v = parent[v];
  }
  return out;
}

std::vector<EdgeId> RootedTree::path(VertexId a, VertexId b) const {
  const VertexId top = lca(a, b);
  auto out = path_up(a, top);
  auto rest = path_up(b, top);
  out.insert(out.end(), rest.rbegin(), rest.rend());
  return out;
}

RootedTree make_rooted_tree(const Graph& g, std::span<const EdgeId> tree_edges, VertexId root) {
  const int n = g.num_vertices();
  if (root < 0 || root >= n) throw PreconditionError("tree root out of range");
  if (static_cast<int>(tree_edges.size()) != n - 1) {
    throw PreconditionError("spanning tree needs n-1 edges, got " + std::to_string(tree_edges.size()));
  }
  RootedTree t;
  t.root = root;
  t.parent.assign(n, -1);
  t.depth.assign(n, -1);
  t.parent_edge.assign(n, -1);
  t.children.assign(n, {});
  t.child_of_edge.assign(g.num_edges(), -1);
  t.tree_edges = normalized(EdgeSet(tree_edges.begin(), tree_edges.end()));
  if (static_cast<int>(t.tree_edges.size()) != n - 1) throw PreconditionError("duplicate tree edge");
  EdgeMask in_tree = make_mask(g.num_edges(), t.tree_edges);

  std::deque<VertexId> queue{root};
  t.parent[root] = root;
  t.depth[root] = 0;
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    t.order.push_back(x);
    for (EdgeId e : g.incident(x)) {
      if (!in_tree[e]) continue;
      VertexId y = g.edge(e).other(x);
      if (y == t.parent[x] && e == t.parent_edge[x]) continue;
      if (t.depth[y] != -1) throw PreconditionError("tree edges contain a cycle");
      t.parent[y] = x;
      t.depth[y] = t.depth[x] + 1;
      t.parent_edge[y] = e;
      t.child_of_edge[e] = y;
      t.children[x].push_back(y);
      queue.push_back(y);
    }
  }
  if (static_cast<int>(t.order.size()) != n) throw PreconditionError("tree edges do not span the graph");
  for (auto& c : t.children) std::sort(c.begin(), c.end());

  t.tin.assign(n, 0);
  t.tout.assign(n, 0);
  int clock = 0;
  std::vector<std::pair<VertexId, std::size_t>> stack{{root, 0}};
  t.tin[root] = clock++;
  while (!stack.empty()) {
    auto& [x, i] = stack.back();
    if (i < t.children[x].size()) {
      VertexId c = t.children[x][i++];
      t.tin[c] = clock++;
      stack.push_back({c, 0});
    } else {
      t.tout[x] = clock++;
      stack.pop_back();
    }
  }
  return t;
}

}  // namespace kecss
