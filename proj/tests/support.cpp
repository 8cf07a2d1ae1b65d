#include "support.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace testing {

Graph path_graph(int n) {
  Graph g(n);
  for (int i = 0; i + 1 < n; ++i) g.add_edge(i, i + 1);
  return g;
}

Graph cycle_graph(int n) {
  Graph g = path_graph(n);
  g.add_edge(0, n - 1);
  return g;
}

Graph star_graph(int leaves) {
  Graph g(leaves + 1);
  for (int i = 1; i <= leaves; ++i) g.add_edge(0, i);
  return g;
}

Graph complete_graph(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) g.add_edge(i, j);
  return g;
}

Graph theta_graph(int a, int b, int c) {
  Graph g(2 + a + b + c);
  int next = 2;
  for (int len : {a, b, c}) {
    VertexId prev = 0;
    for (int i = 0; i < len; ++i) {
      g.add_edge(prev, next);
      prev = next++;
    }
    g.add_edge(prev, 1);
  }
  return g;
}

namespace {

Weight draw_weight(kecss::SplitMix& rng, Weight max_weight) {
  return max_weight <= 1 ? 1 : 1 + rng.below(max_weight);
}

void add_random_edges(Graph& g, int extra, kecss::SplitMix& rng, Weight max_weight) {
  const int n = g.num_vertices();
  const int limit = n * (n - 1) / 2;
  for (int added = 0; added < extra && g.num_edges() < limit;) {
    VertexId a = static_cast<VertexId>(rng.below(n));
    VertexId b = static_cast<VertexId>(rng.below(n));
    if (a == b || g.find_edge(a, b)) continue;
    g.add_edge(a, b, draw_weight(rng, max_weight));
    ++added;
  }
}

}  // namespace

Graph random_connected(int n, int extra, kecss::SplitMix& rng, Weight max_weight) {
  Graph g(n);
  for (VertexId v = 1; v < n; ++v) {
    g.add_edge(static_cast<VertexId>(rng.below(v)), v, draw_weight(rng, max_weight));
  }
  add_random_edges(g, extra, rng, max_weight);
  return g;
}

Graph random_two_ec(int n, int extra, kecss::SplitMix& rng, Weight max_weight) {
  std::vector<VertexId> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  for (int i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
  Graph g(n);
  for (int i = 0; i < n; ++i) g.add_edge(perm[i], perm[(i + 1) % n], draw_weight(rng, max_weight));
  add_random_edges(g, extra, rng, max_weight);
  return g;
}

Graph random_k_ec(int n, int k, kecss::SplitMix& rng, Weight max_weight) {
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Graph g = random_two_ec(n, static_cast<int>(rng.below(n * (k - 1) + 2)) + n * (k - 2) / 2 + 1, rng,
                            max_weight);
    if (brute_k_connected(g, std::vector<bool>(g.num_edges(), true), k)) return g;
  }
  throw std::runtime_error("random_k_ec: no sample");
}

bool connected_without(const Graph& g, const std::vector<bool>& present) {
  const int n = g.num_vertices();
  if (n <= 1) return true;
  std::vector<int> label(n);
  std::iota(label.begin(), label.end(), 0);
  // Label propagation until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& e : g.edges()) {
      if (!present[e.id]) continue;
      int lo = std::min(label[e.u], label[e.v]);
      if (label[e.u] != lo || label[e.v] != lo) {
        label[e.u] = label[e.v] = lo;
        changed = true;
      }
    }
  }
  return std::all_of(label.begin(), label.end(), [](int x) { return x == 0; });
}

std::vector<std::vector<int>> all_pairs_hops(const Graph& g) {
  const int n = g.num_vertices();
  const int inf = 1 << 28;
  std::vector<std::vector<int>> d(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& e : g.edges()) d[e.u][e.v] = d[e.v][e.u] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
  return d;
}

EdgeSet brute_force_mst(const Graph& g) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (n > 8 || m > 20) throw std::runtime_error("brute_force_mst: instance too large");
  EdgeSet best;
  Weight best_w = 0;
  long best_ids = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (std::popcount(mask) != n - 1) continue;
    std::vector<bool> present(m, false);
    Weight w = 0;
    long ids = 0;
    for (int e = 0; e < m; ++e) {
      if (mask >> e & 1u) {
        present[e] = true;
        w += g.edge(e).weight;
        ids += e;
      }
    }
    if (!connected_without(g, present)) continue;
    if (best.empty() || w < best_w || (w == best_w && ids < best_ids)) {
      best.clear();
      for (int e = 0; e < m; ++e)
        if (mask >> e & 1u) best.push_back(e);
      best_w = w;
      best_ids = ids;
    }
  }
  return best;
}

std::vector<std::pair<EdgeId, EdgeId>> brute_cut_pairs(const Graph& g, const std::vector<bool>& present) {
  std::vector<std::pair<EdgeId, EdgeId>> out;
  std::vector<bool> p = present;
  for (EdgeId a = 0; a < g.num_edges(); ++a) {
    if (!present[a]) continue;
    for (EdgeId b = a + 1; b < g.num_edges(); ++b) {
      if (!present[b]) continue;
      p[a] = p[b] = false;
      if (!connected_without(g, p)) out.emplace_back(a, b);
      p[a] = p[b] = true;
    }
  }
  return out;
}

bool brute_k_connected(const Graph& g, const std::vector<bool>& present, int k) {
  std::vector<EdgeId> pool;
  for (EdgeId e = 0; e < g.num_edges(); ++e)
    if (present[e]) pool.push_back(e);
  if (!connected_without(g, present)) return false;
  // Every removal set of size 1..k-1 must leave the graph connected.
  std::vector<bool> p = present;
  std::vector<int> pick;
  auto rec = [&](auto&& self, int start, int left) -> bool {
    if (left == 0) return connected_without(g, p);
    for (int i = start; i < static_cast<int>(pool.size()); ++i) {
      p[pool[i]] = false;
      bool ok = self(self, i + 1, left - 1);
      p[pool[i]] = true;
      if (!ok) return false;
    }
    return true;
  };
  for (int size = 1; size < k; ++size) {
    if (size > static_cast<int>(pool.size())) break;
    if (!rec(rec, 0, size)) return false;
  }
  return true;
}

}  // namespace testing
