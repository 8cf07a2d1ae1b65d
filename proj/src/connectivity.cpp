#include "kecss/connectivity.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <map>
#include <numeric>

#include "kecss/errors.hpp"

namespace kecss {

std::vector<int> components(const Graph& g, const EdgeMask& present, int* count) {
  const int n = g.num_vertices();
  std::vector<int> comp(n, -1);
  std::vector<VertexId> stack;
  int next = 0;
  for (VertexId s = 0; s < n; ++s) {
    if (comp[s] != -1) continue;
    comp[s] = next;
    stack.push_back(s);
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e : g.incident(x)) {
        if (!present[e]) continue;
        VertexId y = g.edge(e).other(x);
        if (comp[y] == -1) {
          comp[y] = next;
          stack.push_back(y);
        }
      }
    }
    ++next;
  }
  if (count) *count = next;
  return comp;
}

bool is_connected_mask(const Graph& g, const EdgeMask& present) {
  if (g.num_vertices() <= 1) return true;
  int count = 0;
  components(g, present, &count);
  return count == 1;
}

bool is_connected(const Graph& g, std::span<const EdgeId> removed) {
  EdgeMask present = full_mask(g);
  for (EdgeId e : removed) {
    if (e < 0 || e >= g.num_edges()) throw PreconditionError("removed edge out of range");
    present[e] = false;
  }
  return is_connected_mask(g, present);
}

std::vector<int> bfs_distances(const Graph& g, VertexId source, const EdgeMask* present) {
  std::vector<int> dist(g.num_vertices(), -1);
  std::deque<VertexId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    VertexId x = queue.front();
    queue.pop_front();
    for (EdgeId e : g.incident(x)) {
      if (present && !(*present)[e]) continue;
      VertexId y = g.edge(e).other(x);
      if (dist[y] == -1) {
        dist[y] = dist[x] + 1;
        queue.push_back(y);
      }
    }
  }
  return dist;
}

int eccentricity(const Graph& g, VertexId source) {
  auto dist = bfs_distances(g, source);
  int ecc = 0;
  for (int d : dist) {
    if (d < 0) throw PreconditionError("graph is disconnected");
    ecc = std::max(ecc, d);
  }
  return ecc;
}

int diameter(const Graph& g) {
  int best = 0;
  for (VertexId s = 0; s < g.num_vertices(); ++s) best = std::max(best, eccentricity(g, s));
  return best;
}

namespace {

// Unit-capacity undirected max-flow; flow[e] is the net flow from edge.u to
// edge.v in {-1, 0, 1}.
class UnitFlow {
 public:
  UnitFlow(const Graph& g, const EdgeMask& present) : g_(g), present_(present) {}

  // Number of augmenting paths found, stopping at `limit`.
  int run(VertexId s, VertexId t, int limit) {
    flow_.assign(g_.num_edges(), 0);
    int total = 0;
    while (total < limit && augment(s, t)) ++total;
    return total;
  }

  // Vertices reachable from s in the residual graph of the last run.
  std::vector<bool> reachable(VertexId s) const {
    std::vector<bool> seen(g_.num_vertices(), false);
    std::vector<VertexId> stack{s};
    seen[s] = true;
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      for (EdgeId e : g_.incident(x)) {
        if (!present_[e]) continue;
        VertexId y = g_.edge(e).other(x);
        if (!seen[y] && residual(e, x) > 0) {
          seen[y] = true;
          stack.push_back(y);
        }
      }
    }
    return seen;
  }

 private:
  int residual(EdgeId e, VertexId from) const {
    const int f = flow_[e];
    return from == g_.edge(e).u ? 1 - f : 1 + f;
  }

  bool augment(VertexId s, VertexId t) {
    const int n = g_.num_vertices();
    std::vector<EdgeId> via(n, -1);
    std::vector<bool> seen(n, false);
    std::deque<VertexId> queue{s};
    seen[s] = true;
    while (!queue.empty() && !seen[t]) {
      VertexId x = queue.front();
      queue.pop_front();
      for (EdgeId e : g_.incident(x)) {
        if (!present_[e]) continue;
        VertexId y = g_.edge(e).other(x);
        if (seen[y] || residual(e, x) <= 0) continue;
        seen[y] = true;
        via[y] = e;
        queue.push_back(y);
      }
    }
    if (!seen[t]) return false;
    for (VertexId y = t; y != s;) {
      EdgeId e = via[y];
      VertexId x = g_.edge(e).other(y);
      flow_[e] += (x == g_.edge(e).u) ? 1 : -1;
      y = x;
    }
    return true;
  }

  const Graph& g_;
  const EdgeMask& present_;
  std::vector<int> flow_;
};

}  // namespace

int edge_connectivity(const Graph& g, const EdgeMask& present) {
  const int n = g.num_vertices();
  if (n < 2) throw PreconditionError("edge connectivity needs n >= 2");
  UnitFlow flow(g, present);
  int best = g.num_edges();
  for (VertexId t = 1; t < n; ++t) best = std::min(best, flow.run(0, t, best));
  return best;
}

int edge_connectivity(const Graph& g) { return edge_connectivity(g, full_mask(g)); }

int edge_connectivity_exhaustive(const Graph& g) {
  const int m = g.num_edges();
  if (g.num_vertices() < 2) throw PreconditionError("edge connectivity needs n >= 2");
  if (m > 20) throw CapacityError("exhaustive edge connectivity limited to m <= 20");
  // Smallest popcount among disconnecting removal masks.
  int best = m;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    const int size = std::popcount(mask);
    if (size >= best) continue;
    EdgeMask present(m, true);
    for (int e = 0; e < m; ++e) {
      if (mask >> e & 1u) present[e] = false;
    }
    if (!is_connected_mask(g, present)) best = size;
  }
  return best;
}

bool is_k_edge_connected(const Graph& g, const EdgeMask& present, int k) {
  if (k <= 0) return true;
  const int n = g.num_vertices();
  if (n < 2) return true;
  UnitFlow flow(g, present);
  for (VertexId t = 1; t < n; ++t) {
    if (flow.run(0, t, k) < k) return false;
  }
  return true;
}

bool is_k_edge_connected(const Graph& g, std::span<const EdgeId> edges, int k) {
  return is_k_edge_connected(g, make_mask(g.num_edges(), edges), k);
}

std::optional<Cut> find_small_cut(const Graph& g, const EdgeMask& present, int k) {
  const int n = g.num_vertices();
  if (n < 2 || k <= 0) return std::nullopt;
  UnitFlow flow(g, present);
  for (VertexId t = 1; t < n; ++t) {
    if (flow.run(0, t, k) >= k) continue;
    auto side = flow.reachable(0);
    Cut cut;
    for (VertexId x = 0; x < n; ++x) {
      if (side[x]) cut.side.push_back(x);
    }
    for (const Edge& e : g.edges()) {
      if (present[e.id] && side[e.u] != side[e.v]) cut.edges.push_back(e.id);
    }
    return cut;
  }
  return std::nullopt;
}

std::vector<Cut> enumerate_cuts(const Graph& g, int size) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (m > 24) throw CapacityError("enumerate_cuts limited to m <= 24, got " + std::to_string(m));
  if (!is_connected(g)) throw PreconditionError("enumerate_cuts needs a connected graph");
  if (n < 2) return {};
  std::map<std::uint32_t, std::uint32_t> found;  // edge mask -> first shore mask
  const std::uint32_t full = (n >= 32) ? ~0u : ((1u << n) - 1);
  for (std::uint32_t rest = 0; rest < (1u << (n - 1)); ++rest) {
    const std::uint32_t shore = (rest << 1) | 1u;
    if (shore == full) continue;
    std::uint32_t crossing = 0;
    int count = 0;
    for (const Edge& e : g.edges()) {
      if (((shore >> e.u) ^ (shore >> e.v)) & 1u) {
        crossing |= 1u << e.id;
        if (++count > size) break;
      }
    }
    if (count != size) continue;
    found.emplace(crossing, shore);
  }
  std::vector<Cut> cuts;
  for (auto [edges, shore] : found) {
    Cut c;
    for (int e = 0; e < m; ++e) {
      if (edges >> e & 1u) c.edges.push_back(e);
    }
    for (VertexId x = 0; x < n; ++x) {
      if (shore >> x & 1u) c.side.push_back(x);
    }
    cuts.push_back(std::move(c));
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

Cut make_cut(const Graph& g, const EdgeMask& present, std::span<const EdgeId> cut_edges) {
  EdgeMask rest = present;
  for (EdgeId e : cut_edges) rest[e] = false;
  auto comp = components(g, rest);
  Cut c;
  c.edges = normalized(EdgeSet(cut_edges.begin(), cut_edges.end()));
  for (VertexId x = 0; x < g.num_vertices(); ++x) {
    if (comp[x] == comp[0]) c.side.push_back(x);
  }
  return c;
}

std::vector<Cut> enumerate_min_cuts(const Graph& g, const EdgeMask& present, int size) {
  const EdgeSet pool = mask_to_set(present);
  std::vector<Cut> cuts;
  if (size <= 0 || size > static_cast<int>(pool.size())) return cuts;
  std::vector<int> pick(size);
  std::iota(pick.begin(), pick.end(), 0);
  const int total = static_cast<int>(pool.size());
  EdgeMask rest = present;
  while (true) {
    EdgeSet chosen;
    for (int i : pick) {
      chosen.push_back(pool[i]);
      rest[pool[i]] = false;
    }
    int count = 0;
    auto comp = components(g, rest, &count);
    for (EdgeId e : chosen) rest[e] = true;
    if (count == 2) {
      bool induced = true;
      for (EdgeId e : chosen) {
        if (comp[g.edge(e).u] == comp[g.edge(e).v]) induced = false;
      }
      if (induced) {
        Cut c;
        c.edges = chosen;
        for (VertexId x = 0; x < g.num_vertices(); ++x) {
          if (comp[x] == comp[0]) c.side.push_back(x);
        }
        cuts.push_back(std::move(c));
      }
    }
    int i = size - 1;
    while (i >= 0 && pick[i] == total - size + i) --i;
    if (i < 0) break;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

bool covers(const Graph& g, std::span<const EdgeId> h_edges, const Cut& c, EdgeId e) {
  if (std::binary_search(c.edges.begin(), c.edges.end(), e)) {
    throw PreconditionError("covers: edge " + std::to_string(e) + " belongs to the cut");
  }
  EdgeMask present = make_mask(g.num_edges(), h_edges);
  for (EdgeId x : c.edges) present[x] = false;
  present[e] = true;
  return is_connected_mask(g, present);
}

std::vector<bool> side_flags(int n, const Cut& c) {
  std::vector<bool> flags(n, false);
  for (VertexId x : c.side) flags[x] = true;
  return flags;
}

bool crosses(const Graph& g, const std::vector<bool>& in_side, EdgeId e) {
  return in_side[g.edge(e).u] != in_side[g.edge(e).v];
}

}  // namespace kecss
