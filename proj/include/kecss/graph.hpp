#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace kecss {

using VertexId = int;
using EdgeId = int;
using Weight = std::uint64_t;

// Sorted, duplicate-free list of edge ids.
using EdgeSet = std::vector<EdgeId>;
// Per-edge membership flags, indexed by edge id.
using EdgeMask = std::vector<bool>;

inline constexpr int kDefaultWeightExponent = 3;

struct Edge {
  EdgeId id = -1;
  VertexId u = -1;  // u < v
  VertexId v = -1;
  Weight weight = 1;

  VertexId other(VertexId x) const { return x == u ? v : u; }
};

// Simple undirected weighted graph on vertices 0..n-1 with stable edge ids
// assigned in insertion order.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n);

  // Throws PreconditionError on out-of-range endpoints, self-loops and
  // parallel edges.
  EdgeId add_edge(VertexId a, VertexId b, Weight w = 1);

  int num_vertices() const { return static_cast<int>(adjacency_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  const Edge& edge(EdgeId e) const { return edges_[e]; }
  std::span<const Edge> edges() const { return edges_; }
  std::span<const EdgeId> incident(VertexId x) const { return adjacency_[x]; }
  int degree(VertexId x) const { return static_cast<int>(adjacency_[x].size()); }

  std::optional<EdgeId> find_edge(VertexId a, VertexId b) const;

  Weight max_weight() const;
  Weight min_weight() const;
  Weight weight_of(std::span<const EdgeId> edges) const;

  // Same vertices and edge ids, new weights.
  Graph with_weights(std::span<const Weight> weights) const;
  Graph with_unit_weights() const;

  // Lexicographic (u, v) order used wherever ties are broken by edge identity.
  bool key_less(EdgeId a, EdgeId b) const {
    const Edge& x = edges_[a];
    const Edge& y = edges_[b];
    return x.u != y.u ? x.u < y.u : x.v < y.v;
  }

 private:
  static std::uint64_t pair_key(VertexId a, VertexId b) {
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }

  std::vector<Edge> edges_;
  std::vector<std::vector<EdgeId>> adjacency_;
  std::unordered_map<std::uint64_t, EdgeId> index_;
};

// Text format: first line "n m", then m lines "u v w". Blank lines and lines
// starting with '#' are skipped. Weights above n^weight_exponent are rejected.
Graph parse_graph(std::istream& in, int weight_exponent = kDefaultWeightExponent);
Graph parse_graph_string(const std::string& text,
                         int weight_exponent = kDefaultWeightExponent);
Graph load_graph(const std::string& path, int weight_exponent = kDefaultWeightExponent);
void write_graph(std::ostream& out, const Graph& g);
std::string graph_to_string(const Graph& g);

// n^exponent, saturating at UINT64_MAX.
Weight weight_cap(int n, int exponent = kDefaultWeightExponent);

EdgeMask make_mask(int m, std::span<const EdgeId> edges);
EdgeMask full_mask(const Graph& g);
EdgeSet mask_to_set(const EdgeMask& mask);
EdgeSet normalized(EdgeSet edges);
EdgeSet set_union(std::span<const EdgeId> a, std::span<const EdgeId> b);
EdgeSet set_difference(std::span<const EdgeId> a, std::span<const EdgeId> b);

// Stable 64-bit fingerprint of vertex count, endpoints and weights.
std::uint64_t graph_hash(const Graph& g);

// Union-find with path halving.
class DisjointSets {
 public:
  explicit DisjointSets(int n) : parent_(n) {
    for (int i = 0; i < n; ++i) parent_[i] = i;
  }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // False when already joined.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<int> parent_;
};

}  // namespace kecss
