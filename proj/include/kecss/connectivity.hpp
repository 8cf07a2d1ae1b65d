#pragma once

#include <optional>
#include <span>
#include <vector>

#include "kecss/graph.hpp"

namespace kecss {

struct Cut {
  EdgeSet edges;                   // sorted
  std::vector<VertexId> side;      // sorted shore containing vertex 0

  friend bool operator==(const Cut&, const Cut&) = default;
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

// Component id per vertex of the spanning subgraph on `present` edges.
std::vector<int> components(const Graph& g, const EdgeMask& present, int* count = nullptr);

bool is_connected(const Graph& g, std::span<const EdgeId> removed = {});
bool is_connected_mask(const Graph& g, const EdgeMask& present);

// BFS hop distances over present edges; -1 for unreachable.
std::vector<int> bfs_distances(const Graph& g, VertexId source, const EdgeMask* present = nullptr);
int eccentricity(const Graph& g, VertexId source);
// Hop diameter of a connected graph.
int diameter(const Graph& g);

// Max-flow min-cut from vertex 0 to every other vertex. 0 for disconnected
// graphs. Requires n >= 2.
int edge_connectivity(const Graph& g);
int edge_connectivity(const Graph& g, const EdgeMask& present);
// Smallest removal set that disconnects, by increasing subset size; m <= 20.
int edge_connectivity_exhaustive(const Graph& g);

// Flow search capped at k augmenting paths per sink.
bool is_k_edge_connected(const Graph& g, const EdgeMask& present, int k);
bool is_k_edge_connected(const Graph& g, std::span<const EdgeId> edges, int k);

// A cut of the subgraph with fewer than k edges, if one exists.
std::optional<Cut> find_small_cut(const Graph& g, const EdgeMask& present, int k);

// All induced cuts delta(S) of g with exactly `size` edges, enumerated over
// vertex bipartitions. Throws CapacityError for m > 24.
std::vector<Cut> enumerate_cuts(const Graph& g, int size);

// Minimal disconnecting edge sets of size `size` of the subgraph on
// `present`, assumed (size)-edge-connected minus one: every returned set is
// an induced cut delta(S). Enumerates edge subsets; used where the vertex
// count rules out bipartition enumeration.
std::vector<Cut> enumerate_min_cuts(const Graph& g, const EdgeMask& present, int size);

// Shore computed from the subgraph on h_edges minus the cut edges.
Cut make_cut(const Graph& g, const EdgeMask& present, std::span<const EdgeId> cut_edges);

// Definitional cover test: (H \ C) + e is connected. Throws if e is in C.
bool covers(const Graph& g, std::span<const EdgeId> h_edges, const Cut& c, EdgeId e);

// Shore-crossing test; equivalent to covers for induced cuts of a connected H.
bool crosses(const Graph& g, const std::vector<bool>& in_side, EdgeId e);
std::vector<bool> side_flags(int n, const Cut& c);

}  // namespace kecss
