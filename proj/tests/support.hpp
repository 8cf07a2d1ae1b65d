#pragma once

#include <cstdint>
#include <vector>

#include "kecss/graph.hpp"
#include "kecss/random.hpp"

namespace testing {

using kecss::EdgeId;
using kecss::EdgeSet;
using kecss::Graph;
using kecss::VertexId;
using kecss::Weight;

Graph path_graph(int n);
Graph cycle_graph(int n);
Graph star_graph(int leaves);
Graph complete_graph(int n);
// Two hubs joined by three internally disjoint paths with the given numbers
// of internal vertices.
Graph theta_graph(int a, int b, int c);

// Random connected graph: random spanning tree plus `extra` random edges.
Graph random_connected(int n, int extra, kecss::SplitMix& rng, Weight max_weight = 1);
// Hamiltonian cycle on a random permutation plus `extra` chords.
Graph random_two_ec(int n, int extra, kecss::SplitMix& rng, Weight max_weight = 1);
// Rejection-sampled graph with edge connectivity >= k (brute-force checked).
Graph random_k_ec(int n, int k, kecss::SplitMix& rng, Weight max_weight = 1);

// Independent oracles.
bool connected_without(const Graph& g, const std::vector<bool>& present);
std::vector<std::vector<int>> all_pairs_hops(const Graph& g);
// Minimum spanning tree weight over all spanning trees (n <= 8), with the
// (weight, id)-lexicographic optimum as witness.
EdgeSet brute_force_mst(const Graph& g);
// Cut pairs by pair removal on the subgraph.
std::vector<std::pair<EdgeId, EdgeId>> brute_cut_pairs(const Graph& g, const std::vector<bool>& present);
// Min edge connectivity by checking every removal set of size < k.
bool brute_k_connected(const Graph& g, const std::vector<bool>& present, int k);

}  // namespace testing
