#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "kecss/congest.hpp"
#include "kecss/cost.hpp"
#include "kecss/graph.hpp"
#include "kecss/rooted_tree.hpp"
#include "kecss/trees.hpp"

namespace kecss {

// Tree edges on the tree path between the endpoints of a non-tree edge.
std::vector<EdgeId> tree_path(const RootedTree& t, const Graph& g, EdgeId e);

enum class TapMode {
  Direct,         // path counts and votes straight from tree paths
  Decomposition,  // counts and votes assembled from segment knowledge
};

struct TapOptions {
  std::uint64_t seed = 0;
  TapMode mode = TapMode::Decomposition;
  // Decomposition results are compared with direct mode when n <= this.
  int cross_check_limit = 64;
  int iteration_cap = 0;  // 0: 64 * ceil(log2 n)^2
  congest::RoundLedger* ledger = nullptr;
  int diameter = -1;  // -1: computed from the graph
  int fragment_height = 0;  // 0: default piece height for the segment decomposition
};

struct TapIteration {
  int max_exponent = 0;
  int candidates = 0;
  int admitted = 0;
  int newly_covered = 0;
  bool legal = true;  // all draws distinct
  std::uint64_t phi_before = 0;
  std::uint64_t phi_after = 0;  // same rounded value, after the iteration
};

struct TapResult {
  EdgeSet added;
  Weight weight = 0;
  std::vector<Rational> cost;  // per graph edge; meaningful on tree edges
  Rational total_cost = 0;
  int iterations = 0;
  std::vector<TapIteration> history;
  std::vector<int> distinct_exponents;
  bool ledger_holds = false;  // w(A) <= 8 * total_cost
};

class TapState {
 public:
  // Draws r_e for a candidate; the default hashes (seed, iteration, edge).
  using DrawFn = std::function<unsigned __int128(EdgeId)>;

  TapState(const Graph& g, RootedTree tree, TapOptions options = {});
  ~TapState();
  TapState(TapState&&) noexcept;

  // Adds every weight-0 link and marks the tree edges they cover.
  void admit_zero_weight();
  bool done() const;
  CostEffectiveness cost_effectiveness(EdgeId link) const;
  // One iteration of candidate selection, voting and admission.
  TapIteration iterate();
  void set_draws(DrawFn draws);

  const RootedTree& tree() const;
  const SegmentDecomposition& segments() const;
  const EdgeSet& links() const;
  bool in_augmentation(EdgeId e) const;
  bool covered(EdgeId tree_edge) const;
  // Votes received by each candidate in the last iteration (edge id -> votes).
  const std::vector<std::pair<EdgeId, int>>& last_votes() const;
  TapResult result() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Runs the full loop: weight-0 pre-admission, then iterations until every
// tree edge is covered. Throws InvariantViolation past the iteration cap.
TapResult tap_augment(const Graph& g, const RootedTree& tree, const TapOptions& options = {});

struct TwoEcssResult {
  EdgeSet edges;
  Weight weight = 0;
  MstResult mst;
  TapResult tap;
};

// MST followed by weighted tree augmentation.
TwoEcssResult two_ecss(const Graph& g, const TapOptions& options = {});

}  // namespace kecss
