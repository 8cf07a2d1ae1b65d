#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "kecss/congest.hpp"
#include "kecss/graph.hpp"
#include "kecss/rooted_tree.hpp"
#include "kecss/tap.hpp"

namespace kecss {

inline constexpr int kDefaultLabelBits = 32;

// b-bit circulation labels on a host subgraph with a spanning tree.
struct LabelAssignment {
  int bits = kDefaultLabelBits;
  EdgeSet host;  // sorted
  EdgeMask in_host;
  std::vector<std::uint64_t> label;  // per graph edge; 0 outside the host
};

// Label a non-tree host edge draws: hashed from (seed, owning endpoint, edge),
// the owning endpoint being the smaller one.
std::uint64_t link_label(std::uint64_t seed, const Graph& g, EdgeId e, int bits);

// Non-tree host edges get hashed labels; each tree edge {v, p(v)} gets the XOR
// of the labels on the other host edges at v, scanned from the leaves up.
LabelAssignment assign_labels(const Graph& g, const RootedTree& t, const EdgeSet& host, int bits,
                              std::uint64_t seed);

// Pairs of host edges with equal labels, grouped by label class.
std::vector<std::pair<EdgeId, EdgeId>> cut_pairs_from_labels(const LabelAssignment& la);

struct LabelCensus {
  // Per graph edge; on tree edges the class size n_phi(t) learned from the
  // covering host edges (largest count of phi(t) on one of their cycles).
  std::vector<int> class_size;
  std::map<std::uint64_t, int> histogram;  // label -> host edges carrying it
};

LabelCensus census_of(const Graph& g, const RootedTree& t, const LabelAssignment& la);

// Uncovered cut pairs e closes: sum over labels phi on e's tree path of
// n_phi_e * (n_phi - n_phi_e), where n_phi_e counts path edges labelled phi.
std::uint64_t cover_count(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                          const LabelCensus& census, EdgeId e);

// True iff every tree edge is alone in its label class.
bool verify_3ec(const RootedTree& t, const LabelCensus& census);

// "edge-id hex-label" lines for host edges.
std::string dump_labels(const LabelAssignment& la);
// "label n_phi" lines, one per label class of the tree edges.
std::string dump_census(const RootedTree& t, const LabelAssignment& la, const LabelCensus& census);

// Message-passing versions. Vertices know their tree neighbours, which
// incident edges are in the host, and the depth of every neighbour.
struct LabelRun {
  LabelAssignment labels;
  congest::RunStats stats;
};
LabelRun sample_circulation(const Graph& g, const RootedTree& t, const EdgeSet& host, int bits,
                            std::uint64_t seed, const congest::RunOptions& options = {});

struct CensusRun {
  LabelCensus census;
  congest::RunStats stats;
};
// Root paths flow down and across host links, per-cycle label counts flow
// back up with a max merge.
CensusRun census_build(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                       const congest::RunOptions& options = {});

// What every vertex does with the global maximum exponent and the
// verification flag after the final broadcast.
struct CandidateDecision {
  bool stop = false;     // host verified; no coins flipped
  int min_exponent = 0;  // candidates have rounded cost-effectiveness >= 2^min_exponent
  int probability_exponent = 0;
};
using DecisionRule = std::function<CandidateDecision(int max_exponent, bool verified)>;

struct CandidateRun {
  int max_exponent = -1;  // -1 when no edge covers anything
  bool verified = false;
  CandidateDecision decision;
  std::vector<std::uint64_t> counts;  // per graph edge outside the host
  EdgeSet activated;
  congest::RunStats stats;
};
// Candidates learn their paths' labels and class sizes, compute their cover
// counts, a convergecast finds the maximum exponent and whether any class has
// more than one member, and owners of activated edges notify the other end.
CandidateRun evaluate_candidates(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                                 const LabelCensus& census, const DecisionRule& rule, std::uint64_t coin_seed,
                                 const congest::RunOptions& options = {});

// Exponent z with 2^z the least power of two above `count`; -1 for 0.
int count_exponent(std::uint64_t count);
// Coin for edge e at probability 2^-exponent.
bool candidate_coin(std::uint64_t coin_seed, EdgeId e, int exponent);

enum class Tier1Policy {
  Never,     // everything central, no executed rounds
  OnChange,  // simulate when the host changed since the last simulation
  Always,
};

struct ThreeEcssOptions {
  std::uint64_t seed = 0;
  int bits = kDefaultLabelBits;
  double coefficient = 18.0;
  Tier1Policy tier1 = Tier1Policy::OnChange;
  int max_simulations = -1;  // -1: no limit
  int message_bits = 0;      // 0: default budget
  congest::RoundLedger* ledger = nullptr;
};

struct ThreeEcssIteration {
  int max_exponent = -1;  // from the labels
  int min_exponent = 0;   // clamped estimate used for candidates
  int probability_exponent = 0;
  int candidates = 0;
  int added = 0;
  bool verified = false;
  bool simulated = false;
  int executed_rounds = 0;  // simulated rounds, or the last simulated value when replayed
};

struct ThreeEcssResult {
  EdgeSet edges;
  EdgeSet base;  // 2-edge-connected starting subgraph
  EdgeSet added;
  RootedTree tree;
  int bfs_rounds = 0;
  TapResult base_tap;
  int iterations = 0;
  long long iteration_cap = 0;
  int levels = 0;
  bool verified = false;      // stopped because the labels certified the host
  bool forced_final = false;  // the cap forced a final p = 1 sweep
  std::vector<ThreeEcssIteration> history;
};

// Unweighted 3-ECSS: BFS tree plus unit-weight TAP, then label-driven
// augmentation until the labels certify 3-edge-connectivity.
ThreeEcssResult three_ecss(const Graph& g, const ThreeEcssOptions& options = {});

}  // namespace kecss
