#pragma once

#include <cstdint>
#include <vector>

#include "kecss/congest.hpp"
#include "kecss/connectivity.hpp"
#include "kecss/cost.hpp"
#include "kecss/graph.hpp"
#include "kecss/trees.hpp"

namespace kecss {

inline constexpr double kPhaseCoefficient = 18.0;

// Activation probability schedule: p = 2^-exponent starts at 2^-ceil(log2 m),
// doubles after every phase of ceil(M ln n) iterations, stops at 1, and
// restarts when the maximal rounded cost-effectiveness drops.
class PhaseSchedule {
 public:
  PhaseSchedule(int n, int m, double coefficient = kPhaseCoefficient);

  int start_exponent() const { return start_; }
  int phase_length() const { return length_; }
  int exponent() const { return exponent_; }
  // True when the next iteration opens a phase.
  bool phase_start() const { return position_ == 0; }
  Rational probability() const;

  void reset();
  void advance();
  // Most iterations the schedule allows over `levels` distinct maxima.
  long long bound(int levels) const;

 private:
  int start_;
  int length_;
  int exponent_;
  int position_ = 0;
};

struct AugKOptions {
  std::uint64_t seed = 0;
  double coefficient = kPhaseCoefficient;
  congest::RoundLedger* ledger = nullptr;
  int diameter = -1;  // -1: computed from the graph
};

struct DegreeSample {
  int exponent;    // p = 2^-exponent at the phase start
  int max_degree;  // most candidates covering one uncovered cut
};

struct AugKResult {
  EdgeSet added;
  Weight weight = 0;
  EdgeSet activated;  // every edge that was ever active; contains `added`
  Weight activated_weight = 0;
  int iterations = 0;
  int levels = 0;  // distinct maximal rounded cost-effectiveness values
  long long iteration_bound = 0;
  std::vector<Cut> cuts;        // cuts of H of size k-1
  std::vector<Rational> cut_cost;  // per cut; 1/rounded of its covering iteration
  Rational total_cost = 0;
  std::vector<DegreeSample> degree_trace;
};

struct AugKStep {
  int max_exponent = 0;          // rounded cost-effectiveness of the candidates
  int probability_exponent = 0;  // p = 2^-probability_exponent
  bool phase_start = false;
  int candidates = 0;
  EdgeSet active;
  EdgeSet admitted;
  int newly_covered = 0;
};

// Uncovered (k-1)-cuts of H, the augmentation A and the activation schedule.
class AugKState {
 public:
  AugKState(const Graph& g, EdgeSet h, int k, AugKOptions options = {});

  bool done() const { return uncovered_ == 0; }
  // Uncovered cuts e crosses; 0 for edges of H or A.
  std::uint64_t cover_count(EdgeId e) const;
  CostEffectiveness cost_effectiveness(EdgeId e) const;
  // One iteration with p taken from the schedule.
  AugKStep iterate();
  // One iteration with p = 2^-exponent; the schedule still advances.
  AugKStep iterate_with(int exponent);

  const PhaseSchedule& schedule() const { return schedule_; }
  const EdgeSet& augmentation() const { return added_; }
  const std::vector<Cut>& cuts() const { return result_.cuts; }
  bool cut_covered(int cut) const { return covered_[cut]; }
  AugKResult result() const;

 private:
  AugKStep step(int forced_exponent);

  const Graph& g_;
  AugKOptions options_;
  int diameter_ = 0;
  EdgeMask in_h_;
  EdgeMask in_a_;
  EdgeSet added_;
  std::vector<std::vector<int>> crossed_;  // per edge outside H
  std::vector<bool> covered_;
  int uncovered_ = 0;
  std::vector<bool> activated_;
  PhaseSchedule schedule_;
  int previous_level_ = 0;
  AugKResult result_;
};

// Augments the (k-1)-edge-connected subgraph `h` to k-edge-connectivity.
AugKResult aug_k(const Graph& g, const EdgeSet& h, int k, const AugKOptions& options = {});

struct KEcssResult {
  EdgeSet edges;
  Weight weight = 0;
  MstResult mst;
  std::vector<AugKResult> stages;  // stage i augments to (i+2)-connectivity
};

// MST, then augmentation stages 2..k.
KEcssResult k_ecss(const Graph& g, int k, const AugKOptions& options = {});

}  // namespace kecss
