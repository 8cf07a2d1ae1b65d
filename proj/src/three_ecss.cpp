#include <algorithm>
#include <cmath>

#include "kecss/augk.hpp"
#include "kecss/connectivity.hpp"
#include "kecss/cycle_space.hpp"
#include "kecss/errors.hpp"
#include "kecss/random.hpp"
#include "kecss/trees.hpp"

namespace kecss {

namespace {

constexpr std::uint64_t kLabelStream = 1;
constexpr std::uint64_t kCoinStream = 2;
constexpr std::uint64_t kBaseStream = 3;

// Shared decision state: the estimate of the previous iteration, whether it
// ran at p = 1, and the schedule position.
struct Estimate {
  bool has_previous = false;
  int previous = 0;
  bool last_full = false;
};

CandidateDecision decide(int max_exponent, bool verified, bool final, const Estimate& est,
                         const PhaseSchedule& schedule) {
  CandidateDecision d;
  if (verified) {
    d.stop = true;
    return d;
  }
  if (max_exponent < 0) {
    d.min_exponent = 64;
    d.probability_exponent = schedule.exponent();
    return d;
  }
  int value = max_exponent;
  if (est.has_previous) {
    const int ceiling = est.last_full ? est.previous - 1 : est.previous;
    value = std::min(value, ceiling);
  }
  value = std::max(value, 1);
  if (final) {
    d.min_exponent = 1;
    d.probability_exponent = 0;
    return d;
  }
  d.min_exponent = value;
  d.probability_exponent =
      (!est.has_previous || value != est.previous) ? schedule.start_exponent() : schedule.exponent();
  return d;
}

}  // namespace

ThreeEcssResult three_ecss(const Graph& g, const ThreeEcssOptions& options) {
  const int n = g.num_vertices();
  const int m = g.num_edges();
  if (n < 2) throw PreconditionError("three_ecss needs at least two vertices");
  for (const auto& e : g.edges()) {
    if (e.weight != 1) throw PreconditionError("three_ecss needs unit weights");
  }
  if (auto cut = find_small_cut(g, full_mask(g), 3)) {
    std::string names;
    for (EdgeId e : cut->edges) names += (names.empty() ? "" : ",") + std::to_string(e);
    throw PreconditionError("three_ecss: graph is not 3-edge-connected; cut {" + names + "}");
  }
  congest::RunOptions run;
  run.message_bits = options.message_bits;
  run.seed = options.seed;

  ThreeEcssResult out;
  auto bfs = build_bfs(g, 0, run);
  out.tree = bfs.tree;
  out.bfs_rounds = bfs.rounds;
  const RootedTree& t = out.tree;
  if (options.ledger) {
    options.ledger->record_executed("bfs", bfs.rounds);
    options.ledger->record_executed("depth-exchange", 1);
  }

  congest::RoundLedger base_ledger;
  TapOptions tap;
  tap.seed = derive_seed(options.seed, kBaseStream);
  tap.ledger = &base_ledger;
  out.base_tap = tap_augment(g, t, tap);
  out.base = set_union(t.tree_edges, out.base_tap.added);
  if (options.ledger) options.ledger->charge("substituted-2ecss", base_ledger.charged_total());

  PhaseSchedule schedule(n, m, options.coefficient);
  const int levels_bound = ceil_log2(static_cast<long long>(n) * n) + 2;
  out.iteration_cap = static_cast<long long>(levels_bound) * (schedule.start_exponent() + 1) * schedule.phase_length();

  EdgeSet host = out.base;
  Estimate est;
  bool changed = true;
  int simulations = 0;
  int last_rounds = 0;
  for (long long it = 0;; ++it) {
    const bool final = it + 1 >= out.iteration_cap;
    const std::uint64_t label_seed = derive_seed(options.seed, static_cast<std::uint64_t>(it), kLabelStream);
    const std::uint64_t coin_seed = derive_seed(options.seed, static_cast<std::uint64_t>(it), kCoinStream);
    const DecisionRule rule = [&](int max_exponent, bool verified) {
      return decide(max_exponent, verified, final, est, schedule);
    };

    const LabelAssignment la = assign_labels(g, t, host, options.bits, label_seed);
    const LabelCensus census = census_of(g, t, la);
    const bool verified = verify_3ec(t, census);
    std::vector<std::uint64_t> counts(m, 0);
    int top = -1;
    for (EdgeId e = 0; e < m; ++e) {
      if (la.in_host[e]) continue;
      counts[e] = cover_count(g, t, la, census, e);
      top = std::max(top, count_exponent(counts[e]));
    }
    const CandidateDecision d = rule(top, verified);
    EdgeSet active;
    int candidates = 0;
    if (!d.stop) {
      for (EdgeId e = 0; e < m; ++e) {
        const int z = count_exponent(counts[e]);
        if (la.in_host[e] || z < 0 || z < d.min_exponent) continue;
        ++candidates;
        if (candidate_coin(coin_seed, e, d.probability_exponent)) active.push_back(e);
      }
    }

    ThreeEcssIteration rec;
    rec.max_exponent = top;
    rec.min_exponent = d.min_exponent;
    rec.probability_exponent = d.probability_exponent;
    rec.candidates = candidates;
    rec.added = static_cast<int>(active.size());
    rec.verified = verified;

    const bool simulate = options.tier1 == Tier1Policy::Always ||
                          (options.tier1 == Tier1Policy::OnChange && changed &&
                           (options.max_simulations < 0 || simulations < options.max_simulations));
    if (simulate) {
      auto labels = sample_circulation(g, t, host, options.bits, label_seed, run);
      if (labels.labels.label != la.label) throw InvariantViolation("three_ecss: simulated labels differ");
      auto cens = census_build(g, t, la, run);
      if (cens.census.class_size != census.class_size) {
        throw InvariantViolation("three_ecss: simulated census differs");
      }
      auto cand = evaluate_candidates(g, t, la, census, rule, coin_seed, run);
      for (EdgeId e = 0; e < m; ++e) {
        if (!la.in_host[e] && cand.counts[e] != counts[e]) {
          throw InvariantViolation("three_ecss: simulated cover count of edge " + std::to_string(e) + " differs");
        }
      }
      if (cand.max_exponent != top || cand.verified != verified || cand.activated != active) {
        throw InvariantViolation("three_ecss: simulated candidate round differs");
      }
      last_rounds = labels.stats.rounds + cens.stats.rounds + cand.stats.rounds;
      ++simulations;
      changed = false;
      rec.simulated = true;
      if (options.ledger) options.ledger->record_executed("three-ecss-iteration", last_rounds);
    } else if (options.ledger && options.tier1 != Tier1Policy::Never) {
      options.ledger->charge("three-ecss-replay", last_rounds);
    }
    rec.executed_rounds = options.tier1 == Tier1Policy::Never ? 0 : last_rounds;
    if (options.ledger) options.ledger->close_iteration();
    out.history.push_back(rec);
    ++out.iterations;

    if (d.stop) {
      out.verified = true;
      break;
    }
    host = set_union(host, active);
    out.added = set_union(out.added, active);
    if (!active.empty()) changed = true;
    if (final) {
      out.forced_final = true;
      break;
    }
    if (top >= 0) {
      if (!est.has_previous || d.min_exponent != est.previous) {
        schedule.reset();
        ++out.levels;
      }
      est.has_previous = true;
      est.previous = d.min_exponent;
      est.last_full = d.probability_exponent == 0;
    }
    schedule.advance();
  }
  out.edges = host;
  return out;
}

}  // namespace kecss
