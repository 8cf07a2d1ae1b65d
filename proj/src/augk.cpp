#include "kecss/augk.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "kecss/errors.hpp"
#include "kecss/random.hpp"

namespace kecss {

PhaseSchedule::PhaseSchedule(int n, int m, double coefficient)
    : start_(ceil_log2(std::max(m, 1))),
      length_(std::max(1, static_cast<int>(std::ceil(coefficient * std::log(std::max(n, 2)))))),
      exponent_(start_) {}

Rational PhaseSchedule::probability() const { return power_of_two(-exponent_); }

void PhaseSchedule::reset() {
  exponent_ = start_;
  position_ = 0;
}

void PhaseSchedule::advance() {
  ++position_;
  if (position_ == length_ && exponent_ > 0) {
    --exponent_;
    position_ = 0;
  }
}

long long PhaseSchedule::bound(int levels) const {
  return static_cast<long long>(levels) * (start_ + 1) * length_;
}

namespace {

std::string describe(const EdgeSet& edges) {
  std::ostringstream out;
  out << "{";
  for (std::size_t i = 0; i < edges.size(); ++i) out << (i ? "," : "") << edges[i];
  out << "}";
  return out.str();
}

}  // namespace

AugKState::AugKState(const Graph& g, EdgeSet h, int k, AugKOptions options)
    : g_(g), options_(options), schedule_(g.num_vertices(), g.num_edges(), options.coefficient) {
  if (k < 2) throw PreconditionError("aug_k needs k >= 2");
  const int n = g.num_vertices();
  in_h_ = make_mask(g.num_edges(), h);
  if (!is_k_edge_connected(g, full_mask(g), k)) {
    throw PreconditionError("aug_k: graph is not " + std::to_string(k) + "-edge-connected");
  }
  if (!is_k_edge_connected(g, in_h_, k - 1)) {
    throw PreconditionError("aug_k: subgraph is not " + std::to_string(k - 1) + "-edge-connected");
  }
  diameter_ = options.diameter >= 0 ? options.diameter : kecss::diameter(g);

  result_.cuts = enumerate_min_cuts(g, in_h_, k - 1);
  const int cut_count = static_cast<int>(result_.cuts.size());
  result_.cut_cost.assign(cut_count, Rational(0));
  // Cuts crossed by each edge outside H; fixed because H does not change.
  crossed_.assign(g.num_edges(), {});
  for (int c = 0; c < cut_count; ++c) {
    const auto side = side_flags(n, result_.cuts[c]);
    for (EdgeId e = 0; e < g.num_edges(); ++e) {
      if (!in_h_[e] && crosses(g, side, e)) crossed_[e].push_back(c);
    }
  }
  covered_.assign(cut_count, false);
  uncovered_ = cut_count;
  in_a_.assign(g.num_edges(), false);
  activated_.assign(g.num_edges(), false);
}

std::uint64_t AugKState::cover_count(EdgeId e) const {
  if (in_h_[e] || in_a_[e]) return 0;
  std::uint64_t c = 0;
  for (int x : crossed_[e]) c += !covered_[x];
  return c;
}

CostEffectiveness AugKState::cost_effectiveness(EdgeId e) const {
  if (in_h_[e] || in_a_[e]) throw PreconditionError("cost_effectiveness: edge " + std::to_string(e) + " is in H or A");
  return make_cost_effectiveness(cover_count(e), g_.edge(e).weight);
}

AugKStep AugKState::iterate() { return step(-1); }

AugKStep AugKState::iterate_with(int exponent) {
  if (exponent < 0) throw PreconditionError("iterate_with: negative probability exponent");
  return step(exponent);
}

AugKStep AugKState::step(int forced_exponent) {
  if (done()) throw PreconditionError("aug_k iteration with every cut covered");
  const int n = g_.num_vertices();
  const int m = g_.num_edges();
  AugKStep st;
  int top = CostEffectiveness::kZero;
  std::vector<int> exponent(m, CostEffectiveness::kZero);
  for (EdgeId e = 0; e < m; ++e) {
    if (in_h_[e] || in_a_[e]) continue;
    exponent[e] = cost_effectiveness(e).exponent;
    top = std::max(top, exponent[e]);
  }
  if (top == CostEffectiveness::kZero) throw InvariantViolation("aug_k: uncovered cut without a covering edge");
  if (result_.levels == 0 || top != previous_level_) {
    if (result_.levels > 0 && top > previous_level_) {
      throw InvariantViolation("aug_k: maximal cost-effectiveness increased");
    }
    schedule_.reset();
    ++result_.levels;
    previous_level_ = top;
  }
  st.max_exponent = top;
  std::vector<EdgeId> candidates;
  for (EdgeId e = 0; e < m; ++e) {
    if (!in_h_[e] && !in_a_[e] && exponent[e] == top) candidates.push_back(e);
  }
  st.candidates = static_cast<int>(candidates.size());
  st.phase_start = schedule_.phase_start();
  st.probability_exponent = forced_exponent >= 0 ? forced_exponent : schedule_.exponent();
  if (st.phase_start) {
    std::vector<int> degree(covered_.size(), 0);
    for (EdgeId e : candidates) {
      for (int c : crossed_[e]) degree[c] += !covered_[c];
    }
    result_.degree_trace.push_back({st.probability_exponent, *std::max_element(degree.begin(), degree.end())});
  }

  for (EdgeId e : candidates) {
    const auto draw =
        derive_seed(options_.seed, static_cast<std::uint64_t>(result_.iterations), static_cast<std::uint64_t>(e));
    if (coin_power_of_two(draw, st.probability_exponent)) st.active.push_back(e);
  }
  for (EdgeId e : st.active) activated_[e] = true;

  // Kruskal under weights A -> 0, active -> 1, else -> 2 with id tie-break;
  // the weight-2 edges never change which active edges enter the forest.
  DisjointSets forest(n);
  for (EdgeId e : added_) {
    if (!forest.unite(g_.edge(e).u, g_.edge(e).v)) throw InvariantViolation("aug_k: augmentation set has a cycle");
  }
  for (EdgeId e : st.active) {
    if (forest.unite(g_.edge(e).u, g_.edge(e).v)) st.admitted.push_back(e);
  }
  const Rational cost = top == CostEffectiveness::kInfinite ? Rational(0) : power_of_two(-top);
  for (EdgeId e : st.admitted) {
    in_a_[e] = true;
    added_.push_back(e);
    for (int c : crossed_[e]) {
      if (covered_[c]) continue;
      covered_[c] = true;
      --uncovered_;
      ++st.newly_covered;
      result_.cut_cost[c] = cost;
    }
  }
  for (EdgeId e : st.active) {
    if (in_a_[e]) continue;
    if (forest.find(g_.edge(e).u) != forest.find(g_.edge(e).v)) {
      throw InvariantViolation("aug_k: active edge " + std::to_string(e) + " was rejected without closing a cycle");
    }
    for (int c : crossed_[e]) {
      if (!covered_[c]) {
        throw InvariantViolation("aug_k: cut " + describe(result_.cuts[c].edges) + " of active edge " +
                                 std::to_string(e) + " is still uncovered");
      }
    }
  }
  ++result_.iterations;
  schedule_.advance();
  if (options_.ledger) {
    options_.ledger->charge("augk-iteration", diameter_ + static_cast<long long>(st.admitted.size()));
    options_.ledger->close_iteration();
  }
  return st;
}

AugKResult AugKState::result() const {
  AugKResult r = result_;
  r.added = normalized(added_);
  r.weight = g_.weight_of(r.added);
  r.activated = mask_to_set(activated_);
  r.activated_weight = g_.weight_of(r.activated);
  r.total_cost = 0;
  for (const auto& c : r.cut_cost) r.total_cost += c;
  r.iteration_bound = schedule_.bound(r.levels);
  return r;
}

AugKResult aug_k(const Graph& g, const EdgeSet& h, int k, const AugKOptions& options) {
  AugKState state(g, h, k, options);
  while (!state.done()) state.iterate();
  AugKResult r = state.result();
  if (r.iterations > r.iteration_bound) {
    throw InvariantViolation("aug_k: " + std::to_string(r.iterations) + " iterations exceed the schedule bound " +
                             std::to_string(r.iteration_bound));
  }
  return r;
}

KEcssResult k_ecss(const Graph& g, int k, const AugKOptions& options) {
  if (k < 1) throw PreconditionError("k_ecss needs k >= 1");
  if (g.num_vertices() >= 2) {
    if (auto cut = find_small_cut(g, full_mask(g), k)) {
      throw PreconditionError("k_ecss: graph is not " + std::to_string(k) + "-edge-connected; cut " +
                              describe(cut->edges));
    }
  }
  AugKOptions opts = options;
  if (opts.diameter < 0) opts.diameter = g.num_vertices() > 0 ? diameter(g) : 0;
  KEcssResult out;
  out.mst = build_mst(g, 0, opts.ledger, opts.diameter);
  out.edges = out.mst.tree.tree_edges;
  for (int i = 2; i <= k; ++i) {
    AugKOptions stage = opts;
    stage.seed = derive_seed(options.seed, static_cast<std::uint64_t>(i));
    out.stages.push_back(aug_k(g, out.edges, i, stage));
    out.edges = set_union(out.edges, out.stages.back().added);
  }
  out.weight = g.weight_of(out.edges);
  return out;
}

}  // namespace kecss
