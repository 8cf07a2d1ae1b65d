#include "kecss/tap.hpp"

#include <algorithm>
#include <array>
#include <climits>
#include <set>
#include <sstream>

#include "kecss/connectivity.hpp"
#include "kecss/errors.hpp"
#include "kecss/random.hpp"

namespace kecss {

std::vector<EdgeId> tree_path(const RootedTree& t, const Graph& g, EdgeId e) {
  if (t.is_tree_edge(e)) throw PreconditionError("tree_path: edge " + std::to_string(e) + " is a tree edge");
  return t.path(g.edge(e).u, g.edge(e).v);
}

namespace {

constexpr int kNone = INT_MAX;

using u128 = unsigned __int128;

// How the tree path of one link splits into pieces its endpoints can see.
struct PathParts {
  std::array<std::vector<EdgeId>, 2> up;  // P_e within the endpoint's own segment, from the endpoint upward
  std::vector<EdgeId> down;                // highway edges below the LCA when it sits in an endpoint's segment
  std::vector<int> skeleton;               // segments whose whole highway lies on P_e
  std::vector<bool> skeleton_member;       // an endpoint belongs to that segment
  std::vector<std::pair<int, int>> mid_offers;  // (segment, index of the attaching highway vertex from the top)
};

u128 power(std::uint64_t base, int exponent, bool& overflow) {
  u128 r = 1;
  overflow = false;
  for (int i = 0; i < exponent; ++i) {
    if (base != 0 && r > (~static_cast<u128>(0)) / base) {
      overflow = true;
      return 0;
    }
    r *= base;
  }
  return r;
}

}  // namespace

struct TapState::Impl {
  const Graph& g;
  RootedTree t;
  TapOptions opts;
  int n;
  int diameter = 0;
  bool cross_check = false;

  FragmentSet fragments;
  SegmentDecomposition seg;
  std::vector<int> highway_seg;  // internal highway vertex -> segment
  std::vector<std::vector<int>> tops;  // marked vertex -> segments it tops

  EdgeSet links;
  std::vector<int> link_index;  // per edge, -1 for tree edges
  std::vector<std::vector<EdgeId>> paths;
  std::vector<PathParts> parts;

  std::vector<bool> in_a;
  EdgeSet added;
  std::vector<bool> covered;
  std::vector<Rational> cost;
  std::vector<std::uint64_t> counts;  // per link, uncovered edges on its path
  std::vector<int> uncovered_highway;  // per segment

  int iteration = 0;
  std::vector<TapIteration> history;
  std::set<int> exponents;
  std::vector<std::pair<EdgeId, int>> last_votes;
  DrawFn draws;

  Impl(const Graph& graph, RootedTree tree, TapOptions options)
      : g(graph), t(std::move(tree)), opts(options), n(graph.num_vertices()) {
    if (t.num_vertices() != n) throw PreconditionError("tree does not span the graph");
    diameter = opts.diameter >= 0 ? opts.diameter : (n > 0 ? kecss::diameter(g) : 0);
    cross_check = opts.mode == TapMode::Decomposition && n <= opts.cross_check_limit;
    link_index.assign(g.num_edges(), -1);
    for (const Edge& e : g.edges()) {
      if (t.is_tree_edge(e.id)) continue;
      link_index[e.id] = static_cast<int>(links.size());
      links.push_back(e.id);
      paths.push_back(t.path(e.u, e.v));
    }
    in_a.assign(g.num_edges(), false);
    covered.assign(g.num_edges(), false);
    cost.assign(g.num_edges(), Rational(0));
    if (opts.mode == TapMode::Decomposition) build_parts();
    refresh_counts();
  }

  // --- segment structure -------------------------------------------------

  VertexId top_of(VertexId x) const {
    const int s = seg.segment_of_vertex[x];
    return s == -1 ? x : seg.segments[s].top;
  }

  bool skeleton_ancestor(VertexId a, VertexId b) const {
    while (seg.skeleton_depth[b] > seg.skeleton_depth[a]) b = seg.skeleton_parent[b];
    return a == b;
  }

  std::vector<int> skeleton_path(VertexId a, VertexId b) const {
    std::vector<int> out;
    while (a != b) {
      if (seg.skeleton_depth[a] >= seg.skeleton_depth[b]) {
        out.push_back(seg.segment_below[a]);
        a = seg.skeleton_parent[a];
      } else {
        out.push_back(seg.segment_below[b]);
        b = seg.skeleton_parent[b];
      }
    }
    return out;
  }

  int attach_index(int s, VertexId w) const {
    const Segment& S = seg.segments[s];
    VertexId x = w;
    while (x != S.top && highway_seg[x] != s) x = t.parent[x];
    return t.depth[x] - t.depth[S.top];
  }

  void build_parts() {
    fragments = opts.fragment_height > 0 ? build_fragments(t, opts.fragment_height) : build_fragments(t);
    seg = decompose_segments(t, fragments);
    highway_seg.assign(n, -1);
    tops.assign(n, {});
    for (int s = 0; s < seg.count(); ++s) {
      const Segment& S = seg.segments[s];
      tops[S.top].push_back(s);
      VertexId x = S.bottom;
      for (std::size_t i = 0; i + 1 < S.highway.size(); ++i) {
        x = t.parent[x];
        highway_seg[x] = s;
      }
    }
    // Structural knowledge only; the item values are read per iteration.
    std::vector<std::uint64_t> none(g.num_edges(), 0);
    std::vector<std::uint64_t> seg_none(seg.count(), 0);
    const int budget = congest::message_budget(n);
    Dissemination know = disseminate(t, seg, none, 1, seg_none, 1, budget);
    auto edges_of = [](const std::vector<KnownItem>& items) {
      std::vector<EdgeId> out;
      out.reserve(items.size());
      for (const auto& i : items) out.push_back(i.edge);
      return out;
    };

    parts.resize(links.size());
    for (std::size_t li = 0; li < links.size(); ++li) {
      const Edge& e = g.edge(links[li]);
      PathParts& p = parts[li];
      const VertexId ends[2] = {e.u, e.v};
      const int su = seg.segment_of_vertex[e.u];
      const int sv = seg.segment_of_vertex[e.v];
      auto top_u = edges_of(know.vertices[e.u].to_top);
      auto top_v = edges_of(know.vertices[e.v].to_top);

      auto lower_exit = [&](int s) -> VertexId {
        if (s == -1 || !seg.segments[s].has_highway()) return -1;
        return seg.segments[s].bottom;
      };

      if (su != -1 && su == sv) {
        // Same segment: the paths to r_S diverge at the LCA.
        while (!top_u.empty() && !top_v.empty() && top_u.back() == top_v.back()) {
          top_u.pop_back();
          top_v.pop_back();
        }
        p.up[0] = top_u;
        p.up[1] = top_v;
      } else if (sv != -1 && e.u == seg.segments[sv].top) {
        p.up[1] = top_v;
      } else if (su != -1 && e.v == seg.segments[su].top) {
        p.up[0] = top_u;
      } else {
        int upper = -1;  // endpoint whose segment holds the LCA below its r_S
        for (int k = 0; k < 2 && upper == -1; ++k) {
          const int s = seg.segment_of_vertex[ends[k]];
          const VertexId d = lower_exit(s);
          if (d != -1 && skeleton_ancestor(d, top_of(ends[1 - k]))) upper = k;
        }
        if (upper == -1) {
          p.up[0] = top_u;
          p.up[1] = top_v;
          p.skeleton = skeleton_path(top_of(e.u), top_of(e.v));
        } else {
          const VertexId w = ends[upper];
          const VertexId y = ends[1 - upper];
          const auto& w_top = upper == 0 ? top_u : top_v;
          auto w_bottom = edges_of(know.vertices[w].to_bottom);
          std::size_t common = 0;
          while (common < w_bottom.size() && common < w_top.size() && w_bottom[common] == w_top[common]) ++common;
          p.up[upper].assign(w_bottom.begin(), w_bottom.begin() + static_cast<long>(common));
          p.down.assign(w_bottom.begin() + static_cast<long>(common), w_bottom.end());
          p.up[1 - upper] = upper == 0 ? top_v : top_u;
          const int s = seg.segment_of_vertex[w];
          p.skeleton = skeleton_path(top_of(y), seg.segments[s].bottom);
        }
      }
      for (int s : p.skeleton) p.skeleton_member.push_back(seg.is_member(s, e.u) || seg.is_member(s, e.v));

      // Segments where one endpoint hangs off the highway and the other lies below d_S.
      for (int k = 0; k < 2; ++k) {
        const VertexId w = ends[k];
        const VertexId y = ends[1 - k];
        std::vector<int> member_of = tops[w];
        if (seg.segment_of_vertex[w] != -1) member_of.push_back(seg.segment_of_vertex[w]);
        for (int s : member_of) {
          const Segment& S = seg.segments[s];
          if (!S.has_highway() || w == S.bottom) continue;
          if (!skeleton_ancestor(S.bottom, top_of(y))) continue;
          p.mid_offers.emplace_back(s, attach_index(s, w));
        }
      }

      if (cross_check) {
        std::vector<EdgeId> assembled;
        for (const auto& u : p.up) assembled.insert(assembled.end(), u.begin(), u.end());
        assembled.insert(assembled.end(), p.down.begin(), p.down.end());
        for (int s : p.skeleton) {
          const auto& hw = seg.segments[s].highway;
          assembled.insert(assembled.end(), hw.begin(), hw.end());
        }
        std::sort(assembled.begin(), assembled.end());
        auto direct = paths[li];
        std::sort(direct.begin(), direct.end());
        if (assembled != direct) {
          throw InvariantViolation("segment path decomposition disagrees with the tree path of edge " +
                                   std::to_string(e.id));
        }
      }
    }
  }

  // --- per-iteration quantities --------------------------------------------

  std::uint64_t uncovered_on(const std::vector<EdgeId>& edges) const {
    std::uint64_t c = 0;
    for (EdgeId x : edges) c += !covered[x];
    return c;
  }

  void refresh_counts() {
    counts.assign(links.size(), 0);
    if (opts.mode == TapMode::Direct) {
      for (std::size_t li = 0; li < links.size(); ++li) counts[li] = uncovered_on(paths[li]);
      return;
    }
    uncovered_highway.assign(seg.count(), 0);
    for (int s = 0; s < seg.count(); ++s) {
      uncovered_highway[s] = static_cast<int>(uncovered_on(seg.segments[s].highway));
    }
    for (std::size_t li = 0; li < links.size(); ++li) {
      const PathParts& p = parts[li];
      std::uint64_t c = uncovered_on(p.up[0]) + uncovered_on(p.up[1]) + uncovered_on(p.down);
      for (int s : p.skeleton) c += static_cast<std::uint64_t>(uncovered_highway[s]);
      counts[li] = c;
    }
    if (cross_check) {
      for (std::size_t li = 0; li < links.size(); ++li) {
        if (counts[li] != uncovered_on(paths[li])) {
          throw InvariantViolation("segment count disagrees with path count for edge " +
                                   std::to_string(links[li]));
        }
      }
    }
  }

  // Best (minimum rank) set member covering each uncovered tree edge.
  std::vector<int> best_direct(const std::vector<int>& rank) const {
    std::vector<int> best(g.num_edges(), kNone);
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (rank[li] == kNone) continue;
      for (EdgeId x : paths[li]) {
        if (!covered[x]) best[x] = std::min(best[x], rank[li]);
      }
    }
    return best;
  }

  std::vector<int> long_best(const std::vector<int>& rank) const {
    std::vector<int> best(seg.count(), kNone);
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (rank[li] == kNone) continue;
      const PathParts& p = parts[li];
      for (std::size_t i = 0; i < p.skeleton.size(); ++i) {
        if (!p.skeleton_member[i]) best[p.skeleton[i]] = std::min(best[p.skeleton[i]], rank[li]);
      }
    }
    return best;
  }

  std::vector<int> best_decomposed(const std::vector<int>& rank, std::vector<int>& longest) const {
    std::vector<int> local(g.num_edges(), kNone);
    std::vector<std::vector<int>> attach(seg.count());
    for (int s = 0; s < seg.count(); ++s) attach[s].assign(seg.segments[s].highway.size() + 1, kNone);
    for (std::size_t li = 0; li < links.size(); ++li) {
      const int r = rank[li];
      if (r == kNone) continue;
      const PathParts& p = parts[li];
      // Short range and mid range with the descendant endpoint inside the segment.
      for (const auto& up : p.up) {
        for (EdgeId x : up) local[x] = std::min(local[x], r);
      }
      for (const auto& [s, idx] : p.mid_offers) attach[s][idx] = std::min(attach[s][idx], r);
    }
    longest = long_best(rank);
    std::vector<int> best(g.num_edges(), kNone);
    for (EdgeId x : t.tree_edges) {
      if (!covered[x]) best[x] = local[x];
    }
    for (int s = 0; s < seg.count(); ++s) {
      const auto& hw = seg.segments[s].highway;
      // Downward prefix minimum along the highway, from r_S toward d_S.
      int cur = kNone;
      for (std::size_t i = 0; i < hw.size(); ++i) {
        cur = std::min(cur, attach[s][i]);
        const EdgeId x = hw[hw.size() - 1 - i];
        if (covered[x]) continue;
        best[x] = std::min({best[x], cur, longest[s]});
      }
    }
    return best;
  }

  std::vector<int> best_for(const std::vector<int>& rank, std::vector<int>& longest) const {
    if (opts.mode == TapMode::Direct) return best_direct(rank);
    auto best = best_decomposed(rank, longest);
    if (cross_check) {
      if (best != best_direct(rank)) throw InvariantViolation("segment best-edge computation disagrees with direct mode");
      // Every highway edge of a segment shares one optimal long-range edge.
      for (int s = 0; s < seg.count(); ++s) {
        for (EdgeId x : seg.segments[s].highway) {
          if (covered[x]) continue;
          int direct = kNone;
          for (std::size_t li = 0; li < links.size(); ++li) {
            if (rank[li] == kNone) continue;
            const Edge& e = g.edge(links[li]);
            if (seg.is_member(s, e.u) || seg.is_member(s, e.v)) continue;
            if (std::find(paths[li].begin(), paths[li].end(), x) != paths[li].end()) direct = std::min(direct, rank[li]);
          }
          if (direct != longest[s]) {
            throw InvariantViolation("highway of segment " + std::to_string(s) +
                                     " has more than one optimal long-range edge");
          }
        }
      }
    }
    return best;
  }

  std::vector<int> votes_for(const std::vector<int>& rank, const std::vector<int>& best,
                             const std::vector<int>& longest) const {
    std::vector<int> votes(links.size(), 0);
    auto count_in = [&](const std::vector<EdgeId>& edges, int r) {
      int c = 0;
      for (EdgeId x : edges) c += best[x] == r;
      return c;
    };
    if (opts.mode == TapMode::Direct) {
      for (std::size_t li = 0; li < links.size(); ++li) {
        if (rank[li] != kNone) votes[li] = count_in(paths[li], rank[li]);
      }
      return votes;
    }
    // Per segment: highway edges whose best edge is the segment's long-range best.
    std::vector<int> long_votes(seg.count(), 0);
    for (int s = 0; s < seg.count(); ++s) {
      if (longest[s] != kNone) long_votes[s] = count_in(seg.segments[s].highway, longest[s]);
    }
    for (std::size_t li = 0; li < links.size(); ++li) {
      const int r = rank[li];
      if (r == kNone) continue;
      const PathParts& p = parts[li];
      int v = count_in(p.up[0], r) + count_in(p.up[1], r) + count_in(p.down, r);
      for (std::size_t i = 0; i < p.skeleton.size(); ++i) {
        const int s = p.skeleton[i];
        if (p.skeleton_member[i]) {
          v += count_in(seg.segments[s].highway, r);
        } else if (longest[s] == r) {
          v += long_votes[s];
        }
      }
      votes[li] = v;
    }
    if (cross_check) {
      for (std::size_t li = 0; li < links.size(); ++li) {
        if (rank[li] != kNone && votes[li] != count_in(paths[li], rank[li])) {
          throw InvariantViolation("segment vote count disagrees with direct mode");
        }
      }
    }
    return votes;
  }

  u128 draw(EdgeId e) const {
    if (draws) return draws(e);
    bool overflow = false;
    const u128 bound = power(static_cast<std::uint64_t>(std::max(n, 2)), 8, overflow);
    SplitMix rng(derive_seed(opts.seed, static_cast<std::uint64_t>(iteration), static_cast<std::uint64_t>(e)));
    if (overflow) return (static_cast<u128>(rng()) << 64) | rng();
    if (n <= 180) return 1 + rng.below(static_cast<std::uint64_t>(bound));
    return 1 + rng.below128(bound);
  }

  CostEffectiveness ce(std::size_t li) const {
    return make_cost_effectiveness(counts[li], g.edge(links[li]).weight);
  }

  bool done() const {
    for (EdgeId x : t.tree_edges) {
      if (!covered[x]) return false;
    }
    return true;
  }

  void admit(const std::vector<std::size_t>& chosen) {
    std::vector<int> rank(links.size(), kNone);
    // Coverage is learned as the first admitted edge by (u, v) order.
    std::vector<std::size_t> order = chosen;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.key_less(links[a], links[b]); });
    for (std::size_t i = 0; i < order.size(); ++i) rank[order[i]] = static_cast<int>(i);
    std::vector<int> longest;
    auto first = best_for(rank, longest);
    for (std::size_t li : chosen) {
      in_a[links[li]] = true;
      added.push_back(links[li]);
    }
    for (EdgeId x : t.tree_edges) {
      if (first[x] != kNone) covered[x] = true;
    }
  }

  void charge(const char* tag) {
    if (opts.ledger) opts.ledger->charge(tag, diameter + ceil_sqrt(n));
  }

  void admit_zero_weight() {
    std::vector<std::size_t> zero;
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (!in_a[links[li]] && g.edge(links[li]).weight == 0) zero.push_back(li);
    }
    admit(zero);
    charge("tap-init");
    refresh_counts();
  }

  TapIteration iterate() {
    if (done()) throw PreconditionError("tap iteration with every tree edge covered");
    ++iteration;
    TapIteration rec;
    int max_exp = CostEffectiveness::kZero;
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (in_a[links[li]]) continue;
      max_exp = std::max(max_exp, ce(li).exponent);
    }
    if (max_exp == CostEffectiveness::kZero) {
      throw InvariantViolation("no candidate link while tree edges remain uncovered");
    }
    std::vector<std::size_t> cands;
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (!in_a[links[li]] && ce(li).exponent == max_exp) cands.push_back(li);
    }
    rec.max_exponent = max_exp;
    rec.candidates = static_cast<int>(cands.size());
    for (std::size_t li : cands) rec.phi_before += counts[li];

    std::vector<std::pair<u128, std::size_t>> drawn;
    for (std::size_t li : cands) drawn.emplace_back(draw(links[li]), li);
    std::sort(drawn.begin(), drawn.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return g.key_less(links[a.second], links[b.second]);
    });
    for (std::size_t i = 1; i < drawn.size(); ++i) {
      if (drawn[i].first == drawn[i - 1].first) rec.legal = false;
    }
    std::vector<int> rank(links.size(), kNone);
    for (std::size_t i = 0; i < drawn.size(); ++i) rank[drawn[i].second] = static_cast<int>(i);

    std::vector<int> longest;
    const auto best = best_for(rank, longest);
    const auto votes = votes_for(rank, best, longest);

    last_votes.clear();
    std::vector<std::size_t> chosen;
    for (std::size_t li : cands) {
      last_votes.emplace_back(links[li], votes[li]);
      if (8 * static_cast<std::uint64_t>(votes[li]) >= counts[li]) chosen.push_back(li);
    }
    rec.admitted = static_cast<int>(chosen.size());

    std::vector<bool> was_covered = covered;
    std::vector<int> rank_to_link(drawn.size());
    for (std::size_t i = 0; i < drawn.size(); ++i) rank_to_link[i] = static_cast<int>(drawn[i].second);
    std::vector<bool> admitted_link(links.size(), false);
    for (std::size_t li : chosen) admitted_link[li] = true;
    const auto start_counts = counts;
    admit(chosen);
    for (EdgeId x : t.tree_edges) {
      if (was_covered[x] || !covered[x]) continue;
      ++rec.newly_covered;
      const int r = best[x];
      if (r != kNone && admitted_link[rank_to_link[r]]) {
        const std::size_t li = rank_to_link[r];
        cost[x] = Rational(g.edge(links[li]).weight) / Rational(start_counts[li]);
      } else {
        cost[x] = 0;
      }
    }
    refresh_counts();
    for (std::size_t li = 0; li < links.size(); ++li) {
      if (!in_a[links[li]] && ce(li).exponent == max_exp) rec.phi_after += counts[li];
    }
    exponents.insert(max_exp);
    history.push_back(rec);
    charge("tap-iteration");
    if (opts.ledger) opts.ledger->close_iteration();
    return rec;
  }

  TapResult result() const {
    TapResult r;
    r.added = normalized(added);
    r.weight = g.weight_of(r.added);
    r.cost = cost;
    for (EdgeId x : t.tree_edges) r.total_cost += cost[x];
    r.iterations = iteration;
    r.history = history;
    r.distinct_exponents.assign(exponents.begin(), exponents.end());
    r.ledger_holds = Rational(r.weight) <= 8 * r.total_cost;
    return r;
  }
};

TapState::TapState(const Graph& g, RootedTree tree, TapOptions options)
    : impl_(std::make_unique<Impl>(g, std::move(tree), options)) {}
TapState::~TapState() = default;
TapState::TapState(TapState&&) noexcept = default;

void TapState::admit_zero_weight() { impl_->admit_zero_weight(); }
bool TapState::done() const { return impl_->done(); }
TapIteration TapState::iterate() { return impl_->iterate(); }
void TapState::set_draws(DrawFn draws) { impl_->draws = std::move(draws); }
const RootedTree& TapState::tree() const { return impl_->t; }
const SegmentDecomposition& TapState::segments() const { return impl_->seg; }
const EdgeSet& TapState::links() const { return impl_->links; }
bool TapState::in_augmentation(EdgeId e) const { return impl_->in_a[e]; }
bool TapState::covered(EdgeId tree_edge) const { return impl_->covered[tree_edge]; }
const std::vector<std::pair<EdgeId, int>>& TapState::last_votes() const { return impl_->last_votes; }
TapResult TapState::result() const { return impl_->result(); }

CostEffectiveness TapState::cost_effectiveness(EdgeId link) const {
  const int li = impl_->link_index.at(link);
  if (li < 0) throw PreconditionError("cost_effectiveness: edge " + std::to_string(link) + " is a tree edge");
  if (impl_->in_a[link]) throw PreconditionError("cost_effectiveness: edge already in the augmentation");
  return impl_->ce(static_cast<std::size_t>(li));
}

TapResult tap_augment(const Graph& g, const RootedTree& tree, const TapOptions& options) {
  TapState state(g, tree, options);
  state.admit_zero_weight();
  const int n = g.num_vertices();
  const int lg = ceil_log2(n);
  const int cap = options.iteration_cap > 0 ? options.iteration_cap : std::max(1, 64 * lg * lg);
  while (!state.done()) {
    if (state.result().iterations >= cap) {
      auto r = state.result();
      int uncovered = 0;
      for (EdgeId x : tree.tree_edges) uncovered += !state.covered(x);
      std::ostringstream msg;
      msg << "tap iteration cap " << cap << " reached with " << uncovered << " uncovered tree edges, "
          << r.added.size() << " links admitted, seed " << options.seed;
      throw InvariantViolation(msg.str());
    }
    state.iterate();
  }
  return state.result();
}

TwoEcssResult two_ecss(const Graph& g, const TapOptions& options) {
  if (g.num_vertices() >= 2 && !is_k_edge_connected(g, full_mask(g), 2)) {
    throw PreconditionError("two_ecss: input graph is not 2-edge-connected");
  }
  TapOptions opts = options;
  if (opts.diameter < 0) opts.diameter = g.num_vertices() > 0 ? diameter(g) : 0;
  TwoEcssResult out;
  out.mst = build_mst(g, 0, opts.ledger, opts.diameter);
  out.tap = tap_augment(g, out.mst.tree, opts);
  out.edges = set_union(out.mst.tree.tree_edges, out.tap.added);
  out.weight = g.weight_of(out.edges);
  return out;
}

}  // namespace kecss
