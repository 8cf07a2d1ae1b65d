#include "kecss/cycle_space.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <sstream>

#include "kecss/errors.hpp"
#include "kecss/random.hpp"

namespace kecss {

namespace {

std::uint64_t low_bits(std::uint64_t x, int bits) { return bits >= 64 ? x : x & ((std::uint64_t{1} << bits) - 1); }

void check_bits(int bits) {
  if (bits < 1 || bits > 64) throw PreconditionError("label width must be in [1, 64]");
}

void check_host(const Graph& g, const RootedTree& t, const EdgeMask& in_host) {
  if (t.num_vertices() != g.num_vertices()) throw PreconditionError("tree does not span the graph");
  for (EdgeId e : t.tree_edges) {
    if (!in_host[e]) throw PreconditionError("tree edge " + std::to_string(e) + " is not in the host");
  }
}

// Labels of `path` grouped: sorted (label, class size) pairs.
std::vector<std::pair<std::uint64_t, int>> grouped(const std::vector<EdgeId>& path, const LabelAssignment& la,
                                                   const LabelCensus* census) {
  std::vector<std::pair<std::uint64_t, int>> out;
  out.reserve(path.size());
  for (EdgeId x : path) out.emplace_back(la.label[x], census ? census->class_size[x] : 0);
  std::sort(out.begin(), out.end());
  return out;
}

// Sum over label groups of n_e * (n - n_e), n the largest known class size.
std::uint64_t pair_count(const std::vector<std::pair<std::uint64_t, int>>& sorted) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i;
    int size = 0;
    while (j < sorted.size() && sorted[j].first == sorted[i].first) size = std::max(size, sorted[j++].second);
    const auto on_path = static_cast<std::uint64_t>(j - i);
    if (static_cast<std::uint64_t>(size) > on_path) total += on_path * (static_cast<std::uint64_t>(size) - on_path);
    i = j;
  }
  return total;
}

}  // namespace

std::uint64_t link_label(std::uint64_t seed, const Graph& g, EdgeId e, int bits) {
  const VertexId owner = g.edge(e).u;
  return low_bits(mix64(derive_seed(derive_seed(seed, static_cast<std::uint64_t>(owner)), static_cast<std::uint64_t>(e))),
                  bits);
}

LabelAssignment assign_labels(const Graph& g, const RootedTree& t, const EdgeSet& host, int bits,
                              std::uint64_t seed) {
  check_bits(bits);
  LabelAssignment la;
  la.bits = bits;
  la.host = normalized(host);
  la.in_host = make_mask(g.num_edges(), la.host);
  check_host(g, t, la.in_host);
  la.label.assign(g.num_edges(), 0);
  for (EdgeId e : la.host) {
    if (!t.is_tree_edge(e)) la.label[e] = link_label(seed, g, e, bits);
  }
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    const VertexId v = *it;
    if (v == t.root) continue;
    std::uint64_t acc = 0;
    for (EdgeId e : g.incident(v)) {
      if (la.in_host[e] && e != t.parent_edge[v]) acc ^= la.label[e];
    }
    la.label[t.parent_edge[v]] = acc;
  }
  return la;
}

std::vector<std::pair<EdgeId, EdgeId>> cut_pairs_from_labels(const LabelAssignment& la) {
  std::vector<std::pair<std::uint64_t, EdgeId>> by_label;
  for (EdgeId e : la.host) by_label.emplace_back(la.label[e], e);
  std::sort(by_label.begin(), by_label.end());
  std::vector<std::pair<EdgeId, EdgeId>> pairs;
  for (std::size_t i = 0; i < by_label.size();) {
    std::size_t j = i;
    while (j < by_label.size() && by_label[j].first == by_label[i].first) ++j;
    for (std::size_t a = i; a < j; ++a) {
      for (std::size_t b = a + 1; b < j; ++b) pairs.emplace_back(by_label[a].second, by_label[b].second);
    }
    i = j;
  }
  return pairs;
}

LabelCensus census_of(const Graph& g, const RootedTree& t, const LabelAssignment& la) {
  LabelCensus c;
  c.class_size.assign(g.num_edges(), 0);
  for (EdgeId e : la.host) ++c.histogram[la.label[e]];
  for (EdgeId e : la.host) {
    if (t.is_tree_edge(e)) continue;
    const auto path = t.path(g.edge(e).u, g.edge(e).v);
    std::vector<std::uint64_t> cycle;
    cycle.reserve(path.size() + 1);
    for (EdgeId x : path) cycle.push_back(la.label[x]);
    cycle.push_back(la.label[e]);
    std::sort(cycle.begin(), cycle.end());
    for (EdgeId x : path) {
      auto [lo, hi] = std::equal_range(cycle.begin(), cycle.end(), la.label[x]);
      c.class_size[x] = std::max(c.class_size[x], static_cast<int>(hi - lo));
    }
  }
  for (EdgeId x : t.tree_edges) {
    if (c.class_size[x] == 0) {
      throw PreconditionError("host is not 2-edge-connected: tree edge " + std::to_string(x) +
                              " has no covering host edge");
    }
  }
  return c;
}

std::uint64_t cover_count(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                          const LabelCensus& census, EdgeId e) {
  if (la.in_host[e]) throw PreconditionError("cover_count: edge " + std::to_string(e) + " is in the host");
  return pair_count(grouped(t.path(g.edge(e).u, g.edge(e).v), la, &census));
}

bool verify_3ec(const RootedTree& t, const LabelCensus& census) {
  for (EdgeId x : t.tree_edges) {
    if (census.class_size[x] != 1) return false;
  }
  return true;
}

std::string dump_labels(const LabelAssignment& la) {
  std::ostringstream out;
  const int digits = (la.bits + 3) / 4;
  char buf[32];
  for (EdgeId e : la.host) {
    std::snprintf(buf, sizeof buf, "%0*llx", digits, static_cast<unsigned long long>(la.label[e]));
    out << e << ' ' << buf << '\n';
  }
  return out.str();
}

std::string dump_census(const RootedTree& t, const LabelAssignment& la, const LabelCensus& census) {
  std::map<std::uint64_t, int> classes;
  for (EdgeId x : t.tree_edges) classes[la.label[x]] = std::max(classes[la.label[x]], census.class_size[x]);
  std::ostringstream out;
  const int digits = (la.bits + 3) / 4;
  char buf[32];
  for (const auto& [label, size] : classes) {
    std::snprintf(buf, sizeof buf, "%0*llx", digits, static_cast<unsigned long long>(label));
    out << buf << ' ' << size << '\n';
  }
  return out.str();
}

int count_exponent(std::uint64_t count) { return count == 0 ? -1 : static_cast<int>(std::bit_width(count)); }

bool candidate_coin(std::uint64_t coin_seed, EdgeId e, int exponent) {
  return coin_power_of_two(derive_seed(coin_seed, static_cast<std::uint64_t>(e)), exponent);
}

// --- message-passing protocols ------------------------------------------------

namespace {

using congest::Context;
using congest::Inbound;
using congest::Message;
using congest::Outbox;

enum class Role : char { Parent, Child, HostLink, Other };

// Static knowledge of one vertex.
struct View {
  VertexId self = -1;
  int depth = 0;
  int parent_port = -1;
  EdgeId parent_edge = -1;
  std::vector<EdgeId> ports;
  std::vector<VertexId> peer;
  std::vector<int> peer_depth;
  std::vector<Role> role;

  int port(EdgeId e) const {
    for (std::size_t p = 0; p < ports.size(); ++p) {
      if (ports[p] == e) return static_cast<int>(p);
    }
    throw InvariantViolation("message on a non-incident edge");
  }
  bool owns(int p) const { return self < peer[p]; }
};

std::vector<View> views(const Graph& g, const RootedTree& t, const EdgeMask& in_host) {
  std::vector<View> out(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    View& w = out[v];
    w.self = v;
    w.depth = t.depth[v];
    w.parent_edge = t.parent_edge[v];
    for (EdgeId e : g.incident(v)) {
      const VertexId x = g.edge(e).other(v);
      Role r = Role::Other;
      if (e == t.parent_edge[v]) {
        r = Role::Parent;
        w.parent_port = static_cast<int>(w.ports.size());
      } else if (e == t.parent_edge[x]) {
        r = Role::Child;
      } else if (in_host[e]) {
        r = Role::HostLink;
      }
      w.ports.push_back(e);
      w.peer.push_back(x);
      w.peer_depth.push_back(t.depth[x]);
      w.role.push_back(r);
    }
  }
  return out;
}

int budget_of(const Graph& g, const congest::RunOptions& options) {
  return options.message_bits > 0 ? options.message_bits : congest::message_budget(g.num_vertices());
}

// Leaf-to-root XOR scan.
struct LabelProgram {
  const View* me = nullptr;
  int bits = 0;
  int budget = 0;
  std::uint64_t seed = 0;
  const Graph* g = nullptr;

  Outbox out;
  std::vector<Inbound> in;
  int waiting = 0;
  std::uint64_t acc = 0;
  bool sent = false;
  std::vector<std::uint64_t> port_label;

  void step(Context& ctx) {
    const int deg = static_cast<int>(me->ports.size());
    if (ctx.round() == 0) {
      out.resize(deg);
      in.resize(deg);
      port_label.assign(deg, 0);
      for (int p = 0; p < deg; ++p) {
        if (me->role[p] == Role::Child) ++waiting;
        if (me->role[p] != Role::HostLink) continue;
        if (me->owns(p)) {
          port_label[p] = link_label(seed, *g, me->ports[p], bits);
          acc ^= port_label[p];
          out.push(p, Message().put(port_label[p], bits), budget);
        } else {
          ++waiting;
        }
      }
    }
    for (const auto& d : ctx.inbox()) {
      const int p = me->port(d.edge);
      in[p].feed(d.message);
      Message rec;
      while (in[p].pop(bits, rec)) {
        port_label[p] = rec.get(0, bits);
        acc ^= port_label[p];
        --waiting;
      }
    }
    if (!sent && waiting == 0) {
      sent = true;
      if (me->parent_port >= 0) {
        port_label[me->parent_port] = acc;
        out.push(me->parent_port, Message().put(acc, bits), budget);
      }
    }
    out.flush(ctx, me->ports);
    if (sent && out.empty()) ctx.halt();
  }
};

struct PathRecord {
  VertexId id;  // child endpoint of the tree edge
  std::uint64_t label;
  int size = 0;
};

// Root paths down and across host links, then a max-merging upcast of the
// per-cycle counts, topmost edge first.
struct CensusProgram {
  const View* me = nullptr;
  const LabelAssignment* la = nullptr;
  int idb = 0;
  int budget = 0;

  Outbox out;
  std::vector<Inbound> in;
  std::vector<PathRecord> path;                 // nearest first
  std::vector<std::vector<PathRecord>> across;  // per host-link port
  std::vector<std::vector<int>> from_child;     // per child port, by level from the top
  std::vector<int> local;                       // by level, 1..depth
  bool ready = false;
  int next_level = 1;
  int class_size = 0;
  bool own_done = false;

  int path_width() const { return idb + la->bits; }

  void forward(const PathRecord& r) {
    Message m;
    m.put(static_cast<std::uint64_t>(r.id), idb).put(r.label, la->bits);
    for (std::size_t p = 0; p < me->ports.size(); ++p) {
      if (me->role[p] == Role::Child || me->role[p] == Role::HostLink) out.push(static_cast<int>(p), m, budget);
    }
  }

  void compute_local() {
    local.assign(me->depth + 1, 0);
    for (std::size_t p = 0; p < me->ports.size(); ++p) {
      if (me->role[p] != Role::HostLink) continue;
      const auto& theirs = across[p];
      std::size_t a = path.size(), b = theirs.size();
      while (a > 0 && b > 0 && path[a - 1].id == theirs[b - 1].id) {
        --a;
        --b;
      }
      std::vector<std::uint64_t> cycle;
      for (std::size_t j = 0; j < a; ++j) cycle.push_back(path[j].label);
      for (std::size_t j = 0; j < b; ++j) cycle.push_back(theirs[j].label);
      cycle.push_back(la->label[me->ports[p]]);
      std::sort(cycle.begin(), cycle.end());
      for (std::size_t j = 0; j < a; ++j) {
        auto [lo, hi] = std::equal_range(cycle.begin(), cycle.end(), path[j].label);
        const int level = me->depth - static_cast<int>(j);
        local[level] = std::max(local[level], static_cast<int>(hi - lo));
      }
    }
  }

  void step(Context& ctx) {
    const int deg = static_cast<int>(me->ports.size());
    if (ctx.round() == 0) {
      out.resize(deg);
      in.resize(deg);
      across.resize(deg);
      from_child.resize(deg);
      if (me->parent_port >= 0) {
        path.push_back({me->self, la->label[me->parent_edge]});
        forward(path.back());
      }
    }
    for (const auto& d : ctx.inbox()) {
      const int p = me->port(d.edge);
      in[p].feed(d.message);
      Message rec;
      switch (me->role[p]) {
        case Role::Parent:
          while (in[p].pop(path_width(), rec)) {
            path.push_back({static_cast<VertexId>(rec.get(0, idb)), rec.get(idb, la->bits)});
            forward(path.back());
          }
          break;
        case Role::HostLink:
          while (in[p].pop(path_width(), rec)) {
            across[p].push_back({static_cast<VertexId>(rec.get(0, idb)), rec.get(idb, la->bits)});
          }
          break;
        case Role::Child:
          while (in[p].pop(idb, rec)) from_child[p].push_back(static_cast<int>(rec.get(0, idb)));
          break;
        case Role::Other:
          break;
      }
    }
    if (!ready && static_cast<int>(path.size()) == me->depth) {
      bool complete = true;
      for (int p = 0; p < deg && me->depth > 0; ++p) {
        if (me->role[p] == Role::HostLink && static_cast<int>(across[p].size()) < me->peer_depth[p]) complete = false;
      }
      if (complete) {
        compute_local();
        ready = true;
      }
    }
    if (ready && me->depth > 0) {
      auto merged = [&](int level) {
        int v = local[level];
        for (int p = 0; p < deg; ++p) {
          if (me->role[p] != Role::Child) continue;
          if (static_cast<int>(from_child[p].size()) < level) return -1;
          v = std::max(v, from_child[p][level - 1]);
        }
        return v;
      };
      while (next_level <= me->depth - 1) {
        const int v = merged(next_level);
        if (v < 0) break;
        out.push(me->parent_port, Message().put(static_cast<std::uint64_t>(v), idb), budget);
        ++next_level;
      }
      if (!own_done) {
        const int v = merged(me->depth);
        if (v >= 0) {
          class_size = v;
          own_done = true;
        }
      }
    }
    out.flush(ctx, me->ports);
    const bool finished = ready && (me->depth == 0 || (own_done && next_level > me->depth - 1));
    if (finished && out.empty()) ctx.halt();
  }
};

// Candidates collect labels and class sizes of their paths, then a
// convergecast and broadcast of (max exponent, any class > 1).
struct CandidateProgram {
  const View* me = nullptr;
  const LabelAssignment* la = nullptr;
  const DecisionRule* rule = nullptr;
  std::uint64_t coin_seed = 0;
  int idb = 0;
  int budget = 0;
  std::vector<VertexId> path_ids;          // known from the census phase, nearest first
  std::vector<std::uint64_t> path_labels;  // same
  int own_size = 0;

  Outbox out;
  std::vector<Inbound> in;
  std::vector<int> sizes;                       // nearest first
  std::vector<std::vector<PathRecord>> across;  // per owned non-host port
  std::vector<int> reports;                     // per child port: -2 pending, else max exponent
  std::vector<bool> report_flag;
  bool computed = false;
  int local_max = -1;
  bool local_flag = false;
  bool reported = false;
  int decided_round = -1;
  int global_max = -1;
  bool verified = false;
  CandidateDecision decision;
  std::vector<std::pair<EdgeId, std::uint64_t>> counts;
  std::vector<std::pair<EdgeId, int>> exponents;
  EdgeSet activated;

  static constexpr int kReportBits = 8;

  int full_width() const { return 2 * idb + la->bits; }

  void forward(std::size_t j) {
    const Message small = Message().put(static_cast<std::uint64_t>(sizes[j]), idb);
    Message full;
    full.put(static_cast<std::uint64_t>(path_ids[j]), idb)
        .put(path_labels[j], la->bits)
        .put(static_cast<std::uint64_t>(sizes[j]), idb);
    for (std::size_t p = 0; p < me->ports.size(); ++p) {
      if (me->role[p] == Role::Child) out.push(static_cast<int>(p), small, budget);
      if (me->role[p] == Role::Other && !me->owns(static_cast<int>(p))) out.push(static_cast<int>(p), full, budget);
    }
  }

  void compute() {
    for (std::size_t p = 0; p < me->ports.size(); ++p) {
      if (me->role[p] != Role::Other || !me->owns(static_cast<int>(p))) continue;
      const auto& theirs = across[p];
      std::size_t a = path_ids.size(), b = theirs.size();
      while (a > 0 && b > 0 && path_ids[a - 1] == theirs[b - 1].id) {
        --a;
        --b;
      }
      std::vector<std::pair<std::uint64_t, int>> labels;
      for (std::size_t j = 0; j < a; ++j) labels.emplace_back(path_labels[j], sizes[j]);
      for (std::size_t j = 0; j < b; ++j) labels.emplace_back(theirs[j].label, theirs[j].size);
      std::sort(labels.begin(), labels.end());
      const std::uint64_t c = pair_count(labels);
      counts.emplace_back(me->ports[p], c);
      exponents.emplace_back(me->ports[p], count_exponent(c));
      local_max = std::max(local_max, count_exponent(c));
    }
    local_flag = me->depth > 0 && own_size > 1;
  }

  void decide(Context& ctx, int max_exponent, bool flag) {
    global_max = max_exponent;
    verified = !flag;
    decision = (*rule)(max_exponent, verified);
    decided_round = ctx.round();
    const Message m = Message().put(static_cast<std::uint64_t>(max_exponent + 1), kReportBits - 1).put(flag, 1);
    for (std::size_t p = 0; p < me->ports.size(); ++p) {
      if (me->role[p] == Role::Child) out.push(static_cast<int>(p), m, budget);
    }
    if (decision.stop) return;
    for (const auto& [e, z] : exponents) {
      if (z < 0 || z < decision.min_exponent) continue;
      if (!candidate_coin(coin_seed, e, decision.probability_exponent)) continue;
      activated.push_back(e);
      out.push(me->port(e), Message().put(1, 1), budget);
    }
  }

  void step(Context& ctx) {
    const int deg = static_cast<int>(me->ports.size());
    if (ctx.round() == 0) {
      out.resize(deg);
      in.resize(deg);
      across.resize(deg);
      reports.assign(deg, -2);
      report_flag.assign(deg, false);
      if (me->depth > 0) {
        sizes.push_back(own_size);
        forward(0);
      }
    }
    for (const auto& d : ctx.inbox()) {
      const int p = me->port(d.edge);
      in[p].feed(d.message);
      Message rec;
      switch (me->role[p]) {
        case Role::Parent:
          if (static_cast<int>(sizes.size()) < me->depth) {
            while (static_cast<int>(sizes.size()) < me->depth && in[p].pop(idb, rec)) {
              sizes.push_back(static_cast<int>(rec.get(0, idb)));
              forward(sizes.size() - 1);
            }
          }
          if (static_cast<int>(sizes.size()) == me->depth && decided_round < 0 && in[p].pop(kReportBits, rec)) {
            decide(ctx, static_cast<int>(rec.get(0, kReportBits - 1)) - 1, rec.get(kReportBits - 1, 1) != 0);
          }
          break;
        case Role::Other:
          if (me->owns(p)) {
            while (in[p].pop(full_width(), rec)) {
              across[p].push_back({static_cast<VertexId>(rec.get(0, idb)), rec.get(idb, la->bits),
                                   static_cast<int>(rec.get(idb + la->bits, idb))});
            }
          } else {
            while (in[p].pop(1, rec)) activated.push_back(me->ports[p]);
          }
          break;
        case Role::Child:
          if (in[p].pop(kReportBits, rec)) {
            reports[p] = static_cast<int>(rec.get(0, kReportBits - 1)) - 1;
            report_flag[p] = rec.get(kReportBits - 1, 1) != 0;
          }
          break;
        case Role::HostLink:
          break;
      }
    }
    if (!computed && static_cast<int>(sizes.size()) == me->depth) {
      bool complete = true;
      for (int p = 0; p < deg; ++p) {
        if (me->role[p] == Role::Other && me->owns(p) && static_cast<int>(across[p].size()) < me->peer_depth[p]) {
          complete = false;
        }
      }
      if (complete) {
        compute();
        computed = true;
      }
    }
    if (computed && !reported) {
      bool all = true;
      int best = local_max;
      bool flag = local_flag;
      for (int p = 0; p < deg; ++p) {
        if (me->role[p] != Role::Child) continue;
        if (reports[p] == -2) {
          all = false;
          break;
        }
        best = std::max(best, reports[p]);
        flag = flag || report_flag[p];
      }
      if (all) {
        reported = true;
        if (me->parent_port >= 0) {
          out.push(me->parent_port,
                   Message().put(static_cast<std::uint64_t>(best + 1), kReportBits - 1).put(flag, 1), budget);
        } else {
          decide(ctx, best, flag);
        }
      }
    }
    out.flush(ctx, me->ports);
    if (decided_round >= 0 && ctx.round() >= decided_round + 2 && out.empty()) ctx.halt();
  }
};

// Record fields carry vertex ids and class sizes, both at most n - 1.
int field_bits(int n) { return std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(n - 1)))); }

}  // namespace

LabelRun sample_circulation(const Graph& g, const RootedTree& t, const EdgeSet& host, int bits,
                            std::uint64_t seed, const congest::RunOptions& options) {
  check_bits(bits);
  LabelRun run;
  run.labels.bits = bits;
  run.labels.host = normalized(host);
  run.labels.in_host = make_mask(g.num_edges(), run.labels.host);
  check_host(g, t, run.labels.in_host);
  const auto vs = views(g, t, run.labels.in_host);
  std::vector<LabelProgram> programs(g.num_vertices());
  const int budget = budget_of(g, options);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    programs[v].me = &vs[v];
    programs[v].bits = bits;
    programs[v].budget = budget;
    programs[v].seed = seed;
    programs[v].g = &g;
  }
  run.stats = congest::run_until_halt(g, programs, options);
  run.labels.label.assign(g.num_edges(), 0);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    for (std::size_t p = 0; p < vs[v].ports.size(); ++p) {
      const Role r = vs[v].role[p];
      if (r == Role::Parent || r == Role::HostLink) run.labels.label[vs[v].ports[p]] = programs[v].port_label[p];
    }
  }
  return run;
}

CensusRun census_build(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                       const congest::RunOptions& options) {
  check_host(g, t, la.in_host);
  const auto vs = views(g, t, la.in_host);
  std::vector<CensusProgram> programs(g.num_vertices());
  const int budget = budget_of(g, options);
  const int idb = field_bits(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    programs[v].me = &vs[v];
    programs[v].la = &la;
    programs[v].idb = idb;
    programs[v].budget = budget;
  }
  CensusRun run;
  run.stats = congest::run_until_halt(g, programs, options);
  run.census.class_size.assign(g.num_edges(), 0);
  for (EdgeId e : la.host) ++run.census.histogram[la.label[e]];
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    if (v == t.root) continue;
    if (programs[v].class_size == 0) {
      throw PreconditionError("host is not 2-edge-connected: tree edge " + std::to_string(t.parent_edge[v]) +
                              " has no covering host edge");
    }
    run.census.class_size[t.parent_edge[v]] = programs[v].class_size;
  }
  return run;
}

CandidateRun evaluate_candidates(const Graph& g, const RootedTree& t, const LabelAssignment& la,
                                 const LabelCensus& census, const DecisionRule& rule, std::uint64_t coin_seed,
                                 const congest::RunOptions& options) {
  check_host(g, t, la.in_host);
  const auto vs = views(g, t, la.in_host);
  std::vector<CandidateProgram> programs(g.num_vertices());
  const int budget = budget_of(g, options);
  const int idb = field_bits(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    auto& pr = programs[v];
    pr.me = &vs[v];
    pr.la = &la;
    pr.rule = &rule;
    pr.coin_seed = coin_seed;
    pr.idb = idb;
    pr.budget = budget;
    // The root path as learned during the census.
    for (VertexId x = v; x != t.root; x = t.parent[x]) {
      pr.path_ids.push_back(x);
      pr.path_labels.push_back(la.label[t.parent_edge[x]]);
    }
    if (v != t.root) pr.own_size = census.class_size[t.parent_edge[v]];
  }
  CandidateRun run;
  run.stats = congest::run_until_halt(g, programs, options);
  run.counts.assign(g.num_edges(), 0);
  const auto& root = programs[t.root];
  run.max_exponent = root.global_max;
  run.verified = root.verified;
  run.decision = root.decision;
  std::vector<bool> seen(g.num_edges(), false);
  for (VertexId v = 0; v < g.num_vertices(); ++v) {
    const auto& pr = programs[v];
    if (pr.global_max != run.max_exponent || pr.verified != run.verified) {
      throw InvariantViolation("vertices disagree on the broadcast result");
    }
    for (const auto& [e, c] : pr.counts) run.counts[e] = c;
    for (EdgeId e : pr.activated) {
      if (!seen[e]) run.activated.push_back(e);
      seen[e] = true;
    }
  }
  run.activated = normalized(run.activated);
  return run;
}

}  // namespace kecss
