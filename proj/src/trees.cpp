#include "kecss/trees.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "kecss/connectivity.hpp"
#include "kecss/errors.hpp"

namespace kecss {

int ceil_sqrt(long long n) {
  if (n <= 0) return 0;
  long long r = static_cast<long long>(std::sqrt(static_cast<double>(n)));
  while (r * r < n) ++r;
  while (r > 0 && (r - 1) * (r - 1) >= n) --r;
  return static_cast<int>(r);
}

int ceil_log2(long long n) {
  int k = 0;
  while ((1LL << k) < n) ++k;
  return k;
}

int log_star(long long n) {
  int k = 0;
  double x = static_cast<double>(n);
  while (x > 1.0) {
    x = std::log2(x);
    ++k;
  }
  return k;
}

namespace {

using congest::Context;
using congest::Message;

class BfsProgram {
 public:
  enum : std::uint64_t { kExplore = 0, kChild = 1, kDone = 2 };

  BfsProgram(VertexId self, bool is_root, int depth_bits)
      : self_(self), is_root_(is_root), depth_bits_(depth_bits) {}

  void step(Context& ctx) {
    const Graph& g = ctx.graph();
    const int degree = g.degree(self_);
    bool discovered_now = false;
    if (ctx.round() == 0 && is_root_) {
      depth_ = 0;
      parent_ = self_;
      for (EdgeId e : g.incident(self_)) ctx.send(e, explore());
      discovered_now = true;
    }
    VertexId best_from = -1;
    EdgeId best_edge = -1;
    int best_depth = 0;
    for (const auto& d : ctx.inbox()) {
      const auto type = d.message.get(0, 2);
      if (type == kExplore) {
        ++heard_;
        if (depth_ == -1 && (best_from == -1 || d.from < best_from)) {
          best_from = d.from;
          best_edge = d.edge;
          best_depth = static_cast<int>(d.message.get(2, depth_bits_));
        }
      } else if (type == kChild) {
        ++heard_;
        children_.push_back(d.from);
        child_edges_.push_back(d.edge);
      } else {
        ++done_children_;
      }
    }
    if (depth_ == -1 && best_from != -1) {
      depth_ = best_depth + 1;
      parent_ = best_from;
      parent_edge_ = best_edge;
      Message child;
      child.put(kChild, 2);
      ctx.send(parent_edge_, child);
      for (EdgeId e : g.incident(self_)) {
        if (e != parent_edge_) ctx.send(e, explore());
      }
      discovered_now = true;
    }
    if (depth_ == -1 || discovered_now) {
      if (is_root_ && degree == 0) ctx.halt();
      return;
    }
    if (heard_ == degree && done_children_ == static_cast<int>(children_.size())) {
      if (!is_root_) {
        Message done;
        done.put(kDone, 2);
        ctx.send(parent_edge_, done);
      }
      ctx.halt();
    }
  }

  int depth() const { return depth_; }
  VertexId parent() const { return parent_; }
  EdgeId parent_edge() const { return parent_edge_; }

 private:
  Message explore() const {
    Message m;
    m.put(kExplore, 2).put(static_cast<std::uint64_t>(depth_), depth_bits_);
    return m;
  }

  VertexId self_;
  bool is_root_;
  int depth_bits_;
  int depth_ = -1;
  VertexId parent_ = -1;
  EdgeId parent_edge_ = -1;
  int heard_ = 0;
  int done_children_ = 0;
  std::vector<VertexId> children_;
  std::vector<EdgeId> child_edges_;
};

}  // namespace

BfsResult build_bfs(const Graph& g, VertexId root, const congest::RunOptions& options) {
  const int n = g.num_vertices();
  if (root < 0 || root >= n) throw PreconditionError("BFS root out of range");
  congest::RunOptions opts = options;
  if (opts.max_rounds == congest::RunOptions{}.max_rounds) opts.max_rounds = 2 * n + 4;
  std::vector<BfsProgram> programs;
  programs.reserve(n);
  const int bits = congest::id_bits(static_cast<std::uint64_t>(n));
  for (VertexId v = 0; v < n; ++v) programs.emplace_back(v, v == root, bits);
  auto stats = congest::run_until_halt(g, programs, opts);
  EdgeSet edges;
  for (VertexId v = 0; v < n; ++v) {
    if (v != root) edges.push_back(programs[v].parent_edge());
  }
  BfsResult result{make_rooted_tree(g, edges, root), stats.rounds};
  for (VertexId v = 0; v < n; ++v) {
    if (result.tree.depth[v] != programs[v].depth()) {
      throw InvariantViolation("BFS depth mismatch at vertex " + std::to_string(v));
    }
  }
  return result;
}

namespace {

FragmentSet assign_fragments(const RootedTree& t, const std::vector<bool>& is_root) {
  FragmentSet f;
  f.fragment_of.assign(t.num_vertices(), -1);
  for (VertexId v : t.order) {
    if (v == t.root || is_root[v]) {
      f.fragment_of[v] = f.count();
      f.roots.push_back(v);
      if (v != t.root) f.global_edges.push_back(t.parent_edge[v]);
    } else {
      f.fragment_of[v] = f.fragment_of[t.parent[v]];
    }
  }
  f.global_edges = normalized(std::move(f.global_edges));
  return f;
}

}  // namespace

FragmentSet build_fragments(const RootedTree& t, int height) {
  if (height < 1) throw PreconditionError("fragment height must be positive");
  const int n = t.num_vertices();
  std::vector<int> h(n, 0);
  std::vector<bool> is_root(n, false);
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    const VertexId v = *it;
    int best = 0;
    for (VertexId c : t.children[v]) {
      if (!is_root[c]) best = std::max(best, h[c] + 1);
    }
    h[v] = best;
    if (v != t.root && h[v] >= height) is_root[v] = true;
  }
  return assign_fragments(t, is_root);
}

FragmentSet build_fragments(const RootedTree& t) {
  return build_fragments(t, 2 * ceil_sqrt(t.num_vertices()));
}

FragmentSet fragments_from_roots(const RootedTree& t, std::vector<VertexId> roots) {
  std::vector<bool> is_root(t.num_vertices(), false);
  for (VertexId r : roots) is_root[r] = true;
  return assign_fragments(t, is_root);
}

int fragment_diameter(const RootedTree& t, const FragmentSet& f, int fragment) {
  // Height-based diameter over the fragment's subtree.
  const int n = t.num_vertices();
  std::vector<int> down(n, 0);
  int best = 0;
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    const VertexId v = *it;
    if (f.fragment_of[v] != fragment) continue;
    int first = 0, second = 0;
    for (VertexId c : t.children[v]) {
      if (f.fragment_of[c] != fragment) continue;
      const int len = down[c] + 1;
      if (len > first) {
        second = first;
        first = len;
      } else if (len > second) {
        second = len;
      }
    }
    down[v] = first;
    best = std::max(best, first + second);
  }
  return best;
}

MstResult build_mst(const Graph& g, VertexId root, congest::RoundLedger* ledger, int diameter) {
  const int n = g.num_vertices();
  std::vector<int> comp(n);
  std::iota(comp.begin(), comp.end(), 0);
  auto find = [&](int x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  auto better = [&](EdgeId a, EdgeId b) {
    if (b == -1) return true;
    const Weight wa = g.edge(a).weight, wb = g.edge(b).weight;
    return wa != wb ? wa < wb : a < b;
  };
  EdgeSet chosen;
  int components = n;
  int phases = 0;
  while (components > 1) {
    std::vector<EdgeId> best(n, -1);
    for (const Edge& e : g.edges()) {
      const int a = find(e.u), b = find(e.v);
      if (a == b) continue;
      if (better(e.id, best[a])) best[a] = e.id;
      if (better(e.id, best[b])) best[b] = e.id;
    }
    bool merged = false;
    for (int c = 0; c < n; ++c) {
      if (best[c] == -1) continue;
      const Edge& e = g.edge(best[c]);
      const int a = find(e.u), b = find(e.v);
      if (a == b) continue;
      comp[a] = b;
      chosen.push_back(e.id);
      --components;
      merged = true;
    }
    if (!merged) throw PreconditionError("build_mst: graph is disconnected");
    ++phases;
  }
  MstResult result;
  result.tree = make_rooted_tree(g, chosen, root);
  result.fragments = build_fragments(result.tree);
  result.phases = phases;
  if (ledger) {
    const int d = diameter >= 0 ? diameter : kecss::diameter(g);
    ledger->charge("mst", d + static_cast<long long>(ceil_sqrt(n)) * std::max(1, log_star(n)));
  }
  return result;
}

bool SegmentDecomposition::is_member(int segment, VertexId v) const {
  const auto& m = segments[segment].members;
  return std::binary_search(m.begin(), m.end(), v);
}

std::vector<VertexId> SegmentDecomposition::marked_vertices() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < static_cast<VertexId>(marked.size()); ++v) {
    if (marked[v]) out.push_back(v);
  }
  return out;
}

std::string SegmentDecomposition::dump() const {
  std::ostringstream out;
  for (const auto& s : segments) {
    out << s.top << ' ' << s.bottom;
    for (EdgeId e : s.highway) out << ' ' << e;
    out << " |";
    for (VertexId v : s.members) out << ' ' << v;
    out << '\n';
  }
  return out.str();
}

SegmentDecomposition decompose_segments(const RootedTree& t, const FragmentSet& f) {
  const int n = t.num_vertices();
  SegmentDecomposition seg;
  seg.marked.assign(n, false);
  seg.marked[t.root] = true;
  for (EdgeId e : f.global_edges) {
    const VertexId c = t.child_of_edge[e];
    seg.marked[c] = true;
    seg.marked[t.parent[c]] = true;
  }
  // Leaf-to-root scan inside each fragment: a vertex hearing two or more ids
  // from its children is the LCA of marked vertices and marks itself.
  std::vector<VertexId> carry(n, -1);
  for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
    const VertexId v = *it;
    int heard = 0;
    VertexId last = -1;
    for (VertexId c : t.children[v]) {
      if (f.fragment_of[c] != f.fragment_of[v] || carry[c] == -1) continue;
      ++heard;
      last = carry[c];
    }
    if (heard >= 2) seg.marked[v] = true;
    carry[v] = seg.marked[v] ? v : last;
  }

  seg.segment_of_vertex.assign(n, -1);
  seg.segment_of_edge.assign(t.child_of_edge.size(), -1);
  seg.skeleton_root = t.root;
  seg.skeleton_parent.assign(n, -1);
  seg.skeleton_depth.assign(n, -1);
  seg.segment_below.assign(n, -1);

  std::vector<bool> covered(n, false);  // vertex's parent edge is assigned
  auto add_subtree = [&](Segment& s, int id, VertexId start) {
    std::vector<VertexId> stack{start};
    while (!stack.empty()) {
      VertexId x = stack.back();
      stack.pop_back();
      s.members.push_back(x);
      seg.segment_of_vertex[x] = id;
      covered[x] = true;
      for (VertexId c : t.children[x]) stack.push_back(c);
    }
  };

  for (VertexId d = 0; d < n; ++d) {
    if (!seg.marked[d] || d == t.root) continue;
    const int id = seg.count();
    Segment s;
    s.bottom = d;
    VertexId x = d;
    std::vector<VertexId> internal;
    while (true) {
      s.highway.push_back(t.parent_edge[x]);
      x = t.parent[x];
      if (seg.marked[x]) break;
      internal.push_back(x);
    }
    s.top = x;
    s.members = {s.top, s.bottom};
    seg.segment_of_vertex[d] = id;
    covered[d] = true;
    VertexId below = d;
    for (VertexId h : internal) {
      s.members.push_back(h);
      seg.segment_of_vertex[h] = id;
      covered[h] = true;
      for (VertexId c : t.children[h]) {
        if (c != below) add_subtree(s, id, c);
      }
      below = h;
    }
    seg.segment_below[d] = id;
    seg.skeleton_parent[d] = s.top;
    seg.segments.push_back(std::move(s));
  }

  // Children of marked vertices not yet placed hang off their parent with no
  // marked vertex below them.
  for (VertexId v = 0; v < n; ++v) {
    if (!seg.marked[v]) continue;
    std::vector<VertexId> dangling;
    for (VertexId c : t.children[v]) {
      if (!covered[c]) dangling.push_back(c);
    }
    if (dangling.empty()) continue;
    int target = -1;
    for (int i = 0; i < seg.count(); ++i) {
      if (seg.segments[i].top == v && seg.segments[i].has_highway()) {
        target = i;
        break;
      }
    }
    if (target == -1) {
      target = seg.count();
      Segment s;
      s.top = s.bottom = v;
      s.members = {v};
      seg.segments.push_back(std::move(s));
    }
    for (VertexId c : dangling) add_subtree(seg.segments[target], target, c);
  }

  for (int i = 0; i < seg.count(); ++i) {
    auto& m = seg.segments[i].members;
    std::sort(m.begin(), m.end());
    m.erase(std::unique(m.begin(), m.end()), m.end());
  }
  for (VertexId v = 0; v < n; ++v) {
    if (v == t.root) continue;
    if (seg.segment_of_vertex[v] == -1) throw InvariantViolation("vertex left outside every segment");
    seg.segment_of_edge[t.parent_edge[v]] = seg.segment_of_vertex[v];
  }
  for (VertexId v : t.order) {
    if (!seg.marked[v]) continue;
    seg.skeleton_depth[v] = v == t.root ? 0 : seg.skeleton_depth[seg.skeleton_parent[v]] + 1;
  }
  return seg;
}

std::vector<std::string> check_fragments(const RootedTree& t, const FragmentSet& f) {
  std::vector<std::string> errors;
  const int n = t.num_vertices();
  const int cap = 4 * ceil_sqrt(n);
  if (f.count() > cap) errors.push_back("fragment count " + std::to_string(f.count()) + " > " + std::to_string(cap));
  if (static_cast<int>(f.global_edges.size()) != f.count() - 1) errors.push_back("global edge count != fragments - 1");
  for (int i = 0; i < f.count(); ++i) {
    const int d = fragment_diameter(t, f, i);
    if (d > cap) errors.push_back("fragment " + std::to_string(i) + " diameter " + std::to_string(d));
  }
  for (VertexId v = 0; v < n; ++v) {
    if (v == t.root) continue;
    const bool crosses = f.fragment_of[v] != f.fragment_of[t.parent[v]];
    const bool global = std::binary_search(f.global_edges.begin(), f.global_edges.end(), t.parent_edge[v]);
    if (crosses != global) errors.push_back("global edge bookkeeping wrong at vertex " + std::to_string(v));
  }
  return errors;
}

std::vector<std::string> check_segments(const RootedTree& t, const FragmentSet& f,
                                        const SegmentDecomposition& seg) {
  std::vector<std::string> errors;
  const int n = t.num_vertices();
  const int cap = 4 * ceil_sqrt(n);
  auto marked = seg.marked_vertices();
  if (!seg.marked[t.root]) errors.push_back("root not marked");
  for (EdgeId e : f.global_edges) {
    const VertexId c = t.child_of_edge[e];
    if (!seg.marked[c] || !seg.marked[t.parent[c]]) errors.push_back("global edge endpoint unmarked");
  }
  if (static_cast<int>(marked.size()) > 4 * static_cast<int>(f.global_edges.size()) + 1) {
    errors.push_back("too many marked vertices: " + std::to_string(marked.size()));
  }
  for (std::size_t i = 0; i < marked.size(); ++i) {
    for (std::size_t j = i + 1; j < marked.size(); ++j) {
      if (!seg.marked[t.lca(marked[i], marked[j])]) {
        errors.push_back("LCA of " + std::to_string(marked[i]) + "," + std::to_string(marked[j]) + " unmarked");
      }
    }
  }
  if (seg.count() > cap) errors.push_back("segment count " + std::to_string(seg.count()) + " > " + std::to_string(cap));

  std::vector<int> owner(t.child_of_edge.size(), -1);
  for (int i = 0; i < seg.count(); ++i) {
    const auto& s = seg.segments[i];
    for (VertexId v : s.members) {
      if (v == s.top) continue;
      const EdgeId e = t.parent_edge[v];
      if (owner[e] != -1) errors.push_back("tree edge " + std::to_string(e) + " in two segments");
      owner[e] = i;
    }
    // Highway is the tree path from bottom to its nearest marked ancestor.
    if (s.has_highway()) {
      VertexId x = s.bottom;
      for (EdgeId e : s.highway) {
        if (t.parent_edge[x] != e) errors.push_back("highway is not a tree path");
        x = t.parent[x];
        if (x != s.top && seg.marked[x]) errors.push_back("highway passes a marked vertex");
      }
      if (x != s.top) errors.push_back("highway does not end at its top");
      if (seg.segment_below[s.bottom] != i) errors.push_back("skeleton edge mismatch");
    }
    // Tree neighbors of interior members stay inside the segment.
    for (VertexId v : s.members) {
      if (v == s.top || v == s.bottom) continue;
      auto inside = [&](VertexId x) { return std::binary_search(s.members.begin(), s.members.end(), x); };
      if (!inside(t.parent[v])) errors.push_back("interior vertex with outside parent");
      for (VertexId c : t.children[v]) {
        if (!inside(c)) errors.push_back("interior vertex " + std::to_string(v) + " with outside child");
      }
    }
    // Diameter over the segment's own edges.
    int diam = 0;
    {
      std::vector<int> down(n, 0);
      for (auto it = t.order.rbegin(); it != t.order.rend(); ++it) {
        const VertexId v = *it;
        if (!std::binary_search(s.members.begin(), s.members.end(), v)) continue;
        int first = 0, second = 0;
        for (VertexId c : t.children[v]) {
          if (!std::binary_search(s.members.begin(), s.members.end(), c)) continue;
          if (t.parent[c] != v) continue;
          const int len = down[c] + 1;
          if (len > first) {
            second = first;
            first = len;
          } else if (len > second) {
            second = len;
          }
        }
        down[v] = first;
        diam = std::max(diam, first + second);
      }
    }
    if (diam > cap) errors.push_back("segment diameter " + std::to_string(diam) + " > " + std::to_string(cap));
  }
  for (EdgeId e : t.tree_edges) {
    if (owner[e] == -1) errors.push_back("tree edge " + std::to_string(e) + " in no segment");
  }
  int highways = 0;
  for (const auto& s : seg.segments) highways += s.has_highway();
  if (highways != static_cast<int>(marked.size()) - 1) errors.push_back("skeleton edges != non-empty highways");
  return errors;
}

Dissemination disseminate(const RootedTree& t, const SegmentDecomposition& seg,
                          std::span<const std::uint64_t> edge_items, int edge_item_bits,
                          std::span<const std::uint64_t> segment_items, int segment_item_bits,
                          int budget, congest::RoundLedger* ledger, int diameter) {
  if (edge_item_bits > budget) throw congest::BudgetExceeded(-1, -1, 0, edge_item_bits, budget);
  if (segment_item_bits > budget) throw congest::BudgetExceeded(-1, -1, 0, segment_item_bits, budget);
  const int n = t.num_vertices();
  Dissemination out;
  out.vertices.resize(n);
  out.segment_items.assign(segment_items.begin(), segment_items.end());
  auto item = [&](EdgeId e) { return KnownItem{e, edge_items[e]}; };
  for (VertexId v = 0; v < n; ++v) {
    auto& k = out.vertices[v];
    k.segment = seg.segment_of_vertex[v];
    if (k.segment != -1) {
      const auto& s = seg.segments[k.segment];
      for (EdgeId e : t.path_up(v, s.top)) k.to_top.push_back(item(e));
      for (EdgeId e : t.path(v, s.bottom)) k.to_bottom.push_back(item(e));
    }
    for (int i = 0; i < seg.count(); ++i) {
      if (!seg.is_member(i, v)) continue;
      std::vector<KnownItem> hw;
      for (EdgeId e : seg.segments[i].highway) hw.push_back(item(e));
      k.highways.emplace_back(i, std::move(hw));
    }
  }
  if (ledger) ledger->charge("segment-dissemination", diameter + ceil_sqrt(n));
  return out;
}

}  // namespace kecss
