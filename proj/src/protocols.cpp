#include "kecss/protocols.hpp"

#include <algorithm>

namespace kecss::congest {

namespace {

class BroadcastProgram {
 public:
  BroadcastProgram(const RootedTree& t, VertexId self, const std::vector<Message>* items)
      : self_(self), is_root_(self == t.root), root_items_(items) {
    parent_edge_ = t.parent_edge[self];
    for (VertexId c : t.children[self]) child_edges_.push_back(t.parent_edge[c]);
    outbox_.resize(static_cast<int>(child_edges_.size()));
  }

  void step(Context& ctx) {
    if (ctx.round() == 0 && is_root_) {
      expected_ = static_cast<int>(root_items_->size());
      forward(count_record(ctx), ctx);
      for (const auto& item : *root_items_) {
        held_.push_back(item);
        forward(item, ctx);
      }
    }
    for (const auto& d : ctx.inbox()) {
      if (d.edge == parent_edge_) {
        if (expected_ == -1) {
          expected_ = static_cast<int>(d.message.get(0, d.message.size()));
          forward(d.message, ctx);
        } else {
          held_.push_back(d.message);
          forward(d.message, ctx);
        }
      } else {
        ++acks_;
      }
    }
    outbox_.flush(ctx, child_edges_);
    const bool complete = expected_ != -1 && static_cast<int>(held_.size()) == expected_;
    if (complete && outbox_.empty() && acks_ == static_cast<int>(child_edges_.size())) {
      if (!is_root_) {
        Message ack;
        ack.put(1, 1);
        ctx.send(parent_edge_, ack);
      }
      ctx.halt();
    }
  }

  const std::vector<Message>& held() const { return held_; }

 private:
  Message count_record(const Context& ctx) const {
    Message m;
    m.put(static_cast<std::uint64_t>(expected_), std::min(ctx.budget(), 32));
    return m;
  }

  void forward(const Message& m, Context&) {
    for (int port = 0; port < static_cast<int>(child_edges_.size()); ++port) {
      outbox_.push_frame(port, m);
    }
  }

  VertexId self_;
  bool is_root_;
  const std::vector<Message>* root_items_;
  EdgeId parent_edge_ = -1;
  std::vector<EdgeId> child_edges_;
  Outbox outbox_;
  std::vector<Message> held_;
  int expected_ = -1;
  int acks_ = 0;
};

class FloodProgram {
 public:
  FloodProgram(VertexId self, bool source) : self_(self), source_(source) {}

  void step(Context& ctx) {
    const Graph& g = ctx.graph();
    if (ctx.round() == 0 && source_) {
      Message token;
      token.put(1, 1);
      for (EdgeId e : g.incident(self_)) ctx.send(e, token);
      ctx.halt();
      return;
    }
    if (ctx.inbox().empty()) return;
    std::vector<EdgeId> heard;
    for (const auto& d : ctx.inbox()) heard.push_back(d.edge);
    for (EdgeId e : g.incident(self_)) {
      if (std::find(heard.begin(), heard.end(), e) == heard.end()) ctx.send(e, ctx.inbox().front().message);
    }
    ctx.halt();
  }

 private:
  VertexId self_;
  bool source_;
};

}  // namespace

BroadcastResult broadcast_convergecast(const Graph& g, const RootedTree& tree,
                                       const std::vector<Message>& items, const RunOptions& options) {
  std::vector<BroadcastProgram> programs;
  programs.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) programs.emplace_back(tree, v, &items);
  BroadcastResult result;
  result.stats = run_until_halt(g, programs, options);
  for (const auto& p : programs) result.held.push_back(p.held());
  return result;
}

RunStats flood(const Graph& g, VertexId source, const RunOptions& options) {
  std::vector<FloodProgram> programs;
  programs.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) programs.emplace_back(v, v == source);
  return run_until_halt(g, programs, options);
}

}  // namespace kecss::congest
