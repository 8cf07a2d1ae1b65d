#include "kecss/congest.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace kecss::congest {

int id_bits(std::uint64_t n) { return std::bit_width(n); }

int message_budget(int n, int c_msg) {
  if (c_msg < 1) throw PreconditionError("c_msg must be positive");
  return c_msg * std::max(1, id_bits(static_cast<std::uint64_t>(n)));
}

Message& Message::put(std::uint64_t value, int bits) {
  if (bits < 0 || bits > 64) throw PreconditionError("field width out of range");
  if (bits_ + bits > kCapacityBits) throw PreconditionError("message capacity exceeded");
  if (bits < 64 && (value >> bits) != 0) throw PreconditionError("value does not fit its field");
  if (bits == 0) return *this;
  const int word = bits_ >> 6;
  const int shift = bits_ & 63;
  words_[word] |= value << shift;
  if (shift != 0 && shift + bits > 64) words_[word + 1] |= value >> (64 - shift);
  bits_ += bits;
  return *this;
}

std::uint64_t Message::get(int offset, int bits) const {
  if (offset < 0 || bits < 0 || bits > 64 || offset + bits > bits_) {
    throw PreconditionError("message read out of range");
  }
  if (bits == 0) return 0;
  const int word = offset >> 6;
  const int shift = offset & 63;
  std::uint64_t v = words_[word] >> shift;
  if (shift != 0 && shift + bits > 64) v |= words_[word + 1] << (64 - shift);
  if (bits < 64) v &= (std::uint64_t{1} << bits) - 1;
  return v;
}

Message Message::slice(int offset, int bits) const {
  Message out;
  for (int done = 0; done < bits;) {
    const int chunk = std::min(64, bits - done);
    out.put(get(offset + done, chunk), chunk);
    done += chunk;
  }
  return out;
}

Message& Message::append(const Message& other) {
  for (int done = 0; done < other.size();) {
    const int chunk = std::min(64, other.size() - done);
    put(other.get(done, chunk), chunk);
    done += chunk;
  }
  return *this;
}

BudgetExceeded::BudgetExceeded(VertexId node_, EdgeId edge_, int round_, int bits_, int budget_)
    : Error("message of " + std::to_string(bits_) + " bits exceeds budget " +
            std::to_string(budget_) + " at node " + std::to_string(node_) + " on edge " +
            std::to_string(edge_) + " in round " + std::to_string(round_)),
      node(node_),
      edge(edge_),
      round(round_),
      bits(bits_),
      budget(budget_) {}

Timeout::Timeout(int round_)
    : Error("simulation did not halt within " + std::to_string(round_) + " rounds"), round(round_) {}

std::span<const Delivery> Context::inbox() const { return net_.inbox_[self_]; }
const Graph& Context::graph() const { return net_.g_; }
int Context::budget() const { return net_.budget_; }
SplitMix& Context::rng() { return net_.rngs_[self_]; }
bool Context::halted() const { return net_.halted_[self_]; }

void Context::halt() {
  if (!net_.halted_[self_]) {
    net_.halted_[self_] = true;
    --net_.active_;
  }
}

void Context::send(EdgeId edge, const Message& message) {
  const Graph& g = net_.g_;
  if (edge < 0 || edge >= g.num_edges()) throw PreconditionError("send on unknown edge");
  const Edge& e = g.edge(edge);
  if (e.u != self_ && e.v != self_) {
    throw PreconditionError("node " + std::to_string(self_) + " sent on non-incident edge " +
                            std::to_string(edge));
  }
  if (message.size() > net_.budget_) {
    throw BudgetExceeded(self_, edge, round_, message.size(), net_.budget_);
  }
  const int slot = 2 * edge + (self_ == e.u ? 0 : 1);
  if (net_.last_send_round_[slot] == round_) {
    throw PreconditionError("node " + std::to_string(self_) + " sent twice on edge " +
                            std::to_string(edge) + " in round " + std::to_string(round_));
  }
  net_.last_send_round_[slot] = round_;
  net_.outgoing_.push_back({e.other(self_), Delivery{edge, self_, message}});
  ++net_.stats_.messages;
  net_.stats_.bits += static_cast<std::uint64_t>(message.size());
}

Network::Network(const Graph& g, const RunOptions& options)
    : g_(g),
      options_(options),
      budget_(options.message_bits > 0 ? options.message_bits : message_budget(g.num_vertices())),
      active_(g.num_vertices()),
      halted_(g.num_vertices(), false),
      inbox_(g.num_vertices()),
      last_send_round_(2 * static_cast<std::size_t>(g.num_edges()), -1) {
  rngs_.reserve(g.num_vertices());
  for (VertexId v = 0; v < g.num_vertices(); ++v) rngs_.emplace_back(derive_seed(options.seed, v));
}

void Network::finish_round() {
  for (auto& box : inbox_) box.clear();
  for (auto& p : outgoing_) {
    if (halted_[p.to]) continue;
    if (p.delivery.message.size() > budget_) {
      throw InvariantViolation("oversized message reached the delivery path");
    }
    inbox_[p.to].push_back(p.delivery);
  }
  outgoing_.clear();
  ++round_;
  stats_.rounds = round_;
}

void Outbox::push(int port, const Message& record, int budget) {
  auto& q = queues_[port];
  if (record.size() <= budget) {
    q.push_back(record);
    return;
  }
  for (int offset = 0; offset < record.size(); offset += budget) {
    q.push_back(record.slice(offset, std::min(budget, record.size() - offset)));
  }
}

void Outbox::flush(Context& ctx, std::span<const EdgeId> edges) {
  for (std::size_t port = 0; port < queues_.size(); ++port) {
    auto& q = queues_[port];
    if (q.empty()) continue;
    ctx.send(edges[port], q.front());
    q.pop_front();
  }
}

bool Outbox::empty() const {
  return std::all_of(queues_.begin(), queues_.end(), [](const auto& q) { return q.empty(); });
}

bool Inbound::pop(int width, Message& out) {
  if (partial_.size() < width) return false;
  out = partial_.slice(0, width);
  partial_ = partial_.slice(width, partial_.size() - width);
  return true;
}

RoundLedger::Entry& RoundLedger::slot(const std::string& tag) {
  for (auto& e : entries_) {
    if (e.tag == tag) return e;
  }
  entries_.push_back(Entry{tag, 0, 0});
  return entries_.back();
}

void RoundLedger::record_executed(const std::string& tag, long long rounds) {
  if (rounds < 0) throw PreconditionError("negative round count");
  slot(tag).executed += rounds;
  executed_total_ += rounds;
}

void RoundLedger::charge(const std::string& tag, long long rounds) {
  if (rounds < 0) throw PreconditionError("negative round charge");
  slot(tag).charged += rounds;
  charged_total_ += rounds;
}

const RoundLedger::Entry* RoundLedger::find(const std::string& tag) const {
  for (const auto& e : entries_) {
    if (e.tag == tag) return &e;
  }
  return nullptr;
}

void RoundLedger::close_iteration() {
  iterations_.push_back(Entry{"iteration-" + std::to_string(iterations_.size() + 1),
                              executed_total_ - executed_mark_, charged_total_ - charged_mark_});
  executed_mark_ = executed_total_;
  charged_mark_ = charged_total_;
}

void RoundLedger::merge(const RoundLedger& other) {
  for (const auto& e : other.entries_) {
    record_executed(e.tag, e.executed);
    charge(e.tag, e.charged);
  }
}

std::string RoundLedger::to_csv() const {
  std::ostringstream out;
  out << "tag,executed,charged\n";
  for (const auto& e : entries_) out << e.tag << ',' << e.executed << ',' << e.charged << '\n';
  return out.str();
}

}  // namespace kecss::congest
