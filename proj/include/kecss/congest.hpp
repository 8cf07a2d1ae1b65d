#pragma once

#include <array>
#include <cstdint>
#include <deque>
#include <span>
#include <string>
#include <vector>

#include "kecss/errors.hpp"
#include "kecss/graph.hpp"
#include "kecss/random.hpp"

namespace kecss::congest {

inline constexpr int kDefaultMsgCoefficient = 8;

// ceil(log2(n + 1)): bits needed for a vertex id or a count up to n.
int id_bits(std::uint64_t n);
// B = c_msg * ceil(log2(n + 1)).
int message_budget(int n, int c_msg = kDefaultMsgCoefficient);

// Bit string with inline storage; fields are read back in append order.
class Message {
 public:
  static constexpr int kCapacityBits = 512;

  Message& put(std::uint64_t value, int bits);
  Message& append(const Message& other);
  std::uint64_t get(int offset, int bits) const;
  Message slice(int offset, int bits) const;
  int size() const { return bits_; }
  bool empty() const { return bits_ == 0; }

  friend bool operator==(const Message& a, const Message& b) {
    return a.bits_ == b.bits_ && a.words_ == b.words_;
  }

 private:
  std::array<std::uint64_t, kCapacityBits / 64> words_{};
  int bits_ = 0;
};

class MessageReader {
 public:
  explicit MessageReader(const Message& m) : m_(m) {}
  std::uint64_t take(int bits) {
    auto v = m_.get(pos_, bits);
    pos_ += bits;
    return v;
  }
  int remaining() const { return m_.size() - pos_; }

 private:
  const Message& m_;
  int pos_ = 0;
};

class BudgetExceeded : public Error {
 public:
  BudgetExceeded(VertexId node, EdgeId edge, int round, int bits, int budget);
  VertexId node;
  EdgeId edge;
  int round;
  int bits;
  int budget;
};

class Timeout : public Error {
 public:
  explicit Timeout(int round);
  int round;
};

struct Delivery {
  EdgeId edge;
  VertexId from;
  Message message;
};

struct RunOptions {
  int max_rounds = 1 << 20;
  int message_bits = 0;  // 0: message_budget(n)
  std::uint64_t seed = 0;
};

struct RunStats {
  int rounds = 0;
  std::uint64_t messages = 0;
  std::uint64_t bits = 0;
};

class Network;

// A node's view of the current round.
class Context {
 public:
  VertexId self() const { return self_; }
  int round() const { return round_; }
  std::span<const Delivery> inbox() const;
  const Graph& graph() const;
  int budget() const;
  SplitMix& rng();

  void send(EdgeId edge, const Message& message);
  void halt();
  bool halted() const;

 private:
  friend class Network;
  Context(Network& net, VertexId self, int round) : net_(net), self_(self), round_(round) {}

  Network& net_;
  VertexId self_;
  int round_;
};

// Lockstep round engine. Messages sent in round r are delivered at the start
// of round r + 1; messages addressed to halted nodes are dropped.
class Network {
 public:
  Network(const Graph& g, const RunOptions& options);

  const Graph& graph() const { return g_; }
  int budget() const { return budget_; }
  int round() const { return round_; }
  bool all_halted() const { return active_ == 0; }
  bool is_halted(VertexId v) const { return halted_[v]; }

  Context context(VertexId v) { return Context(*this, v, round_); }
  // Delivers this round's messages and advances the round counter.
  void finish_round();

  RunStats stats() const { return stats_; }

 private:
  friend class Context;

  struct Pending {
    VertexId to;
    Delivery delivery;
  };

  const Graph& g_;
  RunOptions options_;
  int budget_;
  int round_ = 0;
  int active_;
  std::vector<bool> halted_;
  std::vector<SplitMix> rngs_;
  std::vector<std::vector<Delivery>> inbox_;
  std::vector<Pending> outgoing_;
  std::vector<int> last_send_round_;  // per (edge, direction)
  RunStats stats_;
};

// Runs one program per vertex until every node halts. Each Program exposes
// `void step(Context&)`; round 0 is the initial step with an empty inbox.
template <class Program>
RunStats run_until_halt(const Graph& g, std::span<Program> programs, const RunOptions& options = {}) {
  if (static_cast<int>(programs.size()) != g.num_vertices()) {
    throw PreconditionError("run_until_halt: one program per vertex required");
  }
  if (options.max_rounds < 1) throw PreconditionError("run_until_halt: max_rounds must be >= 1");
  Network net(g, options);
  while (true) {
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      if (net.is_halted(v)) continue;
      Context ctx = net.context(v);
      programs[v].step(ctx);
    }
    if (net.all_halted()) break;
    if (net.round() >= options.max_rounds) throw Timeout(net.round());
    net.finish_round();
  }
  return net.stats();
}

template <class Program>
RunStats run_until_halt(const Graph& g, std::vector<Program>& programs, const RunOptions& options = {}) {
  return run_until_halt(g, std::span<Program>(programs), options);
}

// Per-port FIFO of outgoing frames. Records longer than the budget are split
// into ceil(bits / B) frames sent on consecutive rounds.
class Outbox {
 public:
  Outbox() = default;
  explicit Outbox(int ports) : queues_(ports) {}
  void resize(int ports) { queues_.resize(ports); }

  void push(int port, const Message& record, int budget);
  // Queues a message as a single frame; oversize frames fail at send time.
  void push_frame(int port, const Message& frame) { queues_[port].push_back(frame); }
  // Sends at most one frame per port. `edges[port]` maps ports to edge ids.
  void flush(Context& ctx, std::span<const EdgeId> edges);
  bool empty() const;

 private:
  std::vector<std::deque<Message>> queues_;
};

// Reassembles fixed-width records from frames arriving on one port.
class Inbound {
 public:
  void feed(const Message& frame) { partial_.append(frame); }
  // Pops a complete record of `width` bits if available.
  bool pop(int width, Message& out);

 private:
  Message partial_;
};

inline int frames_for(int bits, int budget) { return bits <= 0 ? 1 : (bits + budget - 1) / budget; }

// Analytic round accounting next to simulated rounds.
class RoundLedger {
 public:
  struct Entry {
    std::string tag;
    long long executed = 0;
    long long charged = 0;
  };

  void record_executed(const std::string& tag, long long rounds);
  void charge(const std::string& tag, long long rounds);

  long long executed_total() const { return executed_total_; }
  long long charged_total() const { return charged_total_; }
  const Entry* find(const std::string& tag) const;
  const std::vector<Entry>& entries() const { return entries_; }

  // Closes the current iteration and stores its executed/charged deltas.
  void close_iteration();
  const std::vector<Entry>& iterations() const { return iterations_; }

  void merge(const RoundLedger& other);
  std::string to_csv() const;

 private:
  Entry& slot(const std::string& tag);

  std::vector<Entry> entries_;
  std::vector<Entry> iterations_;
  long long executed_total_ = 0;
  long long charged_total_ = 0;
  long long executed_mark_ = 0;
  long long charged_mark_ = 0;
};

}  // namespace kecss::congest
