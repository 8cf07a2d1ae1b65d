#include "doctest.h"

#include "kecss/congest.hpp"
#include "kecss/protocols.hpp"
#include "kecss/rooted_tree.hpp"
#include "support.hpp"

using namespace kecss;
using namespace kecss::congest;
using namespace testing;

namespace {

struct HaltNow {
  void step(Context& ctx) { ctx.halt(); }
};

// Sends a `bits`-wide message to its first neighbor in round `when`.
struct SendAt {
  int when;
  int bits;
  void step(Context& ctx) {
    if (ctx.round() == when && ctx.self() == 0) {
      Message m;
      for (int left = bits; left > 0; left -= 64) m.put(0, std::min(64, left));
      ctx.send(ctx.graph().incident(0)[0], m);
    }
    if (ctx.round() > when) ctx.halt();
  }
};

struct NeverHalt {
  void step(Context&) {}
};

// Records the round at which each message was received.
struct Echo {
  std::vector<int> heard;
  void step(Context& ctx) {
    for (const auto& d : ctx.inbox()) heard.push_back(static_cast<int>(d.message.get(0, 8)));
    if (ctx.round() < 3) {
      Message m;
      m.put(static_cast<std::uint64_t>(ctx.round()), 8);
      for (EdgeId e : ctx.graph().incident(ctx.self())) ctx.send(e, m);
    } else {
      ctx.halt();
    }
  }
};

struct RandomState {
  std::uint64_t value = 0;
  void step(Context& ctx) {
    value = ctx.rng()();
    ctx.halt();
  }
};

RootedTree path_tree(const Graph& g, VertexId root) {
  EdgeSet all;
  for (EdgeId e = 0; e < g.num_edges(); ++e) all.push_back(e);
  return make_rooted_tree(g, all, root);
}

}  // namespace

TEST_CASE("message budget") {
  CHECK(id_bits(1) == 1);
  CHECK(id_bits(16) == 5);
  CHECK(message_budget(15) == 32);
  CHECK(message_budget(16) == 40);
  CHECK(message_budget(16, 2) == 10);
}

TEST_CASE("message fields round trip") {
  Message m;
  m.put(5, 3).put(0xdeadbeefcafeULL, 48).put(~0ULL, 64).put(1, 1);
  CHECK(m.size() == 116);
  MessageReader r(m);
  CHECK(r.take(3) == 5);
  CHECK(r.take(48) == 0xdeadbeefcafeULL);
  CHECK(r.take(64) == ~0ULL);
  CHECK(r.take(1) == 1);
  CHECK(r.remaining() == 0);
  CHECK_THROWS_AS(Message().put(4, 2), PreconditionError);
  Message s = m.slice(3, 48);
  CHECK(s.get(0, 48) == 0xdeadbeefcafeULL);
}

TEST_CASE("single node halting immediately takes zero rounds") {
  Graph g(1);
  std::vector<HaltNow> programs(1);
  CHECK(run_until_halt(g, programs).rounds == 0);
}

TEST_CASE("flood on P5 takes the eccentricity") {
  CHECK(flood(path_graph(5), 0).rounds == 4);
  CHECK(flood(path_graph(5), 2).rounds == 2);
  CHECK(flood(cycle_graph(7), 3).rounds == 3);
}

TEST_CASE("oversized message aborts citing the round") {
  Graph g = path_graph(2);
  const int budget = message_budget(2);
  std::vector<SendAt> ok(2, SendAt{3, budget});
  CHECK_NOTHROW(run_until_halt(g, ok));
  std::vector<SendAt> bad(2, SendAt{3, budget + 1});
  try {
    run_until_halt(g, bad);
    FAIL("expected budget error");
  } catch (const BudgetExceeded& err) {
    CHECK(err.round == 3);
    CHECK(err.node == 0);
    CHECK(err.edge == 0);
    CHECK(err.bits == budget + 1);
    CHECK(err.budget == budget);
  }
}

TEST_CASE("explicit message width overrides the default") {
  Graph g = path_graph(2);
  std::vector<SendAt> programs(2, SendAt{0, 20});
  RunOptions opts;
  opts.message_bits = 19;
  CHECK_THROWS_AS(run_until_halt(g, programs, opts), BudgetExceeded);
}

TEST_CASE("non-halting run times out") {
  Graph g = path_graph(3);
  std::vector<NeverHalt> programs(3);
  RunOptions opts;
  opts.max_rounds = 10;
  try {
    run_until_halt(g, programs, opts);
    FAIL("expected timeout");
  } catch (const Timeout& t) {
    CHECK(t.round == 10);
  }
}

TEST_CASE("messages are visible one round later") {
  Graph g = path_graph(2);
  std::vector<Echo> programs(2);
  run_until_halt(g, programs);
  // Sent in rounds 0, 1, 2; received in rounds 1, 2, 3.
  CHECK(programs[0].heard == std::vector<int>{0, 1, 2});
  CHECK(programs[1].heard == std::vector<int>{0, 1, 2});
}

TEST_CASE("runs are deterministic in the master seed") {
  Graph g = cycle_graph(6);
  RunOptions opts;
  opts.seed = 99;
  std::vector<RandomState> a(6), b(6), c(6);
  run_until_halt(g, a, opts);
  run_until_halt(g, b, opts);
  opts.seed = 100;
  run_until_halt(g, c, opts);
  bool differs = false;
  for (int v = 0; v < 6; ++v) {
    CHECK(a[v].value == b[v].value);
    differs = differs || a[v].value != c[v].value;
  }
  CHECK(differs);
  CHECK(a[0].value != a[1].value);
}

TEST_CASE("outbox splits records and inbound reassembles them") {
  Message record;
  record.put(0x123456789ULL, 40).put(0x3ff, 10);
  Outbox out(1);
  out.push(0, record, 16);
  Inbound in;
  Message got;
  int frames = 0;
  // Drain through a tiny network: one port, sent over consecutive rounds.
  Graph g = path_graph(2);
  struct Relay {
    Outbox* out;
    Inbound* in;
    int* frames;
    void step(Context& ctx) {
      if (ctx.self() == 0) {
        std::vector<EdgeId> edges{0};
        out->flush(ctx, edges);
        if (out->empty()) ctx.halt();
      } else {
        for (const auto& d : ctx.inbox()) {
          in->feed(d.message);
          ++*frames;
        }
        if (ctx.round() >= 5) ctx.halt();
      }
    }
  };
  std::vector<Relay> programs(2, Relay{&out, &in, &frames});
  RunOptions opts;
  opts.message_bits = 16;
  run_until_halt(g, programs, opts);
  CHECK(frames == frames_for(50, 16));
  REQUIRE(in.pop(50, got));
  CHECK(got == record);
  CHECK_FALSE(in.pop(1, got));
}

TEST_CASE("ledger charges") {
  RoundLedger ledger;
  const int d = 3;
  const int n = 16;
  int sqrt_n = 0;
  while (sqrt_n * sqrt_n < n) ++sqrt_n;
  ledger.charge("tap-iteration", d + sqrt_n);
  CHECK(ledger.find("tap-iteration")->charged == 7);
  CHECK(ledger.charged_total() == 7);

  ledger.charge("tap-iteration", 0);
  CHECK(ledger.charged_total() == 7);
  ledger.charge("tap-iteration", 5);
  CHECK(ledger.find("tap-iteration")->charged == 12);
  CHECK_THROWS_AS(ledger.charge("x", -1), PreconditionError);

  ledger.record_executed("bfs", 9);
  ledger.close_iteration();
  ledger.charge("mst", 2);
  ledger.close_iteration();
  REQUIRE(ledger.iterations().size() == 2);
  CHECK(ledger.iterations()[0].charged == 12);
  CHECK(ledger.iterations()[0].executed == 9);
  CHECK(ledger.iterations()[1].charged == 2);
  CHECK(ledger.to_csv() == "tag,executed,charged\ntap-iteration,0,12\nbfs,9,0\nmst,0,2\n");

  RoundLedger other;
  other.charge("mst", 1);
  other.record_executed("labels", 4);
  ledger.merge(other);
  CHECK(ledger.find("mst")->charged == 3);
  CHECK(ledger.executed_total() == 13);
}

TEST_CASE("broadcast on a star") {
  Graph g = star_graph(5);
  RootedTree t = path_tree(g, 0);
  Message item;
  item.put(42, 8);
  auto res = broadcast_convergecast(g, t, {item});
  CHECK(res.stats.rounds <= 4);
  for (const auto& held : res.held) {
    REQUIRE(held.size() == 1);
    CHECK(held[0] == item);
  }
}

TEST_CASE("pipelined broadcast on P8 rooted at an end") {
  Graph g = path_graph(8);
  RootedTree t = path_tree(g, 0);
  std::vector<Message> items;
  for (int i = 0; i < 10; ++i) {
    Message m;
    m.put(static_cast<std::uint64_t>(i + 1), 8);
    items.push_back(m);
  }
  auto res = broadcast_convergecast(g, t, items);
  CHECK(res.stats.rounds <= 2 * 7 + 10 + 3);
  for (const auto& held : res.held) CHECK(held == items);

  auto empty = broadcast_convergecast(g, t, {});
  CHECK(empty.stats.rounds <= 2 * 7 + 1);
}

TEST_CASE("broadcast rejects oversized items") {
  Graph g = path_graph(4);
  RootedTree t = path_tree(g, 0);
  Message big;
  big.put(0, 64);
  CHECK_THROWS_AS(broadcast_convergecast(g, t, {big}), BudgetExceeded);
}

TEST_CASE("broadcast round bound on random trees") {
  SplitMix rng(8);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + static_cast<int>(rng.below(30));
    Graph g = random_connected(n, 0, rng);
    RootedTree t = path_tree(g, static_cast<VertexId>(rng.below(n)));
    const int count = static_cast<int>(rng.below(6));
    std::vector<Message> items(count);
    for (int i = 0; i < count; ++i) items[i].put(static_cast<std::uint64_t>(i), 5);
    auto res = broadcast_convergecast(g, t, items);
    CHECK(res.stats.rounds <= 2 * t.height() + count + 2);
    for (const auto& held : res.held) CHECK(held == items);
  }
}
