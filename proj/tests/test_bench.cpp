#include "doctest.h"

#include <cmath>

#include "kecss/bench.hpp"
#include "kecss/connectivity.hpp"
#include "kecss/errors.hpp"

using namespace kecss;
using namespace kecss::bench;

namespace {

Experiment experiment(const std::string& alg, const std::vector<Family>& instances, int seeds) {
  Experiment e;
  e.algorithm = alg;
  e.instances = instances;
  for (int s = 0; s < seeds; ++s) e.seeds.push_back(static_cast<std::uint64_t>(s));
  return e;
}

}  // namespace

TEST_CASE("generators") {
  SUBCASE("cycle") {
    Graph g = generate({.name = "cycle", .n = 6}, 1);
    CHECK(g.num_edges() == 6);
    for (VertexId v = 0; v < 6; ++v) CHECK(g.degree(v) == 2);
    CHECK(edge_connectivity(g) == 2);
  }
  SUBCASE("theta") {
    Graph g = generate({.name = "theta", .n = 8}, 1);
    CHECK(g.num_edges() == 9);
    CHECK(edge_connectivity(g) == 2);
  }
  SUBCASE("grid 3x3") {
    Graph g = generate({.name = "grid", .n = 9}, 1);
    CHECK(g.num_edges() == 12);
    CHECK(edge_connectivity(g) == 2);
  }
  SUBCASE("torus and cycle square") {
    Graph t = generate({.name = "torus", .n = 16}, 1);
    CHECK(t.num_edges() == 32);
    CHECK(edge_connectivity(t) == 4);
    Graph c = generate({.name = "cycle-square", .n = 9}, 1);
    CHECK(c.num_edges() == 18);
    CHECK(edge_connectivity(c) == 4);
  }
  SUBCASE("random-kec is verified") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Graph g = generate({.name = "random-kec", .n = 10, .k = 3}, seed);
      CHECK(edge_connectivity(g) >= 3);
    }
  }
  SUBCASE("k-hamiltonian-union") {
    Graph g = generate({.name = "k-hamiltonian-union", .n = 12, .k = 4}, 3);
    CHECK(edge_connectivity(g) >= 4);
  }
  SUBCASE("uniform weights stay in range and are seeded") {
    const Family f{.name = "grid", .n = 16, .weights = "uniform", .weight_exponent = 1};
    Graph a = generate(f, 5), b = generate(f, 5), c = generate(f, 6);
    CHECK(graph_hash(a) == graph_hash(b));
    CHECK(graph_hash(a) != graph_hash(c));
    CHECK(a.min_weight() >= 1);
    CHECK(a.max_weight() <= 16);
  }
  SUBCASE("bad parameters") {
    CHECK_THROWS_AS(generate({.name = "hypercube", .n = 8}, 1), PreconditionError);
    CHECK_THROWS_AS(generate({.name = "torus", .n = 10}, 1), PreconditionError);
    CHECK_THROWS_AS(generate({.name = "grid", .n = 7}, 1), PreconditionError);
    CHECK_THROWS_AS(generate({.name = "random-kec", .n = 3, .k = 3}, 1), PreconditionError);
    CHECK_THROWS_AS(generate({.name = "cycle", .n = 6, .weights = "gaussian"}, 1), PreconditionError);
  }
}

TEST_CASE("two-ecss on cycles matches the unique optimum") {
  std::vector<Family> cycles;
  for (int n = 5; n <= 12; ++n) cycles.push_back({.name = "cycle", .n = n});
  auto e = experiment("two-ecss", cycles, 20);
  e.oracle = true;
  const auto rows = run_experiment(e);
  REQUIRE(rows.size() == 160);
  for (const auto& r : rows) {
    CHECK(r.feasible);
    REQUIRE(r.ratio.has_value());
    CHECK(*r.ratio == 1.0);
    CHECK(r.violations == 0);
    CHECK(r.charged_rounds > 0);
  }
}

TEST_CASE("three-ecss on K5 over 50 seeds") {
  auto e = experiment("three-ecss", {{.name = "random-kec", .n = 5, .k = 3}}, 50);
  e.oracle = true;
  const auto rows = run_experiment(e);
  REQUIRE(rows.size() == 50);
  for (const auto& r : rows) {
    CHECK(r.m == 10);
    CHECK(r.feasible);
    CHECK(r.opt == Weight{8});
    CHECK(*r.ratio >= 1.0);
  }
}

TEST_CASE("k-ecss without the oracle leaves the oracle columns empty") {
  auto e = experiment("k-ecss", {{.name = "random-kec", .n = 9, .k = 3, .weights = "uniform"}}, 4);
  e.k = 3;
  const auto rows = run_experiment(e);
  for (const auto& r : rows) {
    CHECK(r.feasible);
    CHECK_FALSE(r.opt.has_value());
    CHECK_FALSE(r.ratio.has_value());
    CHECK(r.w_a_prime.value() >= r.w_a.value());
  }
  const auto csv = to_csv(rows);
  CHECK(csv.find(",,,") != std::string::npos);
}

TEST_CASE("tap-only reports link weights against the exact augmentation") {
  auto e = experiment("tap-only", {{.name = "random-kec", .n = 7, .k = 2, .weights = "uniform"}}, 10);
  e.oracle = true;
  for (const auto& r : run_experiment(e)) {
    CHECK(r.feasible);
    if (r.opt) CHECK(*r.ratio >= 1.0);
    CHECK(r.greedy_ratio.has_value());
  }
}

TEST_CASE("identical experiments give byte-identical CSV across thread counts") {
  auto e = experiment("two-ecss", {{.name = "grid", .n = 16, .weights = "uniform"}, {.name = "theta", .n = 10}}, 6);
  const auto one = to_csv(run_experiment(e));
  e.threads = 3;
  const auto three = to_csv(run_experiment(e));
  CHECK(one == three);
  CHECK(to_csv(parse_csv(one)) == one);
}

TEST_CASE("experiment validation") {
  auto e = experiment("two-ecss", {{.name = "cycle", .n = 5}}, 0);
  CHECK_THROWS_AS(run_experiment(e), PreconditionError);
  e = experiment("four-ecss", {{.name = "cycle", .n = 5}}, 1);
  CHECK_THROWS_AS(run_experiment(e), PreconditionError);
  e = experiment("two-ecss", {{.name = "torus", .n = 5}}, 1);
  CHECK_THROWS_AS(run_experiment(e), PreconditionError);
}

TEST_CASE("CSV parsing rejects malformed input") {
  CHECK_THROWS_AS(parse_csv("family,n\n"), ParseError);
  CHECK_THROWS_AS(parse_csv(std::string(kCsvHeader) + "\ncycle,5\n"), ParseError);
  CHECK_THROWS_AS(parse_csv("# kecss bench schema 0\n"), ParseError);
}

TEST_CASE("summaries") {
  Row r;
  r.family = "cycle";
  r.algorithm = "two-ecss";
  r.n = 8;
  r.diameter = 4;
  r.ratio = 1.25;
  r.iterations = 7;
  r.charged_rounds = 100;
  SUBCASE("a single row") {
    const auto s = summarize({r});
    REQUIRE(s.size() == 1);
    CHECK(s[0].rows == 1);
    CHECK(*s[0].mean_ratio == 1.25);
    CHECK(*s[0].median_ratio == 1.25);
    CHECK(*s[0].max_ratio == 1.25);
    CHECK(s[0].mean_iterations == 7);
  }
  SUBCASE("all ratios one") {
    std::vector<Row> rows(5, r);
    for (auto& x : rows) x.ratio = 1.0;
    CHECK(*summarize(rows)[0].mean_ratio == 1.0);
  }
  SUBCASE("a known slope is recovered") {
    std::vector<Row> rows;
    for (int n : {16, 64, 256, 1024}) {
      for (int d : {4, 9, 20}) {
        Row x = r;
        x.n = n;
        x.diameter = d;
        x.charged_rounds = std::llround(3.5 * round_scale("two-ecss", n, d) + 12);
        rows.push_back(x);
      }
    }
    const auto s = summarize(rows);
    CHECK(std::abs(s[0].rounds.slope - 3.5) <= 0.035);
    CHECK(s[0].rounds.r2 >= 0.999);
    CHECK(format_summary(s).find("cycle,two-ecss,12,") != std::string::npos);
  }
}

TEST_CASE("least squares helpers") {
  const auto r = fit({1, 2, 3, 4}, {3, 5, 7, 9});
  CHECK(r.slope == doctest::Approx(2));
  CHECK(r.intercept == doctest::Approx(1));
  CHECK(r.r2 == doctest::Approx(1));
  CHECK(fit_through_origin({1, 2, 3}, {2, 4, 6}) == doctest::Approx(2));
}
