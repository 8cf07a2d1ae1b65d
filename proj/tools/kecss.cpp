#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "kecss/augk.hpp"
#include "kecss/bench.hpp"
#include "kecss/connectivity.hpp"
#include "kecss/cycle_space.hpp"
#include "kecss/errors.hpp"
#include "kecss/oracles.hpp"
#include "kecss/tap.hpp"
#include "kecss/trees.hpp"

using namespace kecss;

namespace {

struct Source {
  std::string graph;
  bench::Family family;
  std::uint64_t seed = 1;
};

void add_source(CLI::App* cmd, Source& s) {
  cmd->add_option("--graph", s.graph, "Graph file (\"n m\" then \"u v w\" lines)");
  cmd->add_option("--family", s.family.name, "Generated family instead of --graph")
      ->check(CLI::IsMember(bench::family_names()));
  cmd->add_option("--n", s.family.n, "Vertex count of the generated instance");
  cmd->add_option("--k", s.family.k, "Connectivity target")->check(CLI::PositiveNumber);
  cmd->add_option("--weights", s.family.weights, "unit or uniform")->check(CLI::IsMember({"unit", "uniform"}));
  cmd->add_option("--weight-exp", s.family.weight_exponent, "uniform weights lie in [1, n^exp]");
  cmd->add_option("--seed", s.seed, "Seed");
}

Graph load(const Source& s) {
  if (!s.graph.empty()) return load_graph(s.graph);
  if (s.family.name.empty()) throw PreconditionError("give --graph or --family");
  return bench::generate(s.family, s.seed);
}

EdgeSet read_ids(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read " + path);
  EdgeSet ids;
  long id;
  while (in >> id) ids.push_back(static_cast<EdgeId>(id));
  return normalized(ids);
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  out << text;
}

std::string edge_lines(const EdgeSet& edges) {
  std::ostringstream out;
  for (EdgeId e : edges) out << e << '\n';
  return out.str();
}

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> sizes;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) sizes.push_back(std::stoi(part));
  return sizes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-edge-connected spanning subgraphs in a simulated CONGEST network"};
  app.require_subcommand(1);

  // gen
  Source gen_src;
  std::string gen_out;
  auto* gen = app.add_subcommand("gen", "Generate an instance");
  add_source(gen, gen_src);
  gen->add_option("--out", gen_out, "Output file (default stdout)");

  // run
  Source run_src;
  std::string run_alg = "two-ecss", run_out, run_ledger;
  int run_bits = kDefaultLabelBits, run_msg_bits = 0;
  auto* run = app.add_subcommand("run", "Run one algorithm and print the chosen edge ids");
  add_source(run, run_src);
  run->add_option("--alg", run_alg, "Algorithm")->check(CLI::IsMember(bench::algorithm_names()));
  run->add_option("--b-bits", run_bits, "Label width for three-ecss")->check(CLI::Range(1, 64));
  run->add_option("--msg-bits", run_msg_bits, "Message budget in bits (0: 8 ceil(log2(n+1)))");
  run->add_option("--out", run_out, "Edge id output (default stdout)");
  run->add_option("--ledger", run_ledger, "Write the round ledger as CSV");

  // oracle
  Source or_src;
  std::string or_problem = "kecss", or_base, or_cache;
  auto* oracle = app.add_subcommand("oracle", "Exact optimum by enumeration");
  add_source(oracle, or_src);
  oracle->add_option("--problem", or_problem, "kecss or aug")->check(CLI::IsMember({"kecss", "aug"}));
  oracle->add_option("--base", or_base, "Edge ids of the subgraph to augment (aug)");
  oracle->add_option("--cache", or_cache, "Oracle cache file");

  // verify
  Source ver_src;
  std::string ver_edges, ver_labels;
  int ver_bits = kDefaultLabelBits;
  auto* verify = app.add_subcommand("verify", "Check k-edge-connectivity of an edge set");
  add_source(verify, ver_src);
  verify->add_option("--edges", ver_edges, "Edge id file (default: all edges)");
  verify->add_option("--labels", ver_labels, "Write circulation labels and the census of the edge set here");
  verify->add_option("--b-bits", ver_bits, "Label width")->check(CLI::Range(1, 64));

  // bench
  bench::Experiment exp;
  bench::Family bench_family;
  std::string bench_sizes = "16", bench_out;
  std::uint64_t bench_seed = 1;
  int trials = 10;
  std::string cache_path;
  auto* bench_cmd = app.add_subcommand("bench", "Run an experiment and write CSV rows");
  bench_cmd->add_option("--alg", exp.algorithm, "Algorithm")->check(CLI::IsMember(bench::algorithm_names()));
  bench_cmd->add_option("--family", bench_family.name, "Instance family")
      ->required()
      ->check(CLI::IsMember(bench::family_names()));
  bench_cmd->add_option("--n", bench_sizes, "Comma-separated vertex counts");
  bench_cmd->add_option("--k", exp.k, "Target of k-ecss; also the family's connectivity")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--weights", bench_family.weights, "unit or uniform");
  bench_cmd->add_option("--seed", bench_seed, "First seed");
  bench_cmd->add_option("--trials", trials, "Seeds per instance")->check(CLI::PositiveNumber);
  bench_cmd->add_flag("--oracle", exp.oracle, "Compare against exact optima where small enough");
  bench_cmd->add_option("--cache", cache_path, "Oracle cache file");
  bench_cmd->add_option("--b-bits", exp.label_bits, "Label width for three-ecss")->check(CLI::Range(1, 64));
  bench_cmd->add_option("--msg-bits", exp.message_bits, "Message budget in bits");
  bench_cmd->add_option("--threads", exp.threads, "Worker threads")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--repro", exp.repro_dir, "Directory for failing instances");
  bench_cmd->add_option("--out", bench_out, "CSV output (default stdout)");

  // summarize
  std::string sum_in, sum_out;
  auto* summarize = app.add_subcommand("summarize", "Aggregate bench CSV rows");
  summarize->add_option("input", sum_in, "CSV file")->required();
  summarize->add_option("--out", sum_out, "Summary output (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      emit(gen_out, graph_to_string(load(gen_src)));
    } else if (*run) {
      const Graph g = load(run_src);
      const int k = run_src.family.k;
      congest::RoundLedger ledger;
      EdgeSet edges;
      int target = 2;
      if (run_alg == "two-ecss" || run_alg == "tap-only") {
        auto r = two_ecss(g, {.seed = run_src.seed, .ledger = &ledger});
        edges = run_alg == "two-ecss" ? r.edges : r.tap.added;
        std::cerr << "weight " << g.weight_of(edges) << " iterations " << r.tap.iterations << '\n';
      } else if (run_alg == "k-ecss") {
        target = k;
        auto r = k_ecss(g, k, {.seed = run_src.seed, .ledger = &ledger});
        edges = r.edges;
        std::cerr << "weight " << r.weight << " stages " << r.stages.size() << '\n';
      } else {
        target = 3;
        ThreeEcssOptions opt;
        opt.seed = run_src.seed;
        opt.bits = run_bits;
        opt.message_bits = run_msg_bits;
        opt.ledger = &ledger;
        auto r = three_ecss(g.with_unit_weights(), opt);
        edges = r.edges;
        std::cerr << "edges " << edges.size() << " iterations " << r.iterations << " verified " << r.verified
                  << '\n';
      }
      std::cerr << "k-edge-connected(" << target << ") "
                << (is_k_edge_connected(g, edges, target) ? "yes" : "no") << " executed "
                << ledger.executed_total() << " charged " << ledger.charged_total() << '\n';
      emit(run_out, edge_lines(edges));
      if (!run_ledger.empty()) emit(run_ledger, ledger.to_csv());
    } else if (*oracle) {
      const Graph g = load(or_src);
      OracleCache cache(or_cache);
      OracleCache* c = or_cache.empty() ? nullptr : &cache;
      const int k = or_src.family.k;
      OracleReport r = or_problem == "kecss" ? exact_k_ecss(g, k, c)
                                             : exact_min_augmentation(g, read_ids(or_base), k, c);
      std::cout << OracleCache::format(r.hash, or_problem, k, r) << '\n';
      std::cerr << "enumerated " << r.enumerated << " in " << r.elapsed_seconds << "s" << (r.cached ? " (cached)" : "")
                << '\n';
      if (c) c->save();
    } else if (*verify) {
      const Graph g = load(ver_src);
      EdgeSet edges = ver_edges.empty() ? mask_to_set(full_mask(g)) : read_ids(ver_edges);
      const int k = ver_src.family.k;
      const bool ok = is_k_edge_connected(g, edges, k);
      std::cout << "k=" << k << " " << (ok ? "yes" : "no") << '\n';
      if (!ok) {
        if (auto cut = find_small_cut(g, make_mask(g.num_edges(), edges), k)) {
          std::cout << "cut";
          for (EdgeId e : cut->edges) std::cout << ' ' << e;
          std::cout << '\n';
        }
      }
      if (!ver_labels.empty()) {
        auto bfs = build_bfs(g, 0);
        const EdgeSet host = set_union(edges, bfs.tree.tree_edges);
        auto la = assign_labels(g, bfs.tree, host, ver_bits, ver_src.seed);
        emit(ver_labels, dump_labels(la) + "#\n" + dump_census(bfs.tree, la, census_of(g, bfs.tree, la)));
      }
      return ok ? 0 : 1;
    } else if (*bench_cmd) {
      OracleCache cache(cache_path);
      if (!cache_path.empty()) exp.cache = &cache;
      bench_family.k = exp.k;
      for (int n : parse_sizes(bench_sizes)) {
        bench::Family f = bench_family;
        f.n = n;
        exp.instances.push_back(f);
      }
      for (int t = 0; t < trials; ++t) exp.seeds.push_back(bench_seed + static_cast<std::uint64_t>(t));
      emit(bench_out, bench::to_csv(bench::run_experiment(exp)));
      if (exp.cache) cache.save();
    } else if (*summarize) {
      std::ifstream in(sum_in);
      if (!in) throw Error("cannot read " + sum_in);
      std::stringstream text;
      text << in.rdbuf();
      emit(sum_out, bench::format_summary(bench::summarize(bench::parse_csv(text.str()))));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
