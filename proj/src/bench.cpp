#include "kecss/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "kecss/augk.hpp"
#include "kecss/connectivity.hpp"
#include "kecss/cycle_space.hpp"
#include "kecss/errors.hpp"
#include "kecss/random.hpp"
#include "kecss/tap.hpp"
#include "kecss/trees.hpp"

namespace kecss::bench {

namespace {

int exact_sqrt(int n) {
  int s = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  return s * s == n ? s : -1;
}

// Largest divisor of n not above sqrt(n).
int grid_rows(int n) {
  int best = 1;
  for (int r = 1; r * r <= n; ++r) {
    if (n % r == 0) best = r;
  }
  return best;
}

void add_if_new(Graph& g, VertexId a, VertexId b) {
  if (a != b && !g.find_edge(a, b)) g.add_edge(a, b);
}

Graph cycle(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) add_if_new(g, i, (i + 1) % n);
  return g;
}

Graph theta(int n) {
  const int q = n - 2;
  Graph g(n);
  int next = 2;
  for (int len : {q / 3, (q + 1) / 3, (q + 2) / 3}) {
    VertexId prev = 0;
    for (int i = 0; i < len; ++i) {
      g.add_edge(prev, next);
      prev = next++;
    }
    g.add_edge(prev, 1);
  }
  return g;
}

Graph grid(int n) {
  const int rows = grid_rows(n), cols = n / rows;
  Graph g(n);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const int v = r * cols + c;
      if (c + 1 < cols) g.add_edge(v, v + 1);
      if (r + 1 < rows) g.add_edge(v, v + cols);
    }
  }
  return g;
}

Graph torus(int n) {
  const int s = exact_sqrt(n);
  Graph g(n);
  for (int r = 0; r < s; ++r) {
    for (int c = 0; c < s; ++c) {
      const int v = r * s + c;
      add_if_new(g, v, r * s + (c + 1) % s);
      add_if_new(g, v, ((r + 1) % s) * s + c);
    }
  }
  return g;
}

Graph cycle_square(int n) {
  Graph g(n);
  for (int i = 0; i < n; ++i) add_if_new(g, i, (i + 1) % n);
  for (int i = 0; i < n; ++i) add_if_new(g, i, (i + 2) % n);
  return g;
}

Graph random_kec(int n, int k, SplitMix& rng) {
  const double p = std::min(1.0, 2.0 * k / (n - 1));
  for (int attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    Graph g(n);
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (rng.uniform01() < p) g.add_edge(a, b);
      }
    }
    if (is_k_edge_connected(g, full_mask(g), k)) return g;
  }
  throw CapacityError("random-kec: no " + std::to_string(k) + "-edge-connected sample in " +
                      std::to_string(kMaxGeneratorAttempts) + " attempts");
}

Graph hamiltonian_union(int n, int k, SplitMix& rng) {
  const int cycles = (k + 1) / 2;
  std::vector<VertexId> order(n);
  for (int attempt = 0; attempt < kMaxGeneratorAttempts; ++attempt) {
    Graph g(n);
    for (int c = 0; c < cycles; ++c) {
      std::iota(order.begin(), order.end(), 0);
      std::shuffle(order.begin(), order.end(), rng);
      for (int i = 0; i < n; ++i) add_if_new(g, order[i], order[(i + 1) % n]);
    }
    if (is_k_edge_connected(g, full_mask(g), k)) return g;
  }
  throw CapacityError("k-hamiltonian-union: no " + std::to_string(k) + "-edge-connected sample in " +
                      std::to_string(kMaxGeneratorAttempts) + " attempts");
}

std::string fixed(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

template <class T>
std::string optional_field(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return fixed(*v);
  } else {
    return std::to_string(*v);
  }
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string repro_name(const Family& f, std::uint64_t seed) {
  return f.name + "-n" + std::to_string(f.n) + "-k" + std::to_string(f.k) + "-seed" + std::to_string(seed);
}

void write_repro(const Experiment& e, const Family& f, std::uint64_t seed, const Graph& g, const std::string& what) {
  if (e.repro_dir.empty()) return;
  std::filesystem::create_directories(e.repro_dir);
  const auto base = std::filesystem::path(e.repro_dir) / repro_name(f, seed);
  std::ofstream graph(base.string() + ".graph");
  write_graph(graph, g);
  std::ofstream info(base.string() + ".txt");
  info << "algorithm " << e.algorithm << "\nseed " << seed << "\nk " << e.k << "\nlabel_bits " << e.label_bits
       << "\nerror " << what << '\n';
}

double as_double(const Rational& r) { return static_cast<double>(r); }

}  // namespace

const std::vector<std::string>& family_names() {
  static const std::vector<std::string> names{"cycle",        "theta",      "grid",
                                              "torus",        "cycle-square", "random-kec",
                                              "k-hamiltonian-union"};
  return names;
}

const std::vector<std::string>& algorithm_names() {
  static const std::vector<std::string> names{"two-ecss", "k-ecss", "three-ecss", "tap-only"};
  return names;
}

void validate(const Family& f) {
  const auto& names = family_names();
  if (std::find(names.begin(), names.end(), f.name) == names.end()) {
    throw PreconditionError("unknown family '" + f.name + "'");
  }
  if (f.weights != "unit" && f.weights != "uniform") throw PreconditionError("weights must be unit or uniform");
  if (f.weight_exponent < 0 || f.weight_exponent > kDefaultWeightExponent) {
    throw PreconditionError("weight exponent must be in [0, " + std::to_string(kDefaultWeightExponent) + "]");
  }
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) throw PreconditionError(f.name + ": " + what + " (n = " + std::to_string(f.n) + ")");
  };
  if (f.name == "cycle") need(f.n >= 3, "needs n >= 3");
  if (f.name == "theta") need(f.n >= 4, "needs n >= 4");
  if (f.name == "grid") need(f.n >= 4 && grid_rows(f.n) >= 2, "needs n = r * c with 2 <= r <= c");
  if (f.name == "torus") need(exact_sqrt(f.n) >= 3, "needs n = s * s with s >= 3");
  if (f.name == "cycle-square") need(f.n >= 5, "needs n >= 5");
  if (f.name == "random-kec") need(f.k >= 1 && f.n >= f.k + 1, "needs 1 <= k < n");
  if (f.name == "k-hamiltonian-union") need(f.k >= 1 && f.n >= 2 * ((f.k + 1) / 2) + 1, "needs n > k");
}

Graph generate(const Family& f, std::uint64_t seed) {
  validate(f);
  SplitMix rng(derive_seed(seed, static_cast<std::uint64_t>(f.n), static_cast<std::uint64_t>(f.k)));
  Graph g(0);
  if (f.name == "cycle") g = cycle(f.n);
  if (f.name == "theta") g = theta(f.n);
  if (f.name == "grid") g = grid(f.n);
  if (f.name == "torus") g = torus(f.n);
  if (f.name == "cycle-square") g = cycle_square(f.n);
  if (f.name == "random-kec") g = random_kec(f.n, f.k, rng);
  if (f.name == "k-hamiltonian-union") g = hamiltonian_union(f.n, f.k, rng);
  if (f.weights == "uniform") {
    const Weight cap = weight_cap(f.n, f.weight_exponent);
    std::vector<Weight> w(g.num_edges());
    for (auto& x : w) x = 1 + rng.below(cap);
    g = g.with_weights(w);
  }
  return g;
}

void validate(const Experiment& e) {
  const auto& algs = algorithm_names();
  if (std::find(algs.begin(), algs.end(), e.algorithm) == algs.end()) {
    throw PreconditionError("unknown algorithm '" + e.algorithm + "'");
  }
  if (e.seeds.empty()) throw PreconditionError("experiment needs at least one seed");
  if (e.instances.empty()) throw PreconditionError("experiment needs at least one instance");
  if (e.k < 1) throw PreconditionError("k must be >= 1");
  if (e.label_bits < 1 || e.label_bits > 64) throw PreconditionError("label bits must be in [1, 64]");
  if (e.threads < 1) throw PreconditionError("threads must be >= 1");
  for (const auto& f : e.instances) validate(f);
}

Row run_trial(const Experiment& e, const Family& f, std::uint64_t seed) {
  const Graph g = generate(f, seed);
  Row row;
  row.family = f.name;
  row.n = g.num_vertices();
  row.m = g.num_edges();
  row.diameter = diameter(g);
  row.seed = seed;
  row.algorithm = e.algorithm;
  congest::RoundLedger ledger;
  EdgeSet edges;
  int target = 2;
  std::optional<Weight> greedy_weight;
  static std::mutex cache_lock;
  auto oracle = [&](auto&& compute) -> std::optional<Weight> {
    if (!e.oracle) return std::nullopt;
    try {
      std::lock_guard lock(cache_lock);
      return compute().opt;
    } catch (const CapacityError&) {
      return std::nullopt;
    }
  };
  try {
    if (e.algorithm == "two-ecss" || e.algorithm == "tap-only") {
      TapOptions opt;
      opt.seed = seed;
      opt.ledger = &ledger;
      opt.diameter = row.diameter;
      auto r = two_ecss(g, opt);
      const EdgeSet& tree = r.mst.tree.tree_edges;
      row.iterations = r.tap.iterations;
      row.sum_cost = as_double(r.tap.total_cost);
      row.w_a = r.tap.weight;
      const Weight greedy_links = g.weight_of(greedy_tap(g, r.mst.tree));
      if (e.algorithm == "two-ecss") {
        edges = r.edges;
        row.weight = r.weight;
        greedy_weight = g.weight_of(tree) + greedy_links;
        row.opt = oracle([&] { return exact_k_ecss(g, 2, e.cache); });
      } else {
        edges = r.edges;
        row.weight = r.tap.weight;  // links only
        greedy_weight = greedy_links;
        row.opt = oracle([&] { return exact_min_augmentation(g, tree, 2, e.cache); });
      }
    } else if (e.algorithm == "k-ecss") {
      target = e.k;
      AugKOptions opt;
      opt.seed = seed;
      opt.ledger = &ledger;
      opt.diameter = row.diameter;
      auto r = k_ecss(g, e.k, opt);
      edges = r.edges;
      row.weight = r.weight;
      Rational cost = 0;
      Weight wa = 0, wap = 0;
      for (const auto& s : r.stages) {
        row.iterations += s.iterations;
        cost += s.total_cost;
        wa += s.weight;
        wap += s.activated_weight;
      }
      row.sum_cost = as_double(cost);
      row.w_a = wa;
      row.w_a_prime = wap;
      row.opt = oracle([&] { return exact_k_ecss(g, e.k, e.cache); });
    } else {
      target = 3;
      ThreeEcssOptions opt;
      opt.seed = seed;
      opt.bits = e.label_bits;
      opt.message_bits = e.message_bits;
      opt.ledger = &ledger;
      auto r = three_ecss(g.with_unit_weights(), opt);
      edges = r.edges;
      row.weight = g.weight_of(edges);
      row.iterations = r.iterations;
      row.w_a = g.weight_of(r.added);
      row.w_a_prime = row.w_a;
      row.opt = oracle([&] { return exact_k_ecss(g, 3, e.cache); });
    }
    row.k = target;
    row.feasible = is_k_edge_connected(g, edges, target);
    if (!row.feasible) {
      throw InvariantViolation(e.algorithm + " output is not " + std::to_string(target) + "-edge-connected");
    }
  } catch (const InvariantViolation& ex) {
    write_repro(e, f, seed, g, ex.what());
    throw InvariantViolation(std::string(ex.what()) + " [instance " + repro_name(f, seed) + "]");
  }
  row.exec_rounds = ledger.executed_total();
  row.charged_rounds = ledger.charged_total();
  if (row.opt && *row.opt > 0) row.ratio = static_cast<double>(row.weight) / static_cast<double>(*row.opt);
  if (greedy_weight && *greedy_weight > 0) {
    row.greedy_ratio = static_cast<double>(row.weight) / static_cast<double>(*greedy_weight);
  }
  return row;
}

std::vector<Row> run_experiment(const Experiment& e) {
  validate(e);
  struct Task {
    std::size_t instance;
    std::size_t seed;
  };
  std::vector<Task> tasks;
  for (std::size_t i = 0; i < e.instances.size(); ++i) {
    for (std::size_t s = 0; s < e.seeds.size(); ++s) tasks.push_back({i, s});
  }
  std::vector<Row> rows(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_lock;
  auto worker = [&] {
    for (std::size_t t; (t = next.fetch_add(1)) < tasks.size();) {
      try {
        rows[t] = run_trial(e, e.instances[tasks[t].instance], e.seeds[tasks[t].seed]);
      } catch (...) {
        std::lock_guard lock(failure_lock);
        if (!failure) failure = std::current_exception();
        next = tasks.size();
      }
    }
  };
  const int threads = std::min<int>(e.threads, static_cast<int>(tasks.size()));
  std::vector<std::thread> pool;
  for (int i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  // Rows are already in (instance, seed) order because tasks index them.
  return rows;
}

std::string to_csv(const std::vector<Row>& rows) {
  std::ostringstream out;
  out << kSchemaLine << '\n' << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.family << ',' << r.n << ',' << r.m << ',' << r.diameter << ',' << r.k << ',' << r.seed << ','
        << r.algorithm << ',' << (r.feasible ? "true" : "false") << ',' << r.weight << ',' << optional_field(r.opt)
        << ',' << optional_field(r.ratio) << ',' << optional_field(r.greedy_ratio) << ',' << r.iterations << ','
        << r.exec_rounds << ',' << r.charged_rounds << ',' << optional_field(r.sum_cost) << ','
        << optional_field(r.w_a) << ',' << optional_field(r.w_a_prime) << ',' << r.violations << '\n';
  }
  return out.str();
}

std::vector<Row> parse_csv(const std::string& text) {
  std::vector<Row> rows;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("# kecss bench schema", 0) == 0 && line != kSchemaLine) {
        throw ParseError(number, "unsupported schema: " + line);
      }
      continue;
    }
    if (!header) {
      if (line != kCsvHeader) throw ParseError(number, "unexpected header");
      header = true;
      continue;
    }
    const auto c = split(line);
    if (c.size() != 19) throw ParseError(number, "expected 19 columns, found " + std::to_string(c.size()));
    try {
      Row r;
      r.family = c[0];
      r.n = std::stoi(c[1]);
      r.m = std::stoi(c[2]);
      r.diameter = std::stoi(c[3]);
      r.k = std::stoi(c[4]);
      r.seed = std::stoull(c[5]);
      r.algorithm = c[6];
      r.feasible = c[7] == "true";
      r.weight = std::stoull(c[8]);
      if (!c[9].empty()) r.opt = std::stoull(c[9]);
      if (!c[10].empty()) r.ratio = std::stod(c[10]);
      if (!c[11].empty()) r.greedy_ratio = std::stod(c[11]);
      r.iterations = std::stoll(c[12]);
      r.exec_rounds = std::stoll(c[13]);
      r.charged_rounds = std::stoll(c[14]);
      if (!c[15].empty()) r.sum_cost = std::stod(c[15]);
      if (!c[16].empty()) r.w_a = std::stoull(c[16]);
      if (!c[17].empty()) r.w_a_prime = std::stoull(c[17]);
      r.violations = std::stoi(c[18]);
      rows.push_back(std::move(r));
    } catch (const std::logic_error&) {
      throw ParseError(number, "malformed number");
    }
  }
  return rows;
}

Regression fit(const std::vector<double>& x, const std::vector<double>& y) {
  Regression r;
  r.points = static_cast<int>(x.size());
  if (x.empty()) return r;
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0) {
    r.intercept = my;
    r.r2 = syy == 0 ? 1 : 0;
    return r;
  }
  r.slope = sxy / sxx;
  r.intercept = my - r.slope * mx;
  r.r2 = syy == 0 ? 1 : (sxy * sxy) / (sxx * syy);
  return r;
}

double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y) {
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return sxx == 0 ? 0 : sxy / sxx;
}

double round_scale(const std::string& algorithm, int n, int diameter) {
  const double lg = std::log2(std::max(n, 2));
  if (algorithm == "three-ecss") return diameter * lg * lg * lg;
  const double base = diameter + std::sqrt(static_cast<double>(n));
  if (algorithm == "k-ecss") return base * lg * lg * lg;
  return base * lg * lg;
}

std::vector<Summary> summarize(const std::vector<Row>& rows) {
  std::map<std::pair<std::string, std::string>, std::vector<const Row*>> groups;
  for (const auto& r : rows) groups[{r.family, r.algorithm}].push_back(&r);
  std::vector<Summary> out;
  for (const auto& [key, members] : groups) {
    Summary s;
    s.family = key.first;
    s.algorithm = key.second;
    s.rows = static_cast<int>(members.size());
    std::vector<double> ratios, x, y;
    double iterations = 0;
    for (const Row* r : members) {
      if (r->ratio) ratios.push_back(*r->ratio);
      iterations += static_cast<double>(r->iterations);
      x.push_back(round_scale(r->algorithm, r->n, r->diameter));
      const long long rounds = r->algorithm == "three-ecss" ? r->exec_rounds + r->charged_rounds : r->charged_rounds;
      y.push_back(static_cast<double>(rounds));
    }
    s.mean_iterations = iterations / s.rows;
    if (!ratios.empty()) {
      std::sort(ratios.begin(), ratios.end());
      s.mean_ratio = std::accumulate(ratios.begin(), ratios.end(), 0.0) / static_cast<double>(ratios.size());
      const std::size_t h = ratios.size() / 2;
      s.median_ratio = ratios.size() % 2 ? ratios[h] : (ratios[h - 1] + ratios[h]) / 2;
      s.max_ratio = ratios.back();
    }
    s.rounds = fit(x, y);
    out.push_back(std::move(s));
  }
  return out;
}

std::string format_summary(const std::vector<Summary>& summaries) {
  std::ostringstream out;
  out << "family,alg,rows,mean_ratio,median_ratio,max_ratio,mean_iterations,round_slope,round_intercept,round_r2\n";
  for (const auto& s : summaries) {
    out << s.family << ',' << s.algorithm << ',' << s.rows << ',' << optional_field(s.mean_ratio) << ','
        << optional_field(s.median_ratio) << ',' << optional_field(s.max_ratio) << ',' << fixed(s.mean_iterations)
        << ',' << fixed(s.rounds.slope) << ',' << fixed(s.rounds.intercept) << ',' << fixed(s.rounds.r2) << '\n';
  }
  return out.str();
}

}  // namespace kecss::bench
