#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "kecss/graph.hpp"
#include "kecss/oracles.hpp"

namespace kecss::bench {

inline constexpr int kMaxGeneratorAttempts = 10000;
inline constexpr const char* kSchemaLine = "# kecss bench schema 1";
inline constexpr const char* kCsvHeader =
    "family,n,m,D,k,seed,alg,feasible,weight,opt,ratio,greedy_ratio,iterations,exec_rounds,charged_rounds,sum_cost,"
    "w_A,w_Aprime,violations";

// Families: cycle, theta, grid, torus, cycle-square, random-kec,
// k-hamiltonian-union. Weights: "unit" or "uniform" in [1, n^weight_exponent].
struct Family {
  std::string name;
  int n = 0;
  int k = 2;  // connectivity target of random-kec and k-hamiltonian-union
  std::string weights = "unit";
  int weight_exponent = 2;
};

const std::vector<std::string>& family_names();
// Throws PreconditionError for unknown names or unusable sizes.
void validate(const Family& f);
Graph generate(const Family& f, std::uint64_t seed);

const std::vector<std::string>& algorithm_names();

struct Experiment {
  std::string algorithm = "two-ecss";  // two-ecss, k-ecss, three-ecss, tap-only
  std::vector<Family> instances;
  std::vector<std::uint64_t> seeds;
  bool oracle = false;
  int k = 2;  // target of k-ecss
  int label_bits = 32;
  int message_bits = 0;
  int threads = 1;
  std::string repro_dir;  // where a failing trial leaves its instance and seed
  OracleCache* cache = nullptr;
};

void validate(const Experiment& e);

struct Row {
  std::string family;
  int n = 0, m = 0, diameter = 0, k = 0;
  std::uint64_t seed = 0;
  std::string algorithm;
  bool feasible = false;
  Weight weight = 0;
  std::optional<Weight> opt;
  std::optional<double> ratio;
  std::optional<double> greedy_ratio;
  long long iterations = 0;
  long long exec_rounds = 0;
  long long charged_rounds = 0;
  std::optional<double> sum_cost;
  std::optional<Weight> w_a;
  std::optional<Weight> w_a_prime;
  int violations = 0;
};

// One trial; throws InvariantViolation (after writing a repro bundle when
// configured) if the output fails re-verification.
Row run_trial(const Experiment& e, const Family& f, std::uint64_t seed);
// Every (instance, seed) pair on a worker pool, sorted by (instance, seed).
std::vector<Row> run_experiment(const Experiment& e);

std::string to_csv(const std::vector<Row>& rows);
std::vector<Row> parse_csv(const std::string& text);

struct Regression {
  double slope = 0;
  double intercept = 0;
  double r2 = 0;
  int points = 0;
};
// Least squares y = slope * x + intercept.
Regression fit(const std::vector<double>& x, const std::vector<double>& y);
// Least squares through the origin, y = slope * x.
double fit_through_origin(const std::vector<double>& x, const std::vector<double>& y);

// Round-charge predictor: (D + sqrt n) log^2 n for two-ecss and tap-only,
// D log^3 n for three-ecss, (D + sqrt n) log^3 n for k-ecss.
double round_scale(const std::string& algorithm, int n, int diameter);

struct Summary {
  std::string family;
  std::string algorithm;
  int rows = 0;
  std::optional<double> mean_ratio, median_ratio, max_ratio;
  double mean_iterations = 0;
  Regression rounds;  // charged rounds (plus executed for three-ecss) against round_scale
};

std::vector<Summary> summarize(const std::vector<Row>& rows);
std::string format_summary(const std::vector<Summary>& summaries);

}  // namespace kecss::bench
