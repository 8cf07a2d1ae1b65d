#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "kecss/graph.hpp"
#include "kecss/rooted_tree.hpp"

namespace kecss {

inline constexpr int kMaxAugmentationLinks = 20;
inline constexpr int kMaxExactEdges = 18;
inline constexpr int kMaxCutPairEdges = 64;

struct OracleReport {
  std::uint64_t hash = 0;
  Weight opt = 0;
  EdgeSet witness;  // the links added, or the whole subgraph for exact_k_ecss
  std::uint64_t enumerated = 0;  // subsets tested for feasibility
  double elapsed_seconds = 0;
  bool cached = false;
};

// Results keyed by (instance hash, problem, k), one record per line:
// `hash problem k opt witness-edge-ids` with ids comma-separated or "-".
class OracleCache {
 public:
  static constexpr const char* kHeader = "# kecss oracle cache v1";

  OracleCache() = default;
  // Loads `path` if it exists; save() writes back to it.
  explicit OracleCache(std::string path);

  std::optional<OracleReport> find(std::uint64_t hash, const std::string& problem, int k) const;
  void store(const std::string& problem, int k, const OracleReport& report);
  void save() const;
  std::size_t size() const { return records_.size(); }

  static std::string format(std::uint64_t hash, const std::string& problem, int k, const OracleReport& report);

 private:
  std::string path_;
  std::map<std::tuple<std::uint64_t, std::string, int>, std::pair<Weight, EdgeSet>> records_;
};

// Hash of (g, h) used as the cache key of augmentation instances.
std::uint64_t instance_hash(const Graph& g, const EdgeSet& h);

// Cheapest link set A with h + A k-edge-connected; links are the edges of g
// outside h. Subsets are tried by increasing weight; among equal weights the
// lexicographically smallest sorted id list wins.
OracleReport exact_min_augmentation(const Graph& g, const EdgeSet& h, int k, OracleCache* cache = nullptr);

// Cheapest k-edge-connected spanning subgraph, same enumeration order.
OracleReport exact_k_ecss(const Graph& g, int k, OracleCache* cache = nullptr);

// Sequential greedy for TAP: repeatedly the link with the most uncovered path
// edges per unit weight, ties by edge id. Links are the non-tree edges of g.
EdgeSet greedy_tap(const Graph& g, const RootedTree& t);

// Pairs of host edges whose joint removal disconnects the host.
std::vector<std::pair<EdgeId, EdgeId>> cut_pairs_bruteforce(const Graph& g, const EdgeSet& host);

}  // namespace kecss
