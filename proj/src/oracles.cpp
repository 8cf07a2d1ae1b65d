#include "kecss/oracles.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <fstream>
#include <sstream>

#include "kecss/connectivity.hpp"
#include "kecss/errors.hpp"
#include "kecss/random.hpp"

namespace kecss {

namespace {

using Clock = std::chrono::steady_clock;

std::string join_ids(const EdgeSet& ids) {
  if (ids.empty()) return "-";
  std::string out;
  for (std::size_t i = 0; i < ids.size(); ++i) out += (i ? "," : "") + std::to_string(ids[i]);
  return out;
}

EdgeSet parse_ids(const std::string& text) {
  EdgeSet ids;
  if (text == "-") return ids;
  std::istringstream in(text);
  std::string part;
  while (std::getline(in, part, ',')) ids.push_back(static_cast<EdgeId>(std::stol(part)));
  return ids;
}

// Cheapest subset of `links` making base + subset k-edge-connected, by
// increasing weight and then lexicographic sorted id list.
OracleReport enumerate(const Graph& g, const EdgeSet& base, const EdgeSet& links, int k) {
  const auto start = Clock::now();
  const int n = g.num_vertices();
  const int count = static_cast<int>(links.size());
  const std::uint32_t total = std::uint32_t{1} << count;
  std::vector<Weight> weight(total, 0);
  for (std::uint32_t s = 1; s < total; ++s) {
    weight[s] = weight[s & (s - 1)] + g.edge(links[std::countr_zero(s)]).weight;
  }
  std::vector<std::uint32_t> order(total);
  for (std::uint32_t s = 0; s < total; ++s) order[s] = s;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return weight[a] < weight[b]; });

  std::vector<int> base_degree(n, 0);
  for (EdgeId e : base) {
    ++base_degree[g.edge(e).u];
    ++base_degree[g.edge(e).v];
  }
  EdgeMask mask = make_mask(g.num_edges(), base);
  std::vector<int> degree;
  auto feasible = [&](std::uint32_t s) {
    degree = base_degree;
    for (int i = 0; i < count; ++i) {
      if (s >> i & 1) {
        ++degree[g.edge(links[i]).u];
        ++degree[g.edge(links[i]).v];
      }
    }
    if (n >= 2 && std::any_of(degree.begin(), degree.end(), [&](int d) { return d < k; })) return false;
    for (int i = 0; i < count; ++i) mask[links[i]] = s >> i & 1;
    return n < 2 || is_k_edge_connected(g, mask, k);
  };
  auto as_ids = [&](std::uint32_t s) {
    EdgeSet ids;
    for (int i = 0; i < count; ++i) {
      if (s >> i & 1) ids.push_back(links[i]);
    }
    return ids;
  };

  OracleReport r;
  bool found = false;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && weight[order[j]] == weight[order[i]]) ++j;
    for (std::size_t x = i; x < j; ++x) {
      ++r.enumerated;
      if (!feasible(order[x])) continue;
      EdgeSet ids = as_ids(order[x]);
      if (!found || ids < r.witness) r.witness = std::move(ids);
      found = true;
    }
    if (found) {
      r.opt = weight[order[i]];
      break;
    }
    i = j;
  }
  if (!found) throw PreconditionError("oracle: no feasible subset; the graph is not " + std::to_string(k) + "-edge-connected");
  r.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
  return r;
}

void verify_witness(const Graph& g, const EdgeSet& base, const OracleReport& r, int k) {
  if (g.num_vertices() >= 2 && !is_k_edge_connected(g, set_union(base, r.witness), k)) {
    throw InvariantViolation("oracle witness is not " + std::to_string(k) + "-edge-connected");
  }
}

}  // namespace

OracleCache::OracleCache(std::string path) : path_(std::move(path)) {
  std::ifstream in(path_);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (number == 1 && line != kHeader) throw ParseError(number, "unsupported oracle cache version: " + line);
      continue;
    }
    std::istringstream fields(line);
    std::uint64_t hash;
    std::string problem, witness;
    int k;
    Weight opt;
    if (!(fields >> std::hex >> hash >> std::dec >> problem >> k >> opt >> witness)) {
      throw ParseError(number, "malformed oracle cache record");
    }
    records_[{hash, problem, k}] = {opt, parse_ids(witness)};
  }
}

std::optional<OracleReport> OracleCache::find(std::uint64_t hash, const std::string& problem, int k) const {
  auto it = records_.find({hash, problem, k});
  if (it == records_.end()) return std::nullopt;
  OracleReport r;
  r.hash = hash;
  r.opt = it->second.first;
  r.witness = it->second.second;
  r.cached = true;
  return r;
}

void OracleCache::store(const std::string& problem, int k, const OracleReport& report) {
  records_[{report.hash, problem, k}] = {report.opt, report.witness};
}

std::string OracleCache::format(std::uint64_t hash, const std::string& problem, int k, const OracleReport& report) {
  std::ostringstream out;
  out << std::hex << hash << std::dec << ' ' << problem << ' ' << k << ' ' << report.opt << ' '
      << join_ids(report.witness);
  return out.str();
}

void OracleCache::save() const {
  if (path_.empty()) return;
  std::ofstream out(path_);
  if (!out) throw Error("cannot write oracle cache " + path_);
  out << kHeader << '\n';
  for (const auto& [key, value] : records_) {
    OracleReport r;
    r.opt = value.first;
    r.witness = value.second;
    out << format(std::get<0>(key), std::get<1>(key), std::get<2>(key), r) << '\n';
  }
}

std::uint64_t instance_hash(const Graph& g, const EdgeSet& h) {
  std::uint64_t x = graph_hash(g);
  for (EdgeId e : normalized(h)) x = derive_seed(x, static_cast<std::uint64_t>(e));
  return derive_seed(x, h.size());
}

OracleReport exact_min_augmentation(const Graph& g, const EdgeSet& h, int k, OracleCache* cache) {
  if (k < 1) throw PreconditionError("exact_min_augmentation needs k >= 1");
  const EdgeSet base = normalized(h);
  const std::uint64_t hash = instance_hash(g, base);
  if (cache) {
    if (auto hit = cache->find(hash, "aug", k)) return *hit;
  }
  const EdgeMask in_base = make_mask(g.num_edges(), base);
  EdgeSet links;
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (!in_base[e]) links.push_back(e);
  }
  if (static_cast<int>(links.size()) > kMaxAugmentationLinks) {
    throw CapacityError("exact_min_augmentation: " + std::to_string(links.size()) + " links exceed " +
                        std::to_string(kMaxAugmentationLinks));
  }
  OracleReport r = enumerate(g, base, links, k);
  r.hash = hash;
  verify_witness(g, base, r, k);
  if (cache) cache->store("aug", k, r);
  return r;
}

OracleReport exact_k_ecss(const Graph& g, int k, OracleCache* cache) {
  if (k < 1) throw PreconditionError("exact_k_ecss needs k >= 1");
  if (g.num_edges() > kMaxExactEdges) {
    throw CapacityError("exact_k_ecss: " + std::to_string(g.num_edges()) + " edges exceed " +
                        std::to_string(kMaxExactEdges));
  }
  const std::uint64_t hash = instance_hash(g, {});
  if (cache) {
    if (auto hit = cache->find(hash, "kecss", k)) return *hit;
  }
  EdgeSet all(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) all[e] = e;
  OracleReport r = enumerate(g, {}, all, k);
  r.hash = hash;
  verify_witness(g, {}, r, k);
  if (cache) cache->store("kecss", k, r);
  return r;
}

EdgeSet greedy_tap(const Graph& g, const RootedTree& t) {
  std::vector<bool> covered(g.num_edges(), false);
  int uncovered = static_cast<int>(t.tree_edges.size());
  std::vector<EdgeId> links;
  std::vector<std::vector<EdgeId>> path(g.num_edges());
  for (EdgeId e = 0; e < g.num_edges(); ++e) {
    if (t.is_tree_edge(e)) continue;
    links.push_back(e);
    path[e] = t.path(g.edge(e).u, g.edge(e).v);
  }
  EdgeSet chosen;
  std::vector<bool> taken(g.num_edges(), false);
  while (uncovered > 0) {
    EdgeId best = -1;
    std::uint64_t best_count = 0;
    for (EdgeId e : links) {
      if (taken[e]) continue;
      std::uint64_t c = 0;
      for (EdgeId x : path[e]) c += !covered[x];
      if (c == 0) continue;
      if (best < 0) {
        best = e;
        best_count = c;
        continue;
      }
      // c / w(e) > best_count / w(best), with weight 0 as infinite.
      const auto lhs = static_cast<unsigned __int128>(c) * g.edge(best).weight;
      const auto rhs = static_cast<unsigned __int128>(best_count) * g.edge(e).weight;
      const bool e_inf = g.edge(e).weight == 0, b_inf = g.edge(best).weight == 0;
      if ((e_inf && !b_inf) || (!e_inf && !b_inf && lhs > rhs)) {
        best = e;
        best_count = c;
      }
    }
    if (best < 0) throw PreconditionError("greedy_tap: some tree edge has no covering link");
    taken[best] = true;
    chosen.push_back(best);
    for (EdgeId x : path[best]) {
      if (!covered[x]) {
        covered[x] = true;
        --uncovered;
      }
    }
  }
  return normalized(chosen);
}

std::vector<std::pair<EdgeId, EdgeId>> cut_pairs_bruteforce(const Graph& g, const EdgeSet& host) {
  const EdgeSet h = normalized(host);
  if (static_cast<int>(h.size()) > kMaxCutPairEdges) {
    throw CapacityError("cut_pairs_bruteforce: " + std::to_string(h.size()) + " edges exceed " +
                        std::to_string(kMaxCutPairEdges));
  }
  EdgeMask mask = make_mask(g.num_edges(), h);
  std::vector<std::pair<EdgeId, EdgeId>> pairs;
  for (std::size_t i = 0; i < h.size(); ++i) {
    for (std::size_t j = i + 1; j < h.size(); ++j) {
      mask[h[i]] = mask[h[j]] = false;
      if (!is_connected_mask(g, mask)) pairs.emplace_back(h[i], h[j]);
      mask[h[i]] = mask[h[j]] = true;
    }
  }
  return pairs;
}

}  // namespace kecss
