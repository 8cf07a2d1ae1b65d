#include "kecss/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "kecss/errors.hpp"
#include "kecss/random.hpp"

namespace kecss {

Graph::Graph(int n) : adjacency_(n) {
  if (n < 0) throw PreconditionError("negative vertex count");
}

EdgeId Graph::add_edge(VertexId a, VertexId b, Weight w) {
  const int n = num_vertices();
  if (a < 0 || b < 0 || a >= n || b >= n) {
    throw PreconditionError("edge endpoint out of range: " + std::to_string(a) + " " +
                            std::to_string(b));
  }
  if (a == b) throw PreconditionError("self-loop at vertex " + std::to_string(a));
  if (a > b) std::swap(a, b);
  const auto key = pair_key(a, b);
  if (index_.count(key)) {
    throw PreconditionError("parallel edge " + std::to_string(a) + " " + std::to_string(b));
  }
  const EdgeId id = num_edges();
  edges_.push_back(Edge{id, a, b, w});
  adjacency_[a].push_back(id);
  adjacency_[b].push_back(id);
  index_.emplace(key, id);
  return id;
}

std::optional<EdgeId> Graph::find_edge(VertexId a, VertexId b) const {
  if (a > b) std::swap(a, b);
  auto it = index_.find(pair_key(a, b));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

Weight Graph::max_weight() const {
  Weight best = 0;
  for (const Edge& e : edges_) best = std::max(best, e.weight);
  return best;
}

Weight Graph::min_weight() const {
  if (edges_.empty()) return 0;
  Weight best = edges_.front().weight;
  for (const Edge& e : edges_) best = std::min(best, e.weight);
  return best;
}

Weight Graph::weight_of(std::span<const EdgeId> edges) const {
  Weight total = 0;
  for (EdgeId e : edges) total += edges_[e].weight;
  return total;
}

Graph Graph::with_weights(std::span<const Weight> weights) const {
  if (static_cast<int>(weights.size()) != num_edges()) {
    throw PreconditionError("weight vector size mismatch");
  }
  Graph copy = *this;
  for (auto& e : copy.edges_) e.weight = weights[e.id];
  return copy;
}

Graph Graph::with_unit_weights() const {
  Graph copy = *this;
  for (auto& e : copy.edges_) e.weight = 1;
  return copy;
}

Weight weight_cap(int n, int exponent) {
  unsigned __int128 cap = 1;
  for (int i = 0; i < exponent; ++i) {
    cap *= static_cast<unsigned>(std::max(n, 1));
    if (cap > UINT64_MAX) return UINT64_MAX;
  }
  return static_cast<Weight>(cap);
}

namespace {

bool next_content_line(std::istream& in, std::string& line, int& lineno) {
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

template <class T>
void read_fields(const std::string& line, int lineno, T* out, int count) {
  std::istringstream ss(line);
  for (int i = 0; i < count; ++i) {
    long long value;
    if (!(ss >> value)) throw ParseError(lineno, "expected " + std::to_string(count) + " integers");
    if (value < 0) throw ParseError(lineno, "negative value");
    out[i] = static_cast<T>(value);
  }
  std::string rest;
  if (ss >> rest) throw ParseError(lineno, "trailing token '" + rest + "'");
}

}  // namespace

Graph parse_graph(std::istream& in, int weight_exponent) {
  std::string line;
  int lineno = 0;
  if (!next_content_line(in, line, lineno)) throw ParseError(lineno + 1, "missing header");
  long long header[2];
  read_fields(line, lineno, header, 2);
  const int n = static_cast<int>(header[0]);
  const long long m = header[1];
  Graph g(n);
  const Weight cap = weight_cap(n, weight_exponent);
  for (long long i = 0; i < m; ++i) {
    if (!next_content_line(in, line, lineno)) {
      throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, got " +
                                       std::to_string(i));
    }
    unsigned long long f[3];
    read_fields(line, lineno, f, 3);
    if (f[2] > cap) throw ParseError(lineno, "weight exceeds n^" + std::to_string(weight_exponent));
    try {
      g.add_edge(static_cast<VertexId>(f[0]), static_cast<VertexId>(f[1]), f[2]);
    } catch (const PreconditionError& err) {
      throw ParseError(lineno, err.what());
    }
  }
  if (next_content_line(in, line, lineno)) throw ParseError(lineno, "unexpected extra line");
  return g;
}

Graph parse_graph_string(const std::string& text, int weight_exponent) {
  std::istringstream in(text);
  return parse_graph(in, weight_exponent);
}

Graph load_graph(const std::string& path, int weight_exponent) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return parse_graph(in, weight_exponent);
}

void write_graph(std::ostream& out, const Graph& g) {
  out << g.num_vertices() << ' ' << g.num_edges() << '\n';
  for (const Edge& e : g.edges()) out << e.u << ' ' << e.v << ' ' << e.weight << '\n';
}

std::string graph_to_string(const Graph& g) {
  std::ostringstream out;
  write_graph(out, g);
  return out.str();
}

EdgeMask make_mask(int m, std::span<const EdgeId> edges) {
  EdgeMask mask(m, false);
  for (EdgeId e : edges) mask[e] = true;
  return mask;
}

EdgeMask full_mask(const Graph& g) { return EdgeMask(g.num_edges(), true); }

EdgeSet mask_to_set(const EdgeMask& mask) {
  EdgeSet out;
  for (EdgeId e = 0; e < static_cast<EdgeId>(mask.size()); ++e) {
    if (mask[e]) out.push_back(e);
  }
  return out;
}

EdgeSet normalized(EdgeSet edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

EdgeSet set_union(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  EdgeSet out(a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  return normalized(std::move(out));
}

EdgeSet set_difference(std::span<const EdgeId> a, std::span<const EdgeId> b) {
  EdgeSet x = normalized(EdgeSet(a.begin(), a.end()));
  EdgeSet y = normalized(EdgeSet(b.begin(), b.end()));
  EdgeSet out;
  std::set_difference(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(out));
  return out;
}

std::uint64_t graph_hash(const Graph& g) {
  std::uint64_t h = mix64(static_cast<std::uint64_t>(g.num_vertices()));
  for (const Edge& e : g.edges()) {
    h = mix64(h ^ (static_cast<std::uint64_t>(e.u) << 32 | static_cast<std::uint32_t>(e.v)));
    h = mix64(h ^ e.weight);
  }
  return h;
}

}  // namespace kecss
