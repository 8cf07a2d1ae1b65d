#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "kecss/congest.hpp"
#include "kecss/graph.hpp"
#include "kecss/rooted_tree.hpp"

namespace kecss {

struct BfsResult {
  RootedTree tree;
  int rounds = 0;
};

// Message-passing BFS with echo termination; the root halts once every
// subtree has reported.
BfsResult build_bfs(const Graph& g, VertexId root, const congest::RunOptions& options = {});

struct FragmentSet {
  std::vector<int> fragment_of;  // per vertex
  std::vector<VertexId> roots;   // per fragment, its vertex closest to the tree root
  EdgeSet global_edges;          // tree edges joining two fragments

  int count() const { return static_cast<int>(roots.size()); }
};

// Splits the tree into connected pieces of height at most `height` by cutting
// above every vertex whose remaining subtree reaches that height.
FragmentSet build_fragments(const RootedTree& t, int height);
// Default piece height 2*ceil(sqrt n): at most sqrt(n)/2 + 1 fragments, each of
// diameter at most 4*ceil(sqrt n).
FragmentSet build_fragments(const RootedTree& t);
// Fragments rooted at the given vertices (the tree root is added).
FragmentSet fragments_from_roots(const RootedTree& t, std::vector<VertexId> roots);

int fragment_diameter(const RootedTree& t, const FragmentSet& f, int fragment);

struct MstResult {
  RootedTree tree;
  FragmentSet fragments;
  int phases = 0;
};

int ceil_sqrt(long long n);
int log_star(long long n);
int ceil_log2(long long n);

// Minimum spanning tree under (weight, edge id) order, built by Boruvka
// phases, rooted at `root`.
MstResult build_mst(const Graph& g, VertexId root = 0, congest::RoundLedger* ledger = nullptr,
                    int diameter = -1);

struct Segment {
  VertexId top = -1;          // nearest marked proper ancestor of bottom
  VertexId bottom = -1;       // equals top for a segment with an empty highway
  std::vector<EdgeId> highway;  // tree edges bottom-up from `bottom` to `top`
  std::vector<VertexId> members;  // sorted, includes top and bottom

  bool has_highway() const { return top != bottom; }
};

struct SegmentDecomposition {
  std::vector<Segment> segments;
  std::vector<bool> marked;
  std::vector<int> segment_of_vertex;  // segment holding the vertex's parent edge; -1 at the root
  std::vector<int> segment_of_edge;    // per graph edge; -1 for non-tree edges
  // Skeleton tree over marked vertices.
  VertexId skeleton_root = -1;
  std::vector<VertexId> skeleton_parent;  // -1 for unmarked vertices and the root
  std::vector<int> skeleton_depth;        // -1 for unmarked vertices
  std::vector<int> segment_below;         // marked non-root v -> segment with bottom v

  int count() const { return static_cast<int>(segments.size()); }
  bool is_member(int segment, VertexId v) const;
  std::vector<VertexId> marked_vertices() const;
  // "r_S d_S highway-edge-ids... | member-vertices..." per segment.
  std::string dump() const;
};

SegmentDecomposition decompose_segments(const RootedTree& t, const FragmentSet& f);

// Structural checks; returns human-readable violations (empty when valid).
std::vector<std::string> check_fragments(const RootedTree& t, const FragmentSet& f);
std::vector<std::string> check_segments(const RootedTree& t, const FragmentSet& f,
                                        const SegmentDecomposition& seg);

struct KnownItem {
  EdgeId edge;
  std::uint64_t value;
};

struct VertexKnowledge {
  int segment = -1;
  std::vector<KnownItem> to_top;     // P_{v, r_S}, bottom-up
  std::vector<KnownItem> to_bottom;  // P_{v, d_S}
  // Highway items of every segment the vertex belongs to.
  std::vector<std::pair<int, std::vector<KnownItem>>> highways;
};

struct Dissemination {
  std::vector<VertexKnowledge> vertices;
  std::vector<std::uint64_t> segment_items;  // known to every vertex
};

// Per-segment knowledge each vertex holds after the segment-local broadcasts.
// Items are indexed by edge id and by segment id; widths are checked against
// the message budget.
Dissemination disseminate(const RootedTree& t, const SegmentDecomposition& seg,
                          std::span<const std::uint64_t> edge_items, int edge_item_bits,
                          std::span<const std::uint64_t> segment_items, int segment_item_bits,
                          int budget, congest::RoundLedger* ledger = nullptr, int diameter = 0);

}  // namespace kecss
