#pragma once

#include <vector>

#include "kecss/congest.hpp"
#include "kecss/rooted_tree.hpp"

namespace kecss::congest {

struct BroadcastResult {
  RunStats stats;
  std::vector<std::vector<Message>> held;  // per vertex, items in arrival order
};

// Pipelined downcast of the root's items followed by an echo convergecast.
// The root first sends the item count, then one item per round; a vertex
// acknowledges once it holds every item and all its children acknowledged.
BroadcastResult broadcast_convergecast(const Graph& g, const RootedTree& tree,
                                       const std::vector<Message>& items,
                                       const RunOptions& options = {});

// Token flood from `source`; every vertex halts after forwarding once.
RunStats flood(const Graph& g, VertexId source, const RunOptions& options = {});

}  // namespace kecss::congest
