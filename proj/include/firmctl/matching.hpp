// Bipartite split and maximum matching.
//
// Every node v of the oriented digraph contributes an out-copy u(v) and an
// in-copy w(v); a directed edge s -> t becomes the bipartite edge
// u(s) -- w(t). The minimum number of driver nodes is the number of in-copies
// a maximum matching leaves exposed, with a floor of one.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "firmctl/graph.hpp"

namespace firmctl {

// Borrows the oriented adjacency of the source graph; valid while the graph
// is alive. u(v)'s neighbours are targets[offsets[v] .. offsets[v+1]), sorted
// by dense index; w(v)'s neighbours are the mirror arrays.
struct BipartiteSplit {
  NodeId n = 0;
  std::span<const std::uint64_t> offsets;    // U-side adjacency (out-copies)
  std::span<const NodeId> targets;
  std::span<const std::uint64_t> r_offsets;  // W-side adjacency (in-copies)
  std::span<const NodeId> r_sources;

  std::uint64_t edge_count() const {
    return static_cast<std::uint64_t>(targets.size());
  }
  std::span<const NodeId> u_adjacency(NodeId u) const {
    return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
  }
  std::span<const NodeId> w_adjacency(NodeId w) const {
    return {r_sources.data() + r_offsets[w], r_sources.data() + r_offsets[w + 1]};
  }
};

BipartiteSplit split_bipartite(const GraphView& view);

struct Matching {
  std::vector<NodeId> u_mate;  // u(v) -> matched w index, or kNoNode
  std::vector<NodeId> w_mate;  // w(v) -> matched u index, or kNoNode
  std::uint64_t size = 0;
};

// Hopcroft-Karp, O(E sqrt(N)). Deterministic for a fixed adjacency ordering
// (the split's lists are sorted by dense index), so the returned matching is
// reproducible even though many maximum matchings may exist.
Matching maximum_matching(const BipartiteSplit& split);

// max(N - |M*|, 1): one controller is always needed even for a perfectly
// matched network.
std::uint64_t minimum_driver_count(const GraphView& view);

// Checkers used by tests and by CLI self-checks. Both are independent of the
// Hopcroft-Karp internals: validity is checked pair by pair, maximality by an
// alternating BFS from every exposed in-copy.
bool is_valid_matching(const BipartiteSplit& split, const Matching& m);
bool has_augmenting_path(const BipartiteSplit& split, const Matching& m);

}  // namespace firmctl
