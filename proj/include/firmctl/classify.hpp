// Three-way controllability classification of every node.
//
// A node is a necessary driver when it appears in every minimum driver set,
// a necessary follower when it appears in none, and ordinary otherwise.
// Ground truth is matching exposure: with S = { in-copies exposed in some
// maximum matching }, a node is a necessary driver iff its in-copy is
// isolated (in-degree zero), ordinary iff its in-copy lies in S without
// being isolated, and a necessary follower iff its in-copy is outside S.
// S is computed from one maximum matching by a single multi-source
// alternating BFS, O(N + E).

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "firmctl/graph.hpp"
#include "firmctl/matching.hpp"

namespace firmctl {

enum class NodeClass : std::uint8_t {
  NecessaryDriver = 0,
  NecessaryFollower = 1,
  Ordinary = 2,
};

const char* to_string(NodeClass c);  // "ND" / "NF" / "OD"

struct ClassificationReport {
  ControlDirection orientation = ControlDirection::SupplySide;
  NodeId n = 0;
  std::uint64_t edges = 0;
  std::uint64_t driver_count = 0;  // N_D = max(N - |M*|, 1)
  std::vector<NodeClass> labels;
  std::array<std::uint64_t, 3> counts{};      // indexed by NodeClass
  std::array<double, 3> count_shares{};
  std::array<double, 3> capital_shares{};     // over nodes with known capital
  double known_capital_total = 0.0;
  std::uint64_t unknown_capital_nodes = 0;    // excluded from capital shares

  std::uint64_t count(NodeClass c) const {
    return counts[static_cast<std::size_t>(c)];
  }
  double count_share(NodeClass c) const {
    return count_shares[static_cast<std::size_t>(c)];
  }
  double capital_share(NodeClass c) const {
    return capital_shares[static_cast<std::size_t>(c)];
  }
};

// Special case: when the maximum matching is perfect no in-copy is ever
// exposed; the single driver may attach anywhere, so every node is ordinary.
ClassificationReport classify_nodes(const GraphView& view);

// One concrete minimum driver set: the in-copies the computed matching
// leaves exposed (node index ascending), or {0} under a perfect matching.
std::vector<NodeId> extract_driver_set(const GraphView& view);

// Shared by classify_nodes and the brute-force oracle.
ClassificationReport finalize_report(const GraphView& view,
                                     std::vector<NodeClass> labels,
                                     std::uint64_t driver_count);

}  // namespace firmctl
