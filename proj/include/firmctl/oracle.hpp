// Brute-force classification oracle for desk-size graphs.
//
// Enumerates every maximum matching of the bipartite split by exhaustive
// search over the out-copies and labels nodes from exposure across the whole
// family: exposed in every maximum matching -> necessary driver, exposed in
// none -> necessary follower, otherwise ordinary. Deliberately shares no code
// with the Hopcroft-Karp path so the two can check each other.

#pragma once

#include <cstdint>

#include "firmctl/classify.hpp"
#include "firmctl/graph.hpp"

namespace firmctl {

inline constexpr NodeId kOracleMaxNodes = 12;

ClassificationReport oracle_classify(const GraphView& view);

// Maximum matching cardinality by exhaustive search; the independent route
// to minimum_driver_count for small graphs.
std::uint64_t oracle_max_matching_size(const GraphView& view);

}  // namespace firmctl
