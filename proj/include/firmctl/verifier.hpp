// Kalman rank verification of driver sets on desk-size networks.
//
// The system dx/dt = Ax + Bu is controllable iff the Krylov matrix
// C = (B, AB, A^2 B, ..., A^{N-1} B) has rank N. Weights are drawn over a
// prime field instead of floats: exact arithmetic needs no rank tolerance,
// and by Schwartz-Zippel a random assignment achieves the structural
// (generic) rank except with probability on the order of N^2 / p per trial.

#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "firmctl/graph.hpp"

namespace firmctl {

inline constexpr std::uint64_t kDefaultModulus = 2147483647ULL;  // 2^31 - 1
inline constexpr NodeId kDefaultVerifyCap = 64;

struct WeightedSystem {
  NodeId n = 0;
  std::uint64_t modulus = kDefaultModulus;
  std::uint64_t seed = 0;
  // A's nonzero pattern: entry (t, s) nonzero for each oriented edge s -> t,
  // so that s's state feeds t's derivative.
  std::vector<std::pair<NodeId, NodeId>> edges;  // (source, target)
  std::vector<std::uint64_t> weights;            // uniform in [1, p-1]
  std::vector<NodeId> drivers;  // B column per controller, entry 1 at driver

  // A controller signal may feed several nodes: a cycle cluster that no
  // driver reaches is wired to an existing controller column with a random
  // weight (otherwise one input per spare cycle would be needed, and a
  // single controller could not, even in theory, control every network).
  struct Attachment {
    std::uint32_t column;
    NodeId node;
    std::uint64_t weight;
  };
  std::vector<Attachment> attachments;
};

WeightedSystem build_system(const GraphView& view,
                            std::span<const NodeId> drivers,
                            std::uint64_t seed,
                            std::uint64_t modulus = kDefaultModulus,
                            NodeId max_nodes = kDefaultVerifyCap);

// Rank of the N x (N*M) Krylov matrix over the prime field, built by
// iterated sparse multiplication with incremental row reduction.
// Short-circuits at rank N and when the Krylov space stops growing.
NodeId controllability_rank(const WeightedSystem& system);

struct Certificate {
  bool controllable = false;  // some trial reached rank N
  std::uint32_t trials_run = 0;
  NodeId rank = 0;  // best rank achieved
  std::uint64_t modulus = kDefaultModulus;
  std::uint64_t seed = 0;
};

// Redraws all weights each trial; stops at the first full-rank success.
Certificate verify_driver_set(const GraphView& view,
                              std::span<const NodeId> drivers,
                              std::uint32_t trials, std::uint64_t seed,
                              std::uint64_t modulus = kDefaultModulus,
                              NodeId max_nodes = kDefaultVerifyCap);

}  // namespace firmctl
