#include "firmctl/oracle.hpp"

#include <stdexcept>
#include <vector>

namespace firmctl {

namespace {

struct Enumerator {
  NodeId n;
  std::vector<std::vector<NodeId>> adj;  // out-copy u -> in-copies
  std::uint32_t best = 0;
  std::uint32_t w_used = 0;       // bitmask of covered in-copies
  std::uint32_t exposed_all = 0;  // AND over maximum matchings
  std::uint32_t exposed_any = 0;  // OR over maximum matchings
  bool seen_best = false;

  explicit Enumerator(const GraphView& view) : n(view.node_count()) {
    adj.resize(n);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId w : view.successors(u)) adj[u].push_back(w);
  }

  // Pass 1: maximum cardinality only, with a can't-exceed-best prune.
  void find_best(NodeId u, std::uint32_t size) {
    if (size + (n - u) <= best) return;
    if (u == n) {
      if (size > best) best = size;
      return;
    }
    for (NodeId w : adj[u]) {
      if (!(w_used & (1u << w))) {
        w_used |= 1u << w;
        find_best(u + 1, size + 1);
        w_used &= ~(1u << w);
      }
    }
    find_best(u + 1, size);
  }

  // Pass 2: visit every matching of exactly `best` edges and fold its
  // exposure pattern into the accumulators.
  void enumerate(NodeId u, std::uint32_t size) {
    if (size + (n - u) < best) return;
    if (u == n) {
      if (size == best) {
        const std::uint32_t exposed = ~w_used & ((n == 32 ? 0u : (1u << n)) - 1u);
        if (!seen_best) {
          exposed_all = exposed;
          exposed_any = exposed;
          seen_best = true;
        } else {
          exposed_all &= exposed;
          exposed_any |= exposed;
        }
      }
      return;
    }
    for (NodeId w : adj[u]) {
      if (!(w_used & (1u << w))) {
        w_used |= 1u << w;
        enumerate(u + 1, size + 1);
        w_used &= ~(1u << w);
      }
    }
    enumerate(u + 1, size);
  }
};

}  // namespace

std::uint64_t oracle_max_matching_size(const GraphView& view) {
  if (view.node_count() > kOracleMaxNodes)
    throw std::invalid_argument("oracle is limited to " +
                                std::to_string(kOracleMaxNodes) + " nodes");
  Enumerator e(view);
  e.find_best(0, 0);
  return e.best;
}

ClassificationReport oracle_classify(const GraphView& view) {
  const NodeId n = view.node_count();
  if (n == 0) throw std::invalid_argument("cannot classify an empty graph");
  if (n > kOracleMaxNodes)
    throw std::invalid_argument("oracle is limited to " +
                                std::to_string(kOracleMaxNodes) + " nodes");

  Enumerator e(view);
  e.find_best(0, 0);

  std::vector<NodeClass> labels(n, NodeClass::Ordinary);
  if (e.best == n)  // perfect matching: same special case as classify_nodes
    return finalize_report(view, std::move(labels), 1);

  e.enumerate(0, 0);
  for (NodeId v = 0; v < n; ++v) {
    const std::uint32_t bit = 1u << v;
    if (e.exposed_all & bit)
      labels[v] = NodeClass::NecessaryDriver;
    else if (!(e.exposed_any & bit))
      labels[v] = NodeClass::NecessaryFollower;
  }
  return finalize_report(view, std::move(labels), n - e.best);
}

}  // namespace firmctl
