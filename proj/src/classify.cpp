#include "firmctl/classify.hpp"

#include <stdexcept>

namespace firmctl {

const char* to_string(NodeClass c) {
  switch (c) {
    case NodeClass::NecessaryDriver: return "ND";
    case NodeClass::NecessaryFollower: return "NF";
    case NodeClass::Ordinary: return "OD";
  }
  return "?";
}

ClassificationReport finalize_report(const GraphView& view,
                                     std::vector<NodeClass> labels,
                                     std::uint64_t driver_count) {
  const DirectedGraph& g = view.graph();
  ClassificationReport rep;
  rep.orientation = view.direction();
  rep.n = view.node_count();
  rep.edges = view.edge_count();
  rep.driver_count = driver_count;
  rep.labels = std::move(labels);

  for (NodeClass c : rep.labels) rep.counts[static_cast<std::size_t>(c)]++;
  for (std::size_t i = 0; i < 3; ++i)
    rep.count_shares[i] =
        static_cast<double>(rep.counts[i]) / static_cast<double>(rep.n);

  if (g.has_attributes()) {
    std::array<double, 3> capital_sums{};
    for (NodeId v = 0; v < rep.n; ++v) {
      if (!g.capital_known(v)) {
        rep.unknown_capital_nodes++;
        continue;
      }
      capital_sums[static_cast<std::size_t>(rep.labels[v])] += g.capital(v);
      rep.known_capital_total += g.capital(v);
    }
    if (rep.known_capital_total > 0.0)
      for (std::size_t i = 0; i < 3; ++i)
        rep.capital_shares[i] = capital_sums[i] / rep.known_capital_total;
  } else {
    rep.unknown_capital_nodes = rep.n;
  }
  return rep;
}

ClassificationReport classify_nodes(const GraphView& view) {
  const NodeId n = view.node_count();
  if (n == 0) throw std::invalid_argument("cannot classify an empty graph");

  const BipartiteSplit split = split_bipartite(view);
  const Matching m = maximum_matching(split);
  const std::uint64_t exposed_count = n - m.size;

  std::vector<NodeClass> labels(n, NodeClass::NecessaryFollower);
  if (exposed_count == 0) {
    labels.assign(n, NodeClass::Ordinary);
    return finalize_report(view, std::move(labels), 1);
  }

  // Multi-source alternating BFS over in-copies. From a reachable in-copy w,
  // each adjacent out-copy u is matched (otherwise an augmenting path would
  // exist); u's mate is exposable by flipping the path.
  std::vector<std::uint8_t> in_s(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId w = 0; w < n; ++w)
    if (m.w_mate[w] == kNoNode) {
      in_s[w] = 1;
      queue.push_back(w);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId w = queue[head];
    for (NodeId u : split.w_adjacency(w)) {
      const NodeId next = m.u_mate[u];
      if (next == kNoNode)
        throw std::logic_error("matching is not maximum: free out-copy "
                               "adjacent to an exposable in-copy");
      if (!in_s[next]) {
        in_s[next] = 1;
        queue.push_back(next);
      }
    }
  }

  for (NodeId v = 0; v < n; ++v) {
    if (view.in_degree(v) == 0)
      labels[v] = NodeClass::NecessaryDriver;
    else if (in_s[v])
      labels[v] = NodeClass::Ordinary;
    // otherwise stays NecessaryFollower
  }
  return finalize_report(view, std::move(labels), exposed_count);
}

std::vector<NodeId> extract_driver_set(const GraphView& view) {
  const NodeId n = view.node_count();
  if (n == 0) throw std::invalid_argument("cannot extract drivers of an empty graph");
  const BipartiteSplit split = split_bipartite(view);
  const Matching m = maximum_matching(split);
  std::vector<NodeId> drivers;
  for (NodeId w = 0; w < n; ++w)
    if (m.w_mate[w] == kNoNode) drivers.push_back(w);
  if (drivers.empty()) drivers.push_back(0);
  return drivers;
}

}  // namespace firmctl
