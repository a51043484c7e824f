#include "firmctl/matching.hpp"

#include <limits>

namespace firmctl {

BipartiteSplit split_bipartite(const GraphView& view) {
  BipartiteSplit s;
  s.n = view.node_count();
  const DirectedGraph& g = view.graph();
  if (view.direction() == ControlDirection::SupplySide) {
    s.offsets = g.out_offsets();
    s.targets = g.out_targets();
    s.r_offsets = g.in_offsets();
    s.r_sources = g.in_sources();
  } else {
    s.offsets = g.in_offsets();
    s.targets = g.in_sources();
    s.r_offsets = g.out_offsets();
    s.r_sources = g.out_targets();
  }
  return s;
}

namespace {

constexpr std::uint32_t kUnreached = std::numeric_limits<std::uint32_t>::max();

}  // namespace

Matching maximum_matching(const BipartiteSplit& split) {
  const NodeId n = split.n;
  Matching m;
  m.u_mate.assign(n, kNoNode);
  m.w_mate.assign(n, kNoNode);

  // Greedy seed pass; cuts the number of phases roughly in half.
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId w : split.u_adjacency(u)) {
      if (m.w_mate[w] == kNoNode) {
        m.u_mate[u] = w;
        m.w_mate[w] = u;
        m.size++;
        break;
      }
    }
  }

  std::vector<std::uint32_t> dist(n);
  std::vector<NodeId> queue(n);
  std::vector<std::uint64_t> edge_it(n);
  std::vector<NodeId> path;
  std::vector<NodeId> chosen;
  path.reserve(256);
  chosen.reserve(256);

  // Iterative layered DFS; recursion would overflow the stack on
  // million-node path graphs.
  auto try_augment = [&](NodeId start, std::uint32_t limit) -> bool {
    path.assign(1, start);
    chosen.assign(1, kNoNode);
    edge_it[start] = split.offsets[start];
    while (!path.empty()) {
      const NodeId u = path.back();
      bool descended = false;
      while (edge_it[u] < split.offsets[u + 1]) {
        const NodeId w = split.targets[edge_it[u]++];
        const NodeId mate = m.w_mate[w];
        if (mate == kNoNode) {
          chosen.back() = w;
          for (std::size_t i = 0; i < path.size(); ++i) {
            m.u_mate[path[i]] = chosen[i];
            m.w_mate[chosen[i]] = path[i];
          }
          for (NodeId v : path) dist[v] = kUnreached;  // spent this phase
          return true;
        }
        if (dist[mate] == dist[u] + 1 && dist[mate] <= limit) {
          chosen.back() = w;
          path.push_back(mate);
          chosen.push_back(kNoNode);
          edge_it[mate] = split.offsets[mate];
          descended = true;
          break;
        }
      }
      if (!descended) {
        dist[u] = kUnreached;
        path.pop_back();
        chosen.pop_back();
      }
    }
    return false;
  };

  for (;;) {
    // BFS layering over out-copies, sourced at the exposed ones. `limit` is
    // the first layer adjacent to an exposed in-copy; shortest augmenting
    // paths end there.
    std::size_t head = 0, tail = 0;
    for (NodeId u = 0; u < n; ++u) {
      if (m.u_mate[u] == kNoNode && split.offsets[u] < split.offsets[u + 1]) {
        dist[u] = 0;
        queue[tail++] = u;
      } else {
        dist[u] = kUnreached;
      }
    }
    std::uint32_t limit = kUnreached;
    while (head < tail) {
      const NodeId u = queue[head++];
      if (dist[u] >= limit) break;
      for (NodeId w : split.u_adjacency(u)) {
        const NodeId mate = m.w_mate[w];
        if (mate == kNoNode) {
          if (limit == kUnreached) limit = dist[u];
        } else if (dist[mate] == kUnreached) {
          dist[mate] = dist[u] + 1;
          queue[tail++] = mate;
        }
      }
    }
    if (limit == kUnreached) break;

    std::uint64_t augmented = 0;
    for (NodeId u = 0; u < n; ++u)
      if (m.u_mate[u] == kNoNode && dist[u] == 0 && try_augment(u, limit))
        ++augmented;
    if (augmented == 0) break;
    m.size += augmented;
  }
  return m;
}

std::uint64_t minimum_driver_count(const GraphView& view) {
  const NodeId n = view.node_count();
  if (n == 0) throw std::invalid_argument("empty graph has no driver count");
  const BipartiteSplit split = split_bipartite(view);
  const Matching m = maximum_matching(split);
  const std::uint64_t exposed = n - m.size;
  return exposed > 0 ? exposed : 1;
}

bool is_valid_matching(const BipartiteSplit& split, const Matching& m) {
  const NodeId n = split.n;
  if (m.u_mate.size() != n || m.w_mate.size() != n) return false;
  std::uint64_t pairs = 0;
  for (NodeId u = 0; u < n; ++u) {
    const NodeId w = m.u_mate[u];
    if (w == kNoNode) continue;
    if (w >= n || m.w_mate[w] != u) return false;
    bool present = false;
    for (NodeId cand : split.u_adjacency(u))
      if (cand == w) {
        present = true;
        break;
      }
    if (!present) return false;
    ++pairs;
  }
  for (NodeId w = 0; w < n; ++w) {
    const NodeId u = m.w_mate[w];
    if (u != kNoNode && (u >= n || m.u_mate[u] != w)) return false;
  }
  return pairs == m.size;
}

bool has_augmenting_path(const BipartiteSplit& split, const Matching& m) {
  // Alternating BFS from every exposed in-copy: leave W on a non-matching
  // edge, return on a matching edge. Reaching an exposed out-copy means an
  // augmenting path exists.
  const NodeId n = split.n;
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<NodeId> queue;
  queue.reserve(n);
  for (NodeId w = 0; w < n; ++w)
    if (m.w_mate[w] == kNoNode && split.r_offsets[w] < split.r_offsets[w + 1]) {
      visited[w] = 1;
      queue.push_back(w);
    }
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const NodeId w = queue[head];
    for (NodeId u : split.w_adjacency(w)) {
      if (m.u_mate[u] == kNoNode) return true;
      const NodeId next = m.u_mate[u];
      if (!visited[next]) {
        visited[next] = 1;
        queue.push_back(next);
      }
    }
  }
  return false;
}

}  // namespace firmctl
