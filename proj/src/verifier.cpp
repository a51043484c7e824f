#include "firmctl/verifier.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "firmctl/rng.hpp"

namespace firmctl {

namespace {

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

// Incremental Gaussian eliminator over F_p. Pivot rows are kept normalized
// (leading entry 1) so reduction needs no divisions.
class RowReducer {
 public:
  RowReducer(NodeId n, std::uint64_t p) : n_(n), p_(p) {}

  NodeId rank() const { return static_cast<NodeId>(pivots_.size()); }

  // Reduces v against the basis; returns true (and absorbs the remainder as
  // a new pivot) when v was independent.
  bool insert(std::vector<std::uint64_t> v) {
    for (const auto& [lead, row] : pivots_) {
      const std::uint64_t c = v[lead];
      if (c == 0) continue;
      for (NodeId i = lead; i < n_; ++i)
        v[i] = (v[i] + (p_ - c) * row[i]) % p_;
    }
    NodeId lead = n_;
    for (NodeId i = 0; i < n_; ++i)
      if (v[i] != 0) {
        lead = i;
        break;
      }
    if (lead == n_) return false;
    const std::uint64_t inv = pow_mod(v[lead], p_ - 2);
    for (NodeId i = lead; i < n_; ++i) v[i] = v[i] * inv % p_;
    pivots_.emplace_back(lead, std::move(v));
    return true;
  }

 private:
  std::uint64_t pow_mod(std::uint64_t base, std::uint64_t exp) const {
    std::uint64_t acc = 1;
    base %= p_;
    while (exp) {
      if (exp & 1) acc = acc * base % p_;
      base = base * base % p_;
      exp >>= 1;
    }
    return acc;
  }

  NodeId n_;
  std::uint64_t p_;
  std::vector<std::pair<NodeId, std::vector<std::uint64_t>>> pivots_;
};

// Strongly connected components in topological order (sources first).
// Iterative Tarjan; emission order is reversed at the end.
std::vector<std::vector<NodeId>> scc_topological(const GraphView& view) {
  const NodeId n = view.node_count();
  constexpr std::uint32_t kUnset = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::uint32_t> index(n, kUnset), lowlink(n, 0);
  std::vector<std::uint8_t> on_stack(n, 0);
  std::vector<NodeId> stack;
  std::vector<std::vector<NodeId>> components;
  std::uint32_t counter = 0;

  struct Frame {
    NodeId v;
    std::size_t next_edge;
  };
  std::vector<Frame> call;
  for (NodeId root = 0; root < n; ++root) {
    if (index[root] != kUnset) continue;
    call.push_back({root, 0});
    index[root] = lowlink[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto succ = view.successors(f.v);
      if (f.next_edge < succ.size()) {
        const NodeId w = succ[f.next_edge++];
        if (index[w] == kUnset) {
          index[w] = lowlink[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[f.v] = std::min(lowlink[f.v], index[w]);
        }
      } else {
        if (lowlink[f.v] == index[f.v]) {
          components.emplace_back();
          for (;;) {
            const NodeId w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            components.back().push_back(w);
            if (w == f.v) break;
          }
        }
        const NodeId done = f.v;
        call.pop_back();
        if (!call.empty())
          lowlink[call.back().v] =
              std::min(lowlink[call.back().v], lowlink[done]);
      }
    }
  }
  std::reverse(components.begin(), components.end());
  return components;
}

}  // namespace

WeightedSystem build_system(const GraphView& view,
                            std::span<const NodeId> drivers,
                            std::uint64_t seed, std::uint64_t modulus,
                            NodeId max_nodes) {
  const NodeId n = view.node_count();
  if (n == 0) throw std::invalid_argument("empty graph");
  if (n > max_nodes)
    throw std::invalid_argument(
        "verification is capped at " + std::to_string(max_nodes) +
        " nodes (graph has " + std::to_string(n) + ")");
  if (drivers.empty()) throw std::invalid_argument("empty driver set");
  for (NodeId d : drivers)
    if (d >= n) throw std::out_of_range("driver index out of range");
  if (modulus >= (1ULL << 32) || !is_prime(modulus))
    throw std::invalid_argument("modulus must be a prime below 2^32");
  if (modulus <= static_cast<std::uint64_t>(n) * n)
    throw std::invalid_argument("modulus must exceed N^2");

  WeightedSystem sys;
  sys.n = n;
  sys.modulus = modulus;
  sys.seed = seed;
  sys.drivers.assign(drivers.begin(), drivers.end());

  SplitMix64 rng(seed);
  view.for_each_edge([&](NodeId s, NodeId t) {
    sys.edges.emplace_back(s, t);
    sys.weights.push_back(rng.below(modulus - 1) + 1);
  });

  // Wire controller branches into any cycle cluster the drivers cannot
  // reach. Components are scanned in topological order so that a cluster
  // already covered through an earlier attachment is not wired twice.
  std::vector<std::uint8_t> reachable(n, 0);
  std::vector<NodeId> frontier;
  auto mark = [&](NodeId v) {
    if (!reachable[v]) {
      reachable[v] = 1;
      frontier.push_back(v);
    }
  };
  auto spread = [&] {
    while (!frontier.empty()) {
      const NodeId v = frontier.back();
      frontier.pop_back();
      for (NodeId w : view.successors(v)) mark(w);
    }
  };
  for (NodeId d : drivers) mark(d);
  spread();
  std::uint32_t next_column = 0;
  for (const auto& component : scc_topological(view)) {
    if (component.size() < 2) continue;  // no cycle without self-loops
    bool covered = false;
    for (NodeId v : component)
      if (reachable[v]) {
        covered = true;
        break;
      }
    if (covered) continue;
    const NodeId entry = *std::min_element(component.begin(), component.end());
    sys.attachments.push_back(
        {next_column, entry, rng.below(modulus - 1) + 1});
    next_column = (next_column + 1) % static_cast<std::uint32_t>(drivers.size());
    mark(entry);
    spread();
  }
  return sys;
}

NodeId controllability_rank(const WeightedSystem& sys) {
  const NodeId n = sys.n;
  const std::uint64_t p = sys.modulus;
  RowReducer reducer(n, p);

  // One Krylov vector per controller column, advanced in lockstep: block k
  // holds A^k b_j for every column j.
  std::vector<std::vector<std::uint64_t>> vecs;
  vecs.reserve(sys.drivers.size());
  for (NodeId d : sys.drivers) {
    std::vector<std::uint64_t> e(n, 0);
    e[d] = 1;
    vecs.push_back(std::move(e));
  }
  for (const auto& at : sys.attachments)
    vecs[at.column][at.node] = at.weight;

  std::vector<std::uint64_t> next(n);
  for (NodeId block = 0; block < n; ++block) {
    bool grew = false;
    for (auto& v : vecs) {
      if (block > 0) {
        next.assign(n, 0);
        for (std::size_t i = 0; i < sys.edges.size(); ++i) {
          const auto [s, t] = sys.edges[i];
          next[t] = (next[t] + sys.weights[i] * v[s]) % p;
        }
        v = next;
      }
      if (reducer.insert(v)) grew = true;
      if (reducer.rank() == n) return n;
    }
    // A whole block inside the current span means the Krylov space is
    // A-invariant and cannot grow further.
    if (!grew) break;
  }
  return reducer.rank();
}

Certificate verify_driver_set(const GraphView& view,
                              std::span<const NodeId> drivers,
                              std::uint32_t trials, std::uint64_t seed,
                              std::uint64_t modulus, NodeId max_nodes) {
  if (trials == 0) throw std::invalid_argument("trials must be positive");
  Certificate cert;
  cert.modulus = modulus;
  cert.seed = seed;
  for (std::uint32_t t = 0; t < trials; ++t) {
    const WeightedSystem sys = build_system(
        view, drivers, derive_seed(seed, t), modulus, max_nodes);
    const NodeId rank = controllability_rank(sys);
    cert.trials_run = t + 1;
    if (rank > cert.rank) cert.rank = rank;
    if (rank == view.node_count()) {
      cert.controllable = true;
      break;
    }
  }
  return cert;
}

}  // namespace firmctl
