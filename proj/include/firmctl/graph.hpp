// Core graph storage for firm transaction networks.
//
// Edges are stored once, in goods-flow orientation supplier -> client, as a
// pair of CSR indexes (forward and reverse). Demand-side analyses run on a
// reversal view that shares the same storage. Graphs are immutable once
// built and safe to read from any number of threads.

#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace firmctl {

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();
inline constexpr std::int32_t kUnknownIndustry = -1;

// Control propagates supplier->client on the supply side (edges as stored)
// and client->supplier on the demand side (reversed view).
enum class ControlDirection { SupplySide, DemandSide };

const char* to_string(ControlDirection d);
ControlDirection direction_from_string(const std::string& s);

// The 19 JSIC division labels used by default: divisions A..R with
// S (government) and T (unclassifiable) omitted and I (wholesale and retail
// trade) split into I1 (wholesale) and I2 (retail).
const std::vector<std::string>& default_industry_divisions();

struct FirmRecord {
  std::string id;
  double capital = 0.0;
  bool capital_known = false;
  std::int32_t industry = kUnknownIndustry;  // index into industry_labels()
};

// Node attribute columns, kept struct-of-arrays. All vectors sized N.
struct AttributeTable {
  std::vector<double> capital;
  std::vector<std::uint8_t> capital_known;
  std::vector<std::int32_t> industry;          // kUnknownIndustry when absent
  std::vector<std::string> industry_labels;    // the configured division set
};

class DirectedGraph {
 public:
  struct BuildCounts {
    std::uint64_t self_loops_dropped = 0;
    std::uint64_t duplicates_dropped = 0;
  };

  DirectedGraph() = default;

  // Canonical constructor: drops self-loops, deduplicates, sorts adjacency
  // by dense index (the deterministic ordering the matcher relies on).
  static DirectedGraph from_edges(NodeId node_count,
                                  std::vector<std::pair<NodeId, NodeId>> edges,
                                  BuildCounts* counts = nullptr);

  NodeId node_count() const { return n_; }
  std::uint64_t edge_count() const { return static_cast<std::uint64_t>(out_targets_.size()); }

  std::span<const NodeId> successors(NodeId v) const {
    return {out_targets_.data() + out_offsets_[v],
            out_targets_.data() + out_offsets_[v + 1]};
  }
  std::span<const NodeId> predecessors(NodeId v) const {
    return {in_sources_.data() + in_offsets_[v],
            in_sources_.data() + in_offsets_[v + 1]};
  }
  std::uint32_t out_degree(NodeId v) const {
    return static_cast<std::uint32_t>(out_offsets_[v + 1] - out_offsets_[v]);
  }
  std::uint32_t in_degree(NodeId v) const {
    return static_cast<std::uint32_t>(in_offsets_[v + 1] - in_offsets_[v]);
  }

  std::span<const std::uint64_t> out_offsets() const { return out_offsets_; }
  std::span<const NodeId> out_targets() const { return out_targets_; }
  std::span<const std::uint64_t> in_offsets() const { return in_offsets_; }
  std::span<const NodeId> in_sources() const { return in_sources_; }

  // Visit every stored edge (supplier, client) in sorted order.
  template <typename F>
  void for_each_edge(F&& f) const {
    for (NodeId s = 0; s < n_; ++s)
      for (std::uint64_t i = out_offsets_[s]; i < out_offsets_[s + 1]; ++i)
        f(s, out_targets_[i]);
  }

  // --- identifiers ------------------------------------------------------
  // Synthetic graphs carry no id table; the dense index doubles as the id.
  bool has_ids() const { return !ids_.empty(); }
  std::string id(NodeId v) const {
    return has_ids() ? ids_[v] : std::to_string(v);
  }
  std::optional<NodeId> index_of(const std::string& id) const;
  void set_ids(std::vector<std::string> ids);

  // --- attributes -------------------------------------------------------
  bool has_attributes() const { return !attrs_.capital.empty(); }
  void attach_attributes(AttributeTable attrs);
  double capital(NodeId v) const { return attrs_.capital[v]; }
  bool capital_known(NodeId v) const {
    return has_attributes() && attrs_.capital_known[v] != 0;
  }
  std::int32_t industry(NodeId v) const {
    return has_attributes() ? attrs_.industry[v] : kUnknownIndustry;
  }
  const std::vector<std::string>& industry_labels() const {
    return attrs_.industry_labels;
  }
  FirmRecord record(NodeId v) const;

  bool same_edges(const DirectedGraph& other) const {
    return n_ == other.n_ && out_offsets_ == other.out_offsets_ &&
           out_targets_ == other.out_targets_;
  }

 private:
  NodeId n_ = 0;
  std::vector<std::uint64_t> out_offsets_;  // size n+1
  std::vector<NodeId> out_targets_;
  std::vector<std::uint64_t> in_offsets_;
  std::vector<NodeId> in_sources_;
  std::vector<std::string> ids_;
  std::unordered_map<std::string, NodeId> id_index_;
  AttributeTable attrs_;
};

// Orientation view over shared storage. SupplySide is the identity view;
// DemandSide swaps the successor/predecessor roles.
class GraphView {
 public:
  GraphView(const DirectedGraph& g, ControlDirection d)
      : graph_(&g), reversed_(d == ControlDirection::DemandSide) {}

  const DirectedGraph& graph() const { return *graph_; }
  ControlDirection direction() const {
    return reversed_ ? ControlDirection::DemandSide
                     : ControlDirection::SupplySide;
  }

  NodeId node_count() const { return graph_->node_count(); }
  std::uint64_t edge_count() const { return graph_->edge_count(); }

  std::span<const NodeId> successors(NodeId v) const {
    return reversed_ ? graph_->predecessors(v) : graph_->successors(v);
  }
  std::span<const NodeId> predecessors(NodeId v) const {
    return reversed_ ? graph_->successors(v) : graph_->predecessors(v);
  }
  std::uint32_t out_degree(NodeId v) const {
    return reversed_ ? graph_->in_degree(v) : graph_->out_degree(v);
  }
  std::uint32_t in_degree(NodeId v) const {
    return reversed_ ? graph_->out_degree(v) : graph_->in_degree(v);
  }

  template <typename F>
  void for_each_edge(F&& f) const {
    if (!reversed_) {
      graph_->for_each_edge(f);
    } else {
      const NodeId n = node_count();
      for (NodeId t = 0; t < n; ++t)
        for (NodeId s : graph_->predecessors(t)) f(t, s);
    }
  }

 private:
  friend GraphView oriented_view(const GraphView&, ControlDirection);
  const DirectedGraph* graph_;
  bool reversed_;
};

inline GraphView oriented_view(const DirectedGraph& g, ControlDirection d) {
  return GraphView(g, d);
}

// Composition: a DemandSide view of a DemandSide view is the original
// orientation (reversal is an involution).
inline GraphView oriented_view(const GraphView& v, ControlDirection d) {
  GraphView out = v;
  if (d == ControlDirection::DemandSide) out.reversed_ = !out.reversed_;
  return out;
}

// Induced subgraph on `keep` (ascending dense indices, no duplicates).
// Ids and attributes carry over; nodes are re-indexed to [0, keep.size()).
DirectedGraph induced_subgraph(const DirectedGraph& g,
                               std::span<const NodeId> keep);

}  // namespace firmctl
