#include "firmctl/graph.hpp"

#include <algorithm>

namespace firmctl {

const char* to_string(ControlDirection d) {
  return d == ControlDirection::SupplySide ? "supply" : "demand";
}

ControlDirection direction_from_string(const std::string& s) {
  if (s == "supply") return ControlDirection::SupplySide;
  if (s == "demand") return ControlDirection::DemandSide;
  throw std::invalid_argument("unknown control direction: " + s);
}

const std::vector<std::string>& default_industry_divisions() {
  static const std::vector<std::string> divisions = {
      "A", "B", "C", "D", "E", "F", "G", "H", "I1", "I2",
      "J", "K", "L", "M", "N", "O", "P", "Q", "R"};
  return divisions;
}

DirectedGraph DirectedGraph::from_edges(
    NodeId node_count, std::vector<std::pair<NodeId, NodeId>> edges,
    BuildCounts* counts) {
  BuildCounts local{};
  for (const auto& [s, t] : edges) {
    if (s >= node_count || t >= node_count)
      throw std::out_of_range("edge endpoint out of range");
  }

  // Self-loops first, then duplicates among what remains.
  auto mid = std::remove_if(edges.begin(), edges.end(),
                            [](const auto& e) { return e.first == e.second; });
  local.self_loops_dropped = static_cast<std::uint64_t>(edges.end() - mid);
  edges.erase(mid, edges.end());

  std::sort(edges.begin(), edges.end());
  auto last = std::unique(edges.begin(), edges.end());
  local.duplicates_dropped = static_cast<std::uint64_t>(edges.end() - last);
  edges.erase(last, edges.end());

  DirectedGraph g;
  g.n_ = node_count;
  const std::size_t m = edges.size();

  g.out_offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (const auto& [s, t] : edges) g.out_offsets_[s + 1]++;
  for (std::size_t i = 1; i < g.out_offsets_.size(); ++i)
    g.out_offsets_[i] += g.out_offsets_[i - 1];
  g.out_targets_.resize(m);
  {
    std::vector<std::uint64_t> cursor = g.out_offsets_;
    for (const auto& [s, t] : edges) g.out_targets_[cursor[s]++] = t;
  }

  // Edges are sorted by (s, t); a counting pass over targets leaves each
  // predecessor list sorted by source as well.
  g.in_offsets_.assign(static_cast<std::size_t>(node_count) + 1, 0);
  for (const auto& [s, t] : edges) g.in_offsets_[t + 1]++;
  for (std::size_t i = 1; i < g.in_offsets_.size(); ++i)
    g.in_offsets_[i] += g.in_offsets_[i - 1];
  g.in_sources_.resize(m);
  {
    std::vector<std::uint64_t> cursor = g.in_offsets_;
    for (const auto& [s, t] : edges) g.in_sources_[cursor[t]++] = s;
  }

  if (counts) *counts = local;
  return g;
}

std::optional<NodeId> DirectedGraph::index_of(const std::string& id) const {
  if (!has_ids()) return std::nullopt;
  auto it = id_index_.find(id);
  if (it == id_index_.end()) return std::nullopt;
  return it->second;
}

void DirectedGraph::set_ids(std::vector<std::string> ids) {
  if (ids.size() != n_)
    throw std::invalid_argument("id table size does not match node count");
  ids_ = std::move(ids);
  id_index_.clear();
  id_index_.reserve(ids_.size());
  for (NodeId v = 0; v < n_; ++v) id_index_.emplace(ids_[v], v);
}

void DirectedGraph::attach_attributes(AttributeTable attrs) {
  if (attrs.capital.size() != n_ || attrs.capital_known.size() != n_ ||
      attrs.industry.size() != n_)
    throw std::invalid_argument("attribute table size does not match node count");
  attrs_ = std::move(attrs);
}

FirmRecord DirectedGraph::record(NodeId v) const {
  FirmRecord r;
  r.id = id(v);
  if (has_attributes()) {
    r.capital = attrs_.capital[v];
    r.capital_known = attrs_.capital_known[v] != 0;
    r.industry = attrs_.industry[v];
  }
  return r;
}

DirectedGraph induced_subgraph(const DirectedGraph& g,
                               std::span<const NodeId> keep) {
  const NodeId n = g.node_count();
  std::vector<NodeId> remap(n, kNoNode);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const NodeId v = keep[i];
    if (v >= n) throw std::out_of_range("kept node out of range");
    if (i > 0 && keep[i] <= keep[i - 1])
      throw std::invalid_argument("kept nodes must be strictly ascending");
    remap[v] = static_cast<NodeId>(i);
  }

  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId old_s : keep) {
    const NodeId new_s = remap[old_s];
    for (NodeId old_t : g.successors(old_s))
      if (remap[old_t] != kNoNode) edges.emplace_back(new_s, remap[old_t]);
  }

  DirectedGraph sub = DirectedGraph::from_edges(
      static_cast<NodeId>(keep.size()), std::move(edges));

  if (g.has_ids()) {
    std::vector<std::string> ids;
    ids.reserve(keep.size());
    for (NodeId v : keep) ids.push_back(g.id(v));
    sub.set_ids(std::move(ids));
  }
  if (g.has_attributes()) {
    AttributeTable at;
    at.industry_labels = g.industry_labels();
    at.capital.reserve(keep.size());
    at.capital_known.reserve(keep.size());
    at.industry.reserve(keep.size());
    for (NodeId v : keep) {
      at.capital.push_back(g.capital(v));
      at.capital_known.push_back(g.capital_known(v) ? 1 : 0);
      at.industry.push_back(g.industry(v));
    }
    sub.attach_attributes(std::move(at));
  }
  return sub;
}

}  // namespace firmctl
