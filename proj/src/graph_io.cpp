#include "firmctl/graph_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace firmctl {

namespace {

[[noreturn]] void fail(const std::filesystem::path& path, std::uint64_t line,
                       const std::string& what) {
  throw std::runtime_error(path.string() + ":" + std::to_string(line) + ": " +
                           what);
}

// Splits on the separator, trims a trailing '\r' beforehand.
std::vector<std::string> split_fields(std::string line, char sep) {
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool is_blank(const std::string& line) {
  for (char c : line)
    if (c != ' ' && c != '\t' && c != '\r') return false;
  return true;
}

}  // namespace

DirectedGraph load_edges(const std::filesystem::path& path,
                         const CsvOptions& options, IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge file: " + path.string());

  std::unordered_map<std::string, NodeId> index;
  std::vector<std::string> ids;
  std::vector<std::pair<NodeId, NodeId>> edges;
  auto intern = [&](std::string&& id) -> NodeId {
    auto [it, inserted] = index.try_emplace(std::move(id),
                                            static_cast<NodeId>(ids.size()));
    if (inserted) ids.push_back(it->first);
    return it->second;
  };

  IngestReport rep{};
  std::string line;
  std::uint64_t lineno = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    auto fields = split_fields(std::move(line), options.separator);
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty())
      fail(path, lineno, "expected two non-empty id fields");
    rep.records++;
    const NodeId s = intern(std::move(fields[0]));
    const NodeId t = intern(std::move(fields[1]));
    edges.emplace_back(s, t);
  }
  if (rep.records == 0)
    throw std::runtime_error("edge file has no records: " + path.string());

  DirectedGraph::BuildCounts counts{};
  DirectedGraph g = DirectedGraph::from_edges(
      static_cast<NodeId>(ids.size()), std::move(edges), &counts);
  g.set_ids(std::move(ids));

  rep.nodes = g.node_count();
  rep.edges = g.edge_count();
  rep.duplicates_dropped = counts.duplicates_dropped;
  rep.self_loops_dropped = counts.self_loops_dropped;
  if (report) *report = rep;
  return g;
}

AttributeReport load_attributes(const std::filesystem::path& path,
                                DirectedGraph& graph, const CsvOptions& options,
                                const std::vector<std::string>& industry_set) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open attribute file: " + path.string());

  std::unordered_map<std::string, std::int32_t> industry_index;
  for (std::size_t i = 0; i < industry_set.size(); ++i)
    industry_index.emplace(industry_set[i], static_cast<std::int32_t>(i));

  const NodeId n = graph.node_count();
  AttributeTable at;
  at.capital.assign(n, 0.0);
  at.capital_known.assign(n, 0);
  at.industry.assign(n, kUnknownIndustry);
  at.industry_labels = industry_set;

  AttributeReport rep{};
  std::string line;
  std::uint64_t lineno = 0;
  bool header_pending = options.has_header;
  while (std::getline(in, line)) {
    ++lineno;
    if (is_blank(line)) continue;
    if (header_pending) {
      header_pending = false;
      continue;
    }
    auto fields = split_fields(std::move(line), options.separator);
    if (fields.size() != 3 || fields[0].empty())
      fail(path, lineno, "expected id, capital, industry fields");
    rep.rows++;

    const auto idx = graph.index_of(fields[0]);
    if (!idx) {
      rep.unmatched++;
      continue;
    }
    rep.matched++;
    const NodeId v = *idx;

    const std::string& cap = fields[1];
    if (cap.empty() || cap == "NA" || cap == "na") {
      rep.unknown_capital++;
    } else {
      double value = 0.0;
      const auto res =
          std::from_chars(cap.data(), cap.data() + cap.size(), value);
      if (res.ec != std::errc{} || res.ptr != cap.data() + cap.size())
        fail(path, lineno, "bad capital value '" + cap + "'");
      if (value < 0.0) fail(path, lineno, "negative capital");
      at.capital[v] = value;
      at.capital_known[v] = 1;
    }

    auto it = industry_index.find(fields[2]);
    if (it == industry_index.end()) {
      rep.unknown_industry++;
    } else {
      at.industry[v] = it->second;
    }
  }

  if (rep.rows == 0)
    throw std::runtime_error("attribute file has no records: " + path.string());
  if (rep.unmatched * 2 > rep.rows)
    throw std::runtime_error(
        path.string() + ": " + std::to_string(rep.unmatched) + " of " +
        std::to_string(rep.rows) +
        " attribute ids are not graph nodes; refusing a likely wrong file");

  graph.attach_attributes(std::move(at));
  return rep;
}

void write_edges_csv(const std::filesystem::path& path, const DirectedGraph& g,
                     char separator) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write edge file: " + path.string());
  g.for_each_edge([&](NodeId s, NodeId t) {
    out << g.id(s) << separator << g.id(t) << '\n';
  });
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_attributes_csv(const std::filesystem::path& path,
                          const DirectedGraph& g, char separator) {
  if (!g.has_attributes())
    throw std::invalid_argument("graph has no attributes to write");
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write attribute file: " + path.string());
  char buf[64];
  const auto& labels = g.industry_labels();
  for (NodeId v = 0; v < g.node_count(); ++v) {
    out << g.id(v) << separator;
    if (g.capital_known(v)) {
      std::snprintf(buf, sizeof(buf), "%.10g", g.capital(v));
      out << buf;
    } else {
      out << "NA";
    }
    out << separator;
    const std::int32_t ind = g.industry(v);
    if (ind != kUnknownIndustry) out << labels[static_cast<std::size_t>(ind)];
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace firmctl
