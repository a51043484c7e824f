#include "firmctl/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace firmctl {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void write_classification_csv(const std::filesystem::path& path,
                              const DirectedGraph& g,
                              const ClassificationReport& report) {
  auto out = open_out(path);
  out << "node_id,class\n";
  for (NodeId v = 0; v < report.n; ++v)
    out << g.id(v) << ',' << to_string(report.labels[v]) << '\n';
  finish(out, path);
}

void write_summary_json(const std::filesystem::path& path,
                        const ClassificationReport& report) {
  nlohmann::json doc;
  doc["orientation"] = to_string(report.orientation);
  doc["nodes"] = report.n;
  doc["edges"] = report.edges;
  doc["driver_count"] = report.driver_count;
  doc["driver_ratio"] = static_cast<double>(report.driver_count) /
                        static_cast<double>(report.n);
  auto& counts = doc["counts"];
  auto& count_shares = doc["count_shares"];
  auto& capital_shares = doc["capital_shares"];
  const char* names[3] = {"necessary_driver", "necessary_follower", "ordinary"};
  for (std::size_t i = 0; i < 3; ++i) {
    counts[names[i]] = report.counts[i];
    count_shares[names[i]] = report.count_shares[i];
    capital_shares[names[i]] = report.capital_shares[i];
  }
  doc["known_capital_total"] = report.known_capital_total;
  doc["unknown_capital_nodes"] = report.unknown_capital_nodes;
  write_json_file(path, doc);
}

void write_industry_shares_csv(const std::filesystem::path& path,
                               const IndustryShareReport& report) {
  auto out = open_out(path);
  out << "industry,nd_share,nf_share,od_share,count\n";
  for (const auto& row : report.rows) {
    out << row.industry << ','
        << format_double(row.shares[0]) << ','
        << format_double(row.shares[1]) << ','
        << format_double(row.shares[2]) << ',' << row.total << '\n';
  }
  finish(out, path);
}

void write_clip_series_csv(const std::filesystem::path& path,
                           const ClipSeriesReport& report) {
  auto out = open_out(path);
  out << "fraction,strategy,orientation,samples,nodes,mean_k,"
         "nd_count_ratio_mean,nd_count_ratio_sd,"
         "nd_capital_ratio_mean,nd_capital_ratio_sd\n";
  for (const auto& row : report.rows) {
    out << format_double(row.fraction) << ','
        << to_string(report.strategy.kind) << ','
        << to_string(report.orientation) << ','
        << row.samples << ',' << row.nodes_kept << ','
        << format_double(row.mean_degree) << ','
        << format_double(row.nd_count_ratio_mean) << ','
        << format_double(row.nd_count_ratio_sd) << ','
        << format_double(row.nd_capital_ratio_mean) << ','
        << format_double(row.nd_capital_ratio_sd) << '\n';
  }
  finish(out, path);
}

void write_degree_stats_csv(const std::filesystem::path& path,
                            const DegreeStats& stats) {
  auto out = open_out(path);
  out << "flavor,k,count,survival\n";
  auto emit = [&](const char* flavor, const DegreeFlavorStats& st) {
    for (std::size_t i = 0; i < st.values.size(); ++i)
      out << flavor << ',' << st.values[i] << ',' << st.counts[i] << ','
          << format_double(st.survival[i]) << '\n';
  };
  emit("in", stats.in_deg);
  emit("out", stats.out_deg);
  emit("total", stats.total);
  finish(out, path);
}

void write_certificate_json(const std::filesystem::path& path,
                            const Certificate& cert, NodeId n,
                            std::span<const NodeId> drivers,
                            const DirectedGraph& g) {
  nlohmann::json doc;
  doc["verdict"] = cert.controllable ? "controllable"
                                     : "not_controllable_at_trials";
  doc["rank"] = cert.rank;
  doc["nodes"] = n;
  doc["trials_run"] = cert.trials_run;
  doc["modulus"] = cert.modulus;
  doc["seed"] = cert.seed;
  auto ids = nlohmann::json::array();
  for (NodeId d : drivers) ids.push_back(g.id(d));
  doc["drivers"] = std::move(ids);
  doc["driver_count"] = drivers.size();
  write_json_file(path, doc);
}

void write_matching_csv(const std::filesystem::path& path,
                        const DirectedGraph& g, const GraphView& view,
                        const Matching& m) {
  auto out = open_out(path);
  out << "node_id,matched_parent_id\n";
  for (NodeId v = 0; v < view.node_count(); ++v) {
    out << g.id(v) << ',';
    if (m.w_mate[v] != kNoNode) out << g.id(m.w_mate[v]);
    out << '\n';
  }
  finish(out, path);
}

nlohmann::json ingest_report_json(const IngestReport& report) {
  nlohmann::json doc;
  doc["records"] = report.records;
  doc["nodes"] = report.nodes;
  doc["edges"] = report.edges;
  doc["duplicates_dropped"] = report.duplicates_dropped;
  doc["self_loops_dropped"] = report.self_loops_dropped;
  return doc;
}

nlohmann::json attribute_report_json(const AttributeReport& report) {
  nlohmann::json doc;
  doc["rows"] = report.rows;
  doc["matched"] = report.matched;
  doc["unmatched"] = report.unmatched;
  doc["unknown_capital"] = report.unknown_capital;
  doc["unknown_industry"] = report.unknown_industry;
  return doc;
}

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
  finish(out, path);
}

}  // namespace firmctl
