// Plot-ready CSV and JSON emitters for every report type. Formatting is
// pinned (fixed column order, "%.10g" doubles, sorted JSON keys) so a rerun
// of the same configuration writes byte-identical files.

#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "firmctl/classify.hpp"
#include "firmctl/experiments.hpp"
#include "firmctl/graph_io.hpp"
#include "firmctl/matching.hpp"
#include "firmctl/verifier.hpp"

namespace firmctl {

std::string format_double(double v);  // "%.10g"; NaN prints as "nan"

void write_classification_csv(const std::filesystem::path& path,
                              const DirectedGraph& g,
                              const ClassificationReport& report);
void write_summary_json(const std::filesystem::path& path,
                        const ClassificationReport& report);
void write_industry_shares_csv(const std::filesystem::path& path,
                               const IndustryShareReport& report);
void write_clip_series_csv(const std::filesystem::path& path,
                           const ClipSeriesReport& report);
void write_degree_stats_csv(const std::filesystem::path& path,
                            const DegreeStats& stats);
void write_certificate_json(const std::filesystem::path& path,
                            const Certificate& cert, NodeId n,
                            std::span<const NodeId> drivers,
                            const DirectedGraph& g);
void write_matching_csv(const std::filesystem::path& path,
                        const DirectedGraph& g, const GraphView& view,
                        const Matching& m);

nlohmann::json ingest_report_json(const IngestReport& report);
nlohmann::json attribute_report_json(const AttributeReport& report);

void write_json_file(const std::filesystem::path& path,
                     const nlohmann::json& doc);

}  // namespace firmctl
