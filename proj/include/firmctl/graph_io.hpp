// Edge-list and attribute-file ingestion.
//
// Edge file: one `supplier_id<sep>client_id` record per line.
// Attribute file: `id<sep>capital<sep>industry`. An empty or "NA" capital
// field is recorded as unknown, never as zero.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "firmctl/graph.hpp"

namespace firmctl {

struct CsvOptions {
  char separator = ',';
  bool has_header = false;
};

struct IngestReport {
  std::uint64_t records = 0;  // non-empty data lines parsed
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;    // kept after cleanup
  std::uint64_t duplicates_dropped = 0;
  std::uint64_t self_loops_dropped = 0;
};

struct AttributeReport {
  std::uint64_t rows = 0;
  std::uint64_t matched = 0;
  std::uint64_t unmatched = 0;        // ids absent from the graph
  std::uint64_t unknown_capital = 0;  // matched rows without a capital value
  std::uint64_t unknown_industry = 0; // matched rows outside the division set
};

// Builds the graph with dense indices assigned in first-seen order, so the
// same file always produces the same indexing.
DirectedGraph load_edges(const std::filesystem::path& path,
                         const CsvOptions& options = {},
                         IngestReport* report = nullptr);

// Joins attribute rows onto an existing graph. Rows whose id is not a graph
// node are counted, not inserted; if more than half the rows are unmatched
// the file is rejected as a likely mismatch. Nodes without a row keep
// unknown-capital / unknown-industry markers.
AttributeReport load_attributes(
    const std::filesystem::path& path, DirectedGraph& graph,
    const CsvOptions& options = {},
    const std::vector<std::string>& industry_set = default_industry_divisions());

// Writers used by the synth command; one record per line, same dialect as
// the loaders.
void write_edges_csv(const std::filesystem::path& path, const DirectedGraph& g,
                     char separator = ',');
void write_attributes_csv(const std::filesystem::path& path,
                          const DirectedGraph& g, char separator = ',');

}  // namespace firmctl
