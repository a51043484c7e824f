// Experiment pipelines: network clipping, degree statistics, the analytic
// driver-ratio formula, and synthetic network generation.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "firmctl/classify.hpp"
#include "firmctl/graph.hpp"
#include "firmctl/powerlaw.hpp"

namespace firmctl {

struct ClipStrategy {
  enum class Kind { Random, CapitalDescending };
  Kind kind = Kind::Random;
  std::uint32_t sample_count = 10;  // Random only
  std::uint64_t base_seed = 0;      // Random only
};

const char* to_string(ClipStrategy::Kind k);  // "random" / "capital"
ClipStrategy::Kind clip_kind_from_string(const std::string& s);

// The five clipping fractions plus the unclipped baseline: 2^0 .. 2^-5.
std::span<const double> default_clip_fractions();

// Induced subgraph on round(fraction * N) nodes. Random selection derives
// its stream from (base_seed, fraction, sample_index), so any sample can be
// recomputed independently; capital order ranks unknown-capital nodes last
// and breaks ties by dense index.
DirectedGraph clip(const DirectedGraph& g, double fraction,
                   const ClipStrategy& strategy, std::uint32_t sample_index = 0);

struct ClipSeriesRow {
  double fraction = 1.0;
  std::uint32_t samples = 1;
  NodeId nodes_kept = 0;
  double mean_degree = 0.0;             // mean over samples of 2E/N
  double nd_count_ratio_mean = 0.0;     // necessary drivers / nodes kept
  double nd_count_ratio_sd = 0.0;
  double nd_capital_ratio_mean = 0.0;   // capital share of necessary drivers
  double nd_capital_ratio_sd = 0.0;     // NaN when capital is unknown
};

struct ClipSeriesReport {
  ControlDirection orientation = ControlDirection::SupplySide;
  ClipStrategy strategy;
  std::vector<ClipSeriesRow> rows;
};

// Classifies every clipped network under the given orientation and
// aggregates necessary-driver count and capital ratios. Sample standard
// deviation (n-1 denominator); zero for the unique capital-order network.
// Samples of one fraction run concurrently; per-sample seeds make the
// result identical to a serial run.
ClipSeriesReport clip_series(const DirectedGraph& g, ControlDirection dir,
                             const ClipStrategy& strategy,
                             std::span<const double> fractions =
                                 default_clip_fractions());

struct DegreeFlavorStats {
  std::vector<std::uint32_t> values;   // observed degrees, ascending
  std::vector<std::uint64_t> counts;   // histogram, parallel to values
  std::vector<double> survival;        // P(K >= k), parallel to values
  double mean = 0.0;
};

struct DegreeStats {
  NodeId n = 0;
  std::uint64_t edges = 0;
  DegreeFlavorStats in_deg;
  DegreeFlavorStats out_deg;
  DegreeFlavorStats total;  // in + out; 2E/N mean
  // Power-law fit of the total-degree flavor; absent when the distribution
  // is degenerate (all degrees equal, or too few observations).
  bool fit_valid = false;
  PowerLawFit total_fit;
};

DegreeStats degree_stats(const DirectedGraph& g);

// n_d = exp(-(1/2) * (1 - 1/(gamma-1)) * mean_k): for scale-free networks
// the driver ratio depends only on the degree exponent and the mean degree.
double analytic_driver_ratio(double gamma, double mean_k);

// Directed Erdos-Renyi G(n, m): m distinct ordered pairs without self-loops,
// uniform, seeded. The comparison baseline for the observed network.
DirectedGraph random_graph(NodeId n, std::uint64_t m, std::uint64_t seed);

struct SynthParams {
  NodeId n = 0;
  std::uint64_t m = 0;  // target edge count before simplification
  double gamma_out = 2.5;
  double gamma_in = 2.5;
  double capital_coupling = 0.9;  // 1 = capital is a function of degree
  std::uint32_t industry_count = 19;
  std::uint64_t seed = 0;
};

struct SynthReport {
  std::uint64_t target_edges = 0;
  std::uint64_t self_loops_removed = 0;
  std::uint64_t multi_edges_removed = 0;
  std::uint64_t edges = 0;
};

// Directed configuration model with power-law in/out degree sequences
// (density exponent gamma_*), simplified post hoc. Degrees are drawn from a
// shifted discrete Pareto scaled to the target mean m/n and capped at
// sqrt(m), the structural cutoff below which an uncorrelated simple
// scale-free graph stays faithful to its degree sequence. Capital is a
// power of total degree with multiplicative lognormal noise shrinking to
// zero as capital_coupling approaches 1; industries are a seeded draw with
// degree-dependent weights.
DirectedGraph synth_firm_network(const SynthParams& params,
                                 SynthReport* report = nullptr);

struct IndustryShareRow {
  std::string industry;
  std::array<std::uint64_t, 3> counts{};  // indexed by NodeClass
  std::array<double, 3> shares{};
  std::uint64_t total = 0;
};

struct IndustryShareReport {
  ControlDirection orientation = ControlDirection::SupplySide;
  std::vector<IndustryShareRow> rows;  // configured label order; nodes with
                                       // no industry under "(unknown)" last
};

IndustryShareReport industry_shares(const ClassificationReport& report,
                                    const DirectedGraph& g);

}  // namespace firmctl
