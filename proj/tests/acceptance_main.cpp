// Acceptance suite: one check per command-line argument (1..8), all of them
// when run bare. Prints one PASS/FAIL line per criterion and exits nonzero
// if any failed.

#include <sys/resource.h>
#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "firmctl/classify.hpp"
#include "firmctl/experiments.hpp"
#include "firmctl/graph_io.hpp"
#include "firmctl/oracle.hpp"
#include "firmctl/powerlaw.hpp"
#include "firmctl/reports.hpp"
#include "firmctl/rng.hpp"
#include "firmctl/verifier.hpp"

using namespace firmctl;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Peak resident set size in GiB, from the kernel's accounting. Prefers
// VmHWM (true high-water mark); falls back to getrusage, whose ru_maxrss is
// reported in KiB on Linux.
double peak_rss_gib() {
  std::ifstream in("/proc/self/status");
  std::string line;
  while (std::getline(in, line)) {
    if (line.rfind("VmHWM:", 0) == 0) {
      std::istringstream ss(line.substr(6));
      double kb = 0.0;
      ss >> kb;
      return kb / (1024.0 * 1024.0);
    }
  }
  struct rusage usage {};
  if (getrusage(RUSAGE_SELF, &usage) == 0 && usage.ru_maxrss > 0)
    return static_cast<double>(usage.ru_maxrss) / (1024.0 * 1024.0);
  return -1.0;
}

DirectedGraph random_digraph(NodeId n, double p, SplitMix64& rng) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId s = 0; s < n; ++s)
    for (NodeId t = 0; t < n; ++t)
      if (s != t && rng.unit() < p) edges.emplace_back(s, t);
  return DirectedGraph::from_edges(n, std::move(edges));
}

// --- 1. classify_nodes == oracle_classify on 1000 random digraphs ---------

Outcome criterion_oracle_equivalence() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(0xACCE01);
  int graphs = 0;
  for (int rep = 0; rep < 1000; ++rep) {
    const NodeId n = 1 + static_cast<NodeId>(rng.below(8));
    const DirectedGraph g = random_digraph(n, 0.3, rng);
    for (auto dir :
         {ControlDirection::SupplySide, ControlDirection::DemandSide}) {
      const GraphView view(g, dir);
      const ClassificationReport fast = classify_nodes(view);
      const ClassificationReport slow = oracle_classify(view);
      if (fast.labels != slow.labels) {
        out.pass = false;
        out.detail = "label mismatch on graph " + std::to_string(rep);
        return out;
      }
      const std::uint64_t brute = oracle_max_matching_size(view);
      const std::uint64_t expect = n > brute ? n - brute : 1;
      if (minimum_driver_count(view) != expect ||
          fast.driver_count != expect) {
        out.pass = false;
        out.detail = "driver count mismatch on graph " + std::to_string(rep);
        return out;
      }
    }
    ++graphs;
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d graphs x 2 orientations, zero disagreements, %.1fs "
                "(limit 60s)",
                graphs, secs);
  out.detail = buf;
  out.pass = secs < 60.0;
  return out;
}

// --- 2. Kalman verification of extracted driver sets ----------------------

Outcome criterion_kalman() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  SplitMix64 rng(0xACCE02);
  int verified = 0, removals = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const NodeId n = 1 + static_cast<NodeId>(rng.below(12));
    const DirectedGraph g = random_digraph(n, 0.3, rng);
    const GraphView view(g, ControlDirection::SupplySide);
    const std::vector<NodeId> drivers = extract_driver_set(view);
    const Certificate cert =
        verify_driver_set(view, drivers, 3, rng.next());
    if (!cert.controllable || cert.rank != n) {
      out.pass = false;
      out.detail = "driver set failed verification on graph " +
                   std::to_string(rep);
      return out;
    }
    ++verified;

    // drop one zero-in-degree node; the remaining inputs can never reach it
    std::vector<NodeId> reduced;
    bool dropped = false;
    for (NodeId d : drivers) {
      if (!dropped && view.in_degree(d) == 0) {
        dropped = true;
        continue;
      }
      reduced.push_back(d);
    }
    if (!dropped) continue;  // perfect-matching singleton, nothing to drop
    bool still_controllable;
    if (reduced.empty()) {
      still_controllable = false;  // no inputs at all: rank 0 < N
    } else {
      const Certificate c2 = verify_driver_set(view, reduced, 3, rng.next());
      still_controllable = c2.controllable;
    }
    if (still_controllable) {
      out.pass = false;
      out.detail = "rank stayed full after removing a necessary driver";
      return out;
    }
    ++removals;
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "%d driver sets controllable, %d removals all lost rank, "
                "%.1fs (limit 60s)",
                verified, removals, secs);
  out.detail = buf;
  out.pass = secs < 60.0;
  return out;
}

// --- 3. necessary drivers == in-degree-0 nodes, up to 1e6 nodes ------------

Outcome criterion_structural_identity() {
  Outcome out;
  SplitMix64 rng(0xACCE03);
  auto check_graph = [&](const DirectedGraph& g) -> bool {
    for (auto dir :
         {ControlDirection::SupplySide, ControlDirection::DemandSide}) {
      const GraphView view(g, dir);
      const ClassificationReport rep = classify_nodes(view);
      for (NodeId v = 0; v < g.node_count(); ++v)
        if ((rep.labels[v] == NodeClass::NecessaryDriver) !=
            (view.in_degree(v) == 0))
          return false;
    }
    return true;
  };

  for (int rep = 0; rep < 200; ++rep) {
    const NodeId n = 1 + static_cast<NodeId>(rng.below(40));
    if (!check_graph(random_digraph(n, 0.1, rng))) {
      out.pass = false;
      out.detail = "identity violated on a small graph";
      return out;
    }
  }

  SynthParams sp;
  sp.n = 1'000'000;
  sp.m = 5'000'000;
  sp.seed = 0xACCE03;
  if (!check_graph(synth_firm_network(sp))) {
    out.pass = false;
    out.detail = "identity violated on the million-node synthetic";
    return out;
  }
  out.detail = "200 random graphs and a 1e6-node synthetic, both orientations";
  return out;
}

// --- 4. analytic formula ---------------------------------------------------

Outcome criterion_analytic_formula() {
  Outcome out;
  // independently computed: exp(-1.5) to thirty digits
  const double expected = 0.223130160148429828933280470764;
  const double got = analytic_driver_ratio(3.0, 6.0);
  if (std::abs(got - expected) > 1e-12) {
    out.pass = false;
    out.detail = "analytic_driver_ratio(3, 6) = " + std::to_string(got);
    return out;
  }
  if (analytic_driver_ratio(2.0, 17.5) != 1.0 ||
      analytic_driver_ratio(3.7, 0.0) != 1.0) {
    out.pass = false;
    out.detail = "boundary cases gamma=2 or mean_k=0 are not exact";
    return out;
  }
  out.detail = "exp(-1.5) reproduced to 1e-12; boundaries exact";
  return out;
}

// --- 5. clipping trends on the capital-coupled synthetic -------------------

Outcome criterion_clipping() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  SynthParams sp;
  sp.n = 100'000;
  sp.m = 500'000;
  sp.gamma_out = 2.5;
  sp.gamma_in = 2.5;
  sp.capital_coupling = 0.9;
  sp.seed = 0xACCE05;
  const DirectedGraph g = synth_firm_network(sp);

  const double fractions[] = {0.5, 0.25, 0.125, 0.0625, 0.03125};

  for (auto dir :
       {ControlDirection::SupplySide, ControlDirection::DemandSide}) {
    ClipStrategy random;
    random.kind = ClipStrategy::Kind::Random;
    random.sample_count = 10;
    random.base_seed = 0xBEEF;
    const ClipSeriesReport rnd = clip_series(g, dir, random, fractions);
    for (std::size_t i = 1; i < rnd.rows.size(); ++i) {
      if (rnd.rows[i].nd_count_ratio_mean <
          rnd.rows[i - 1].nd_count_ratio_mean) {
        out.pass = false;
        out.detail = "(a) random ratio decreased between fractions";
        return out;
      }
    }

    ClipStrategy capital;
    capital.kind = ClipStrategy::Kind::CapitalDescending;
    const ClipSeriesReport cap = clip_series(g, dir, capital, fractions);
    const double base = cap.rows[0].nd_count_ratio_mean;
    for (const auto& row : cap.rows) {
      if (row.nd_count_ratio_mean > base + 0.05) {
        out.pass = false;
        out.detail = "(b) capital-order ratio rose above the half-clip value";
        return out;
      }
    }
    for (std::size_t i = 1; i < cap.rows.size(); ++i) {
      if (cap.rows[i].mean_degree <= cap.rows[i - 1].mean_degree) {
        out.pass = false;
        out.detail = "(c) capital-order mean degree failed to increase";
        return out;
      }
    }
  }
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "random non-decreasing, capital bounded and densifying, both "
                "orientations, %.0fs (limit 600s)",
                secs);
  out.detail = buf;
  out.pass = secs < 600.0;
  return out;
}

// --- 6. power-law fit consistency ------------------------------------------

Outcome criterion_power_law() {
  Outcome out;
  int hits = 0;
  for (int rep = 0; rep < 20; ++rep) {
    const auto sample =
        zipf_sample(2.5, 1, 100'000, derive_seed(0xACCE06, rep));
    const PowerLawFit fit = fit_power_law(sample);
    if (fit.gamma >= 2.45 && fit.gamma <= 2.55) ++hits;
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf),
                "%d/20 fits inside [2.45, 2.55] (need 19)", hits);
  out.detail = buf;
  out.pass = hits >= 19;
  return out;
}

// --- 7. full-scale classification ------------------------------------------

Outcome criterion_scale() {
  Outcome out;
  const NodeId n = 1'109'549;
  const std::uint64_t m = 5'106'081;
  const DirectedGraph g = random_graph(n, m, 0xACCE07);
  if (g.node_count() != n || g.edge_count() != m) {
    out.pass = false;
    out.detail = "generator did not hit the target size";
    return out;
  }
  const auto t0 = std::chrono::steady_clock::now();
  std::uint64_t drivers_supply = 0, drivers_demand = 0;
  {
    const ClassificationReport rep =
        classify_nodes(GraphView(g, ControlDirection::SupplySide));
    drivers_supply = rep.driver_count;
  }
  {
    const ClassificationReport rep =
        classify_nodes(GraphView(g, ControlDirection::DemandSide));
    drivers_demand = rep.driver_count;
  }
  const double secs = seconds_since(t0);
  const double gib = peak_rss_gib();
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "N=%u E=%llu classified both orientations in %.1fs "
                "(limit 300s), peak rss %.2f GiB (limit 8); N_D %llu / %llu",
                n, static_cast<unsigned long long>(m), secs, gib,
                static_cast<unsigned long long>(drivers_supply),
                static_cast<unsigned long long>(drivers_demand));
  out.detail = buf;
  out.pass = secs < 300.0 && gib > 0.0 && gib < 8.0 &&
             drivers_supply == drivers_demand;
  return out;
}

// --- 8. CLI determinism -----------------------------------------------------

Outcome criterion_determinism() {
  Outcome out;
  const char* bin = std::getenv("FIRMCTL_BIN");
  if (!bin) {
    out.pass = false;
    out.detail = "FIRMCTL_BIN is not set";
    return out;
  }
  const fs::path work =
      fs::temp_directory_path() /
      ("firmctl_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(work);

  auto shell = [&](const std::string& args) {
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    return std::system(cmd.c_str()) == 0;
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
  };

  bool ok = true;
  std::string why;
  const fs::path synth1 = work / "synth1", synth2 = work / "synth2";
  ok = ok && shell("synth --nodes 5000 --edges 25000 --seed 99 --out " +
                   synth1.string());
  ok = ok && shell("synth --config " + (synth1 / "run_config.json").string() +
                   " --out " + synth2.string());
  // a desk-size graph for the verify step (verification is capped at 64)
  const fs::path small = work / "small";
  ok = ok && shell("synth --nodes 50 --edges 150 --seed 7 --out " +
                   small.string());

  struct Step {
    std::string name, args;
    std::vector<std::string> files;
  };
  const std::string edges = (synth1 / "edges.csv").string();
  const std::string attrs = (synth1 / "attributes.csv").string();
  const std::vector<Step> steps = {
      {"classify",
       "classify --edges " + edges + " --attributes " + attrs +
           " --direction demand",
       {"classification.csv", "summary.json", "industry_shares.csv",
        "run_config.json"}},
      {"clip-series",
       "clip-series --edges " + edges + " --attributes " + attrs +
           " --strategy random --samples 5 --seed 4242",
       {"clip_series.csv", "run_config.json"}},
      {"degree", "degree --edges " + edges,
       {"degree_stats.csv", "degree_summary.json", "run_config.json"}},
      {"verify",
       "verify --edges " + (small / "edges.csv").string() +
           " --trials 3 --seed 31",
       {"certificate.json", "run_config.json"}},
  };

  if (ok) {
    for (const char* name : {"edges.csv", "attributes.csv",
                             "synth_report.json", "run_config.json"})
      if (slurp(synth1 / name) != slurp(synth2 / name)) {
        ok = false;
        why = std::string("synth/") + name;
      }
  }
  for (const Step& step : steps) {
    if (!ok) break;
    const fs::path d1 = work / (step.name + "_1");
    const fs::path d2 = work / (step.name + "_2");
    if (!shell(step.args + " --out " + d1.string()) ||
        !shell(step.name + " --config " + (d1 / "run_config.json").string() +
               " --out " + d2.string())) {
      ok = false;
      why = step.name + " exited nonzero";
      break;
    }
    for (const std::string& f : step.files)
      if (slurp(d1 / f) != slurp(d2 / f)) {
        ok = false;
        why = step.name + "/" + f;
        break;
      }
  }

  std::error_code ec;
  fs::remove_all(work, ec);
  out.pass = ok;
  out.detail = ok ? "synth, classify, clip-series, degree, verify all replay "
                    "byte-identically"
                  : "first difference at " + why;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"oracle equivalence", criterion_oracle_equivalence},
      {"Kalman verification", criterion_kalman},
      {"structural identity", criterion_structural_identity},
      {"analytic formula", criterion_analytic_formula},
      {"clipping reproduction", criterion_clipping},
      {"power-law fit", criterion_power_law},
      {"scale", criterion_scale},
      {"determinism", criterion_determinism},
  };

  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));
  if (selected.empty())
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i)
      selected.insert(i);

  int failures = 0;
  for (int idx : selected) {
    if (idx < 1 || idx > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion %d\n", idx);
      return 2;
    }
    const Criterion& c = criteria[idx - 1];
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    std::printf("[%s] criterion %d (%s): %s\n",
                outcome.pass ? "PASS" : "FAIL", idx, c.name,
                outcome.detail.c_str());
    std::fflush(stdout);
    if (!outcome.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
