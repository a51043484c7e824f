// firmctl: classify firm networks by structural controllability, verify
// driver sets, and run clipping / degree / synthesis experiments.
//
// Every command resolves its parameters into run_config.json next to its
// outputs; re-running with --config <that file> reproduces the outputs
// byte for byte (the output directory itself is not part of the config).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "firmctl/classify.hpp"
#include "firmctl/experiments.hpp"
#include "firmctl/graph_io.hpp"
#include "firmctl/oracle.hpp"
#include "firmctl/reports.hpp"
#include "firmctl/rng.hpp"
#include "firmctl/verifier.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace firmctl;

namespace {

int log_level() {  // 0 quiet, 1 info, 2 debug
  const char* env = std::getenv("FIRMCTL_LOG");
  if (!env) return 1;
  const std::string v = env;
  if (v == "quiet") return 0;
  if (v == "debug") return 2;
  return 1;
}

void info(const std::string& msg) {
  if (log_level() >= 1) std::cerr << "firmctl: " << msg << '\n';
}

std::uint64_t fresh_seed() {
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  json doc;
  in >> doc;
  return doc;
}

void write_run_config(const fs::path& out_dir, const json& params) {
  write_json_file(out_dir / "run_config.json", params);
}

CsvOptions csv_options(const json& params) {
  CsvOptions opt;
  const std::string sep = params.value("separator", ",");
  if (sep != "tab" && sep.size() != 1)
    throw std::runtime_error("--sep must be a single character or 'tab'");
  opt.separator = sep == "tab" ? '\t' : sep[0];
  opt.has_header = params.value("header", false);
  return opt;
}

std::vector<std::string> industry_set(const json& params) {
  if (!params.contains("industries")) return default_industry_divisions();
  return params["industries"].get<std::vector<std::string>>();
}

DirectedGraph load_graph(const json& params, const fs::path& out_dir) {
  IngestReport ingest{};
  DirectedGraph g = load_edges(params.at("edges").get<std::string>(),
                               csv_options(params), &ingest);
  json report = ingest_report_json(ingest);
  if (params.contains("attributes")) {
    AttributeReport attrs = load_attributes(
        params["attributes"].get<std::string>(), g, csv_options(params),
        industry_set(params));
    report["attributes"] = attribute_report_json(attrs);
  }
  write_json_file(out_dir / "ingest_report.json", report);
  info("loaded " + std::to_string(g.node_count()) + " nodes, " +
       std::to_string(g.edge_count()) + " edges");
  return g;
}

void check(bool ok, const char* what) {
  if (!ok) throw std::runtime_error(std::string("self-check failed: ") + what);
}

void self_check_classification(const GraphView& view,
                               const ClassificationReport& rep) {
  double share_sum = 0.0, capital_sum = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    share_sum += rep.count_shares[i];
    capital_sum += rep.capital_shares[i];
  }
  check(std::abs(share_sum - 1.0) < 1e-9, "count shares must sum to 1");
  if (rep.known_capital_total > 0.0)
    check(std::abs(capital_sum - 1.0) < 1e-9, "capital shares must sum to 1");
  for (NodeId v = 0; v < rep.n; ++v)
    check((rep.labels[v] == NodeClass::NecessaryDriver) ==
              (view.in_degree(v) == 0),
          "necessary drivers must be exactly the in-degree-0 nodes");
}

// --- classify -------------------------------------------------------------

int cmd_classify(const json& params, const fs::path& out_dir) {
  DirectedGraph g = load_graph(params, out_dir);
  const auto dir =
      direction_from_string(params.value("direction", "supply"));
  const GraphView view(g, dir);

  const ClassificationReport rep = classify_nodes(view);
  self_check_classification(view, rep);

  write_classification_csv(out_dir / "classification.csv", g, rep);
  write_summary_json(out_dir / "summary.json", rep);
  if (g.has_attributes())
    write_industry_shares_csv(out_dir / "industry_shares.csv",
                              industry_shares(rep, g));
  if (params.value("dump_matching", false)) {
    const BipartiteSplit split = split_bipartite(view);
    const Matching m = maximum_matching(split);
    check(is_valid_matching(split, m), "matching must be valid");
    check(!has_augmenting_path(split, m), "matching must be maximum");
    write_matching_csv(out_dir / "matching.csv", g, view, m);
  }
  info("N_D = " + std::to_string(rep.driver_count) + " (" +
       to_string(dir) + " side)");
  return 0;
}

// --- clip-series ----------------------------------------------------------

int cmd_clip_series(const json& params, const fs::path& out_dir) {
  DirectedGraph g = load_graph(params, out_dir);
  const auto dir =
      direction_from_string(params.value("direction", "supply"));

  ClipStrategy strategy;
  strategy.kind = clip_kind_from_string(params.value("strategy", "random"));
  strategy.sample_count = params.value("samples", 10u);
  strategy.base_seed = params.at("seed").get<std::uint64_t>();
  if (strategy.kind == ClipStrategy::Kind::CapitalDescending &&
      !g.has_attributes())
    throw std::runtime_error(
        "capital-order clipping requires an attribute file");

  std::vector<double> fractions =
      params.contains("fractions")
          ? params["fractions"].get<std::vector<double>>()
          : std::vector<double>(default_clip_fractions().begin(),
                                default_clip_fractions().end());

  const ClipSeriesReport rep = clip_series(g, dir, strategy, fractions);
  for (const auto& row : rep.rows) {
    check(row.nd_count_ratio_mean >= 0.0 && row.nd_count_ratio_mean <= 1.0,
          "necessary-driver ratio must lie in [0, 1]");
    check(row.nodes_kept ==
              static_cast<NodeId>(std::llround(row.fraction * g.node_count())),
          "kept node count must equal round(fraction * N)");
  }
  write_clip_series_csv(out_dir / "clip_series.csv", rep);

  if (params.value("degree_stats", false)) {
    for (double f : fractions) {
      const DirectedGraph sub = clip(g, f, strategy, 0);
      char name[64];
      std::snprintf(name, sizeof(name), "degree_stats_f%s.csv",
                    format_double(f).c_str());
      write_degree_stats_csv(out_dir / name, degree_stats(sub));
    }
  }
  return 0;
}

// --- degree ---------------------------------------------------------------

int cmd_degree(const json& params, const fs::path& out_dir) {
  DirectedGraph g = load_graph(params, out_dir);
  const DegreeStats stats = degree_stats(g);
  write_degree_stats_csv(out_dir / "degree_stats.csv", stats);

  json doc;
  doc["nodes"] = stats.n;
  doc["edges"] = stats.edges;
  doc["mean_in"] = stats.in_deg.mean;
  doc["mean_out"] = stats.out_deg.mean;
  doc["mean_total"] = stats.total.mean;
  if (stats.fit_valid) {
    doc["power_law"] = {{"gamma", stats.total_fit.gamma},
                        {"k_min", stats.total_fit.k_min},
                        {"ks_distance", stats.total_fit.ks_distance},
                        {"tail_count", stats.total_fit.tail_count}};
  } else {
    doc["power_law"] = nullptr;
  }
  write_json_file(out_dir / "degree_summary.json", doc);
  return 0;
}

// --- synth ----------------------------------------------------------------

int cmd_synth(const json& params, const fs::path& out_dir) {
  const std::string model = params.value("model", "firm");
  json doc;
  if (model == "er") {
    // uniform G(n, m) comparison network; no attributes
    const DirectedGraph g =
        random_graph(params.at("nodes").get<NodeId>(),
                     params.at("edges").get<std::uint64_t>(),
                     params.at("seed").get<std::uint64_t>());
    write_edges_csv(out_dir / "edges.csv", g);
    doc["nodes"] = g.node_count();
    doc["edges"] = g.edge_count();
    write_json_file(out_dir / "synth_report.json", doc);
    info("synthesized G(n,m) with " + std::to_string(g.edge_count()) +
         " edges");
    return 0;
  }
  if (model != "firm")
    throw std::runtime_error("unknown synth model: " + model);

  SynthParams sp;
  sp.n = params.at("nodes").get<NodeId>();
  sp.m = params.at("edges").get<std::uint64_t>();
  sp.gamma_out = params.value("gamma_out", 2.5);
  sp.gamma_in = params.value("gamma_in", 2.5);
  sp.capital_coupling = params.value("capital_coupling", 0.9);
  sp.industry_count = params.value("industry_count", 19u);
  sp.seed = params.at("seed").get<std::uint64_t>();

  SynthReport srep{};
  const DirectedGraph g = synth_firm_network(sp, &srep);
  write_edges_csv(out_dir / "edges.csv", g);
  write_attributes_csv(out_dir / "attributes.csv", g);

  doc["nodes"] = g.node_count();
  doc["edges"] = srep.edges;
  doc["target_edges"] = srep.target_edges;
  doc["self_loops_removed"] = srep.self_loops_removed;
  doc["multi_edges_removed"] = srep.multi_edges_removed;
  write_json_file(out_dir / "synth_report.json", doc);
  info("synthesized " + std::to_string(g.node_count()) + " nodes, " +
       std::to_string(srep.edges) + " edges");
  return 0;
}

// --- verify ---------------------------------------------------------------

int cmd_verify(const json& params, const fs::path& out_dir) {
  DirectedGraph g = load_graph(params, out_dir);
  const auto dir =
      direction_from_string(params.value("direction", "supply"));
  const GraphView view(g, dir);

  std::vector<NodeId> drivers;
  if (params.contains("drivers")) {
    const std::string path = params["drivers"].get<std::string>();
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open drivers file: " + path);
    std::string line;
    while (std::getline(in, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const auto idx = g.index_of(line);
      if (!idx)
        throw std::runtime_error("driver id not in graph: " + line);
      drivers.push_back(*idx);
    }
  } else {
    drivers = extract_driver_set(view);
    info("no drivers file given; using an extracted minimum driver set of "
         "size " + std::to_string(drivers.size()));
  }

  const Certificate cert = verify_driver_set(
      view, drivers, params.value("trials", 3u),
      params.at("seed").get<std::uint64_t>(),
      params.value("modulus", kDefaultModulus),
      params.value("max_nodes", kDefaultVerifyCap));
  write_certificate_json(out_dir / "certificate.json", cert, view.node_count(),
                         drivers, g);
  info(std::string("verdict: ") +
       (cert.controllable ? "controllable" : "not controllable at trials") +
       ", rank " + std::to_string(cert.rank) + "/" +
       std::to_string(view.node_count()));
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv);

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "firmctl: error: " << e.what() << '\n';
    return 1;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"structural controllability analysis of directed firm networks"};
  app.require_subcommand(1);

  struct CommonOpts {
    std::string edges, attributes, config, out;
    std::string direction = "supply";
    std::string separator = ",";
    bool header = false;
    std::vector<std::string> industries;
  };

  // classify
  auto common_flags = [](CLI::App* cmd, CommonOpts& o, bool with_attrs = true) {
    cmd->add_option("--edges", o.edges, "edge list file (supplier,client)");
    if (with_attrs)
      cmd->add_option("--attributes", o.attributes,
                      "attribute file (id,capital,industry)");
    cmd->add_option("--sep", o.separator, "field separator (default ',', or 'tab')");
    cmd->add_flag("--header", o.header, "skip the first line of input files");
    cmd->add_option("--config", o.config,
                    "replay a run_config.json; other flags are ignored");
    cmd->add_option("--out", o.out, "output directory")->required();
  };

  CommonOpts cls;
  bool cls_dump_matching = false;
  auto* c_classify = app.add_subcommand(
      "classify", "label every node necessary driver / follower / ordinary");
  common_flags(c_classify, cls);
  c_classify->add_option("--direction", cls.direction, "supply or demand");
  c_classify->add_option("--industries", cls.industries,
                         "comma-separated industry labels (default: 19 JSIC divisions)")
      ->delimiter(',');
  c_classify->add_flag("--dump-matching", cls_dump_matching,
                       "also write the maximum matching as CSV");

  CommonOpts cs;
  std::string cs_strategy = "random";
  std::vector<double> cs_fractions;
  std::uint32_t cs_samples = 10;
  std::uint64_t cs_seed = 0;
  bool cs_seed_given = false, cs_degree_stats = false;
  auto* c_clip = app.add_subcommand(
      "clip-series", "classify capital-order or random clippings per fraction");
  common_flags(c_clip, cs);
  c_clip->add_option("--direction", cs.direction, "supply or demand");
  c_clip->add_option("--strategy", cs_strategy, "random or capital");
  c_clip->add_option("--fractions", cs_fractions,
                     "clip fractions in (0,1] (default 1 .. 1/32)")
      ->delimiter(',');
  c_clip->add_option("--samples", cs_samples, "random samples per fraction");
  c_clip->add_option("--seed", cs_seed, "base seed")
      ->each([&](const std::string&) { cs_seed_given = true; });
  c_clip->add_flag("--degree-stats", cs_degree_stats,
                   "write per-fraction degree distributions");

  CommonOpts dg;
  auto* c_degree = app.add_subcommand(
      "degree", "degree histograms, survival functions and power-law fit");
  common_flags(c_degree, dg, false);

  CommonOpts sy;
  NodeId sy_nodes = 0;
  std::uint64_t sy_edges = 0, sy_seed = 0;
  bool sy_seed_given = false;
  double sy_gamma_out = 2.5, sy_gamma_in = 2.5, sy_coupling = 0.9;
  std::uint32_t sy_industries = 19;
  std::string sy_model = "firm";
  auto* c_synth = app.add_subcommand(
      "synth", "generate a synthetic scale-free firm network");
  auto* sy_nodes_opt = c_synth->add_option("--nodes", sy_nodes, "node count");
  auto* sy_edges_opt =
      c_synth->add_option("--edges", sy_edges, "target edge count");
  c_synth->add_option("--model", sy_model,
                      "firm (scale-free with attributes) or er (uniform G(n,m) "
                      "comparison network)");
  c_synth->add_option("--gamma-out", sy_gamma_out, "out-degree exponent (> 2)");
  c_synth->add_option("--gamma-in", sy_gamma_in, "in-degree exponent (> 2)");
  c_synth->add_option("--capital-coupling", sy_coupling,
                      "capital-degree rank coupling in [0,1]");
  c_synth->add_option("--industry-count", sy_industries, "industry labels");
  c_synth->add_option("--seed", sy_seed, "generator seed")
      ->each([&](const std::string&) { sy_seed_given = true; });
  c_synth->add_option("--config", sy.config, "replay a run_config.json");
  c_synth->add_option("--out", sy.out, "output directory")->required();

  CommonOpts vf;
  std::string vf_drivers;
  std::uint32_t vf_trials = 3;
  std::uint64_t vf_seed = 0, vf_modulus = kDefaultModulus;
  NodeId vf_max_nodes = kDefaultVerifyCap;
  bool vf_seed_given = false;
  auto* c_verify = app.add_subcommand(
      "verify", "check a driver set with the Kalman rank condition");
  common_flags(c_verify, vf, false);
  c_verify->add_option("--direction", vf.direction, "supply or demand");
  c_verify->add_option("--drivers", vf_drivers,
                       "driver ids, one per line (default: extract a minimum set)");
  c_verify->add_option("--trials", vf_trials, "weight redraws before giving up");
  c_verify->add_option("--seed", vf_seed, "weight seed")
      ->each([&](const std::string&) { vf_seed_given = true; });
  c_verify->add_option("--modulus", vf_modulus, "prime field modulus");
  c_verify->add_option("--max-nodes", vf_max_nodes, "verification size cap");

  CLI11_PARSE(app, argc, argv);

  try {
    json params;
    std::string out;
    int (*runner)(const json&, const fs::path&) = nullptr;

    auto common_params = [](const CommonOpts& o, bool need_edges = true) {
      json p;
      if (!o.edges.empty())
        p["edges"] = o.edges;
      else if (need_edges && o.config.empty())
        throw std::runtime_error("--edges is required (or use --config)");
      if (!o.attributes.empty()) p["attributes"] = o.attributes;
      p["direction"] = o.direction;
      p["separator"] = o.separator;
      p["header"] = o.header;
      if (!o.industries.empty()) p["industries"] = o.industries;
      return p;
    };

    if (c_classify->parsed()) {
      out = cls.out;
      runner = &cmd_classify;
      if (!cls.config.empty()) {
        params = load_config_file(cls.config);
      } else {
        params = common_params(cls);
        params["command"] = "classify";
        params["dump_matching"] = cls_dump_matching;
      }
    } else if (c_clip->parsed()) {
      out = cs.out;
      runner = &cmd_clip_series;
      if (!cs.config.empty()) {
        params = load_config_file(cs.config);
      } else {
        params = common_params(cs);
        params["command"] = "clip-series";
        params["strategy"] = cs_strategy;
        params["samples"] = cs_samples;
        params["seed"] = cs_seed_given ? cs_seed : fresh_seed();
        if (!cs_fractions.empty()) params["fractions"] = cs_fractions;
        params["degree_stats"] = cs_degree_stats;
      }
    } else if (c_degree->parsed()) {
      out = dg.out;
      runner = &cmd_degree;
      if (!dg.config.empty()) {
        params = load_config_file(dg.config);
      } else {
        params = common_params(dg);
        params["command"] = "degree";
      }
    } else if (c_synth->parsed()) {
      out = sy.out;
      runner = &cmd_synth;
      if (!sy.config.empty()) {
        params = load_config_file(sy.config);
      } else {
        if (!*sy_nodes_opt || !*sy_edges_opt)
          throw std::runtime_error(
              "synth needs --nodes and --edges (or --config)");
        params["command"] = "synth";
        params["model"] = sy_model;
        params["nodes"] = sy_nodes;
        params["edges"] = sy_edges;
        params["gamma_out"] = sy_gamma_out;
        params["gamma_in"] = sy_gamma_in;
        params["capital_coupling"] = sy_coupling;
        params["industry_count"] = sy_industries;
        params["seed"] = sy_seed_given ? sy_seed : fresh_seed();
      }
    } else if (c_verify->parsed()) {
      out = vf.out;
      runner = &cmd_verify;
      if (!vf.config.empty()) {
        params = load_config_file(vf.config);
      } else {
        params = common_params(vf);
        params["command"] = "verify";
        if (!vf_drivers.empty()) params["drivers"] = vf_drivers;
        params["trials"] = vf_trials;
        params["seed"] = vf_seed_given ? vf_seed : fresh_seed();
        params["modulus"] = vf_modulus;
        params["max_nodes"] = vf_max_nodes;
      }
    }

    const fs::path out_dir(out);
    fs::create_directories(out_dir);
    write_run_config(out_dir, params);
    return runner(params, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "firmctl: error: " << e.what() << '\n';
    return 1;
  }
}
