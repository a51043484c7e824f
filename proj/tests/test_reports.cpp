#include <doctest.h>

#include <nlohmann/json.hpp>

#include "firmctl/reports.hpp"
#include "test_util.hpp"

using namespace firmctl;
using testutil::TempDir;
using testutil::make_graph;
using testutil::slurp;

TEST_CASE("format_double pins the dialect") {
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(1.0 / 3.0) == "0.3333333333");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("classification csv layout") {
  TempDir dir;
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  const auto rep = classify_nodes(GraphView(g, ControlDirection::SupplySide));
  const auto path = dir.path() / "cls.csv";
  write_classification_csv(path, g, rep);
  CHECK(slurp(path) == "node_id,class\n0,ND\n1,NF\n2,NF\n");
}

TEST_CASE("summary json is machine readable and stable") {
  TempDir dir;
  auto g = make_graph(3, {{0, 1}, {0, 2}});
  const auto rep = classify_nodes(GraphView(g, ControlDirection::SupplySide));
  const auto path = dir.path() / "summary.json";
  write_summary_json(path, rep);
  const auto doc = nlohmann::json::parse(slurp(path));
  CHECK(doc["driver_count"] == 2);
  CHECK(doc["orientation"] == "supply");
  CHECK(doc["counts"]["necessary_driver"] == 1);
  CHECK(doc["counts"]["ordinary"] == 2);

  write_summary_json(dir.path() / "summary2.json", rep);
  CHECK(slurp(path) == slurp(dir.path() / "summary2.json"));
}

TEST_CASE("degree stats csv matches the chain example") {
  TempDir dir;
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  const auto path = dir.path() / "deg.csv";
  write_degree_stats_csv(path, degree_stats(g));
  const std::string contents = slurp(path);
  CHECK(contents.find("flavor,k,count,survival\n") == 0);
  CHECK(contents.find("total,1,2,1\n") != std::string::npos);
  CHECK(contents.find("total,2,1,0.3333333333\n") != std::string::npos);
}

TEST_CASE("clip series csv has the pinned header") {
  TempDir dir;
  SplitMix64 rng(9);
  auto g = testutil::random_digraph(30, 0.1, rng);
  ClipStrategy strat;
  strat.kind = ClipStrategy::Kind::Random;
  strat.sample_count = 2;
  strat.base_seed = 4;
  const double fractions[] = {1.0, 0.5};
  const auto series =
      clip_series(g, ControlDirection::SupplySide, strat, fractions);
  const auto path = dir.path() / "clip.csv";
  write_clip_series_csv(path, series);
  const std::string contents = slurp(path);
  CHECK(contents.find("fraction,strategy,orientation,samples,nodes,mean_k,"
                      "nd_count_ratio_mean,nd_count_ratio_sd,"
                      "nd_capital_ratio_mean,nd_capital_ratio_sd\n") == 0);
  CHECK(contents.find("1,random,supply,2,30,") != std::string::npos);
  // no capital attributes: the capital columns are nan
  CHECK(contents.find(",nan,nan\n") != std::string::npos);
}

TEST_CASE("certificate json round trip") {
  TempDir dir;
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  const GraphView view(g, ControlDirection::SupplySide);
  std::vector<NodeId> drivers = {0};
  const auto cert = verify_driver_set(view, drivers, 3, 123);
  const auto path = dir.path() / "cert.json";
  write_certificate_json(path, cert, 3, drivers, g);
  const auto doc = nlohmann::json::parse(slurp(path));
  CHECK(doc["verdict"] == "controllable");
  CHECK(doc["rank"] == 3);
  CHECK(doc["seed"] == 123);
  CHECK(doc["drivers"].size() == 1);
}

TEST_CASE("matching csv lists matched parents") {
  TempDir dir;
  auto g = make_graph(3, {{0, 1}, {1, 2}});
  const GraphView view(g, ControlDirection::SupplySide);
  const auto split = split_bipartite(view);
  const auto m = maximum_matching(split);
  const auto path = dir.path() / "matching.csv";
  write_matching_csv(path, g, view, m);
  CHECK(slurp(path) == "node_id,matched_parent_id\n0,\n1,0\n2,1\n");
}

TEST_CASE("industry csv shares") {
  TempDir dir;
  auto g = make_graph(2, {{0, 1}});
  AttributeTable at;
  at.capital = {5.0, 6.0};
  at.capital_known = {1, 1};
  at.industry = {4, 4};  // both in division E
  at.industry_labels = default_industry_divisions();
  g.attach_attributes(std::move(at));
  const auto rep = classify_nodes(GraphView(g, ControlDirection::SupplySide));
  const auto path = dir.path() / "ind.csv";
  write_industry_shares_csv(path, industry_shares(rep, g));
  CHECK(slurp(path) ==
        "industry,nd_share,nf_share,od_share,count\nE,0.5,0.5,0,2\n");
}
