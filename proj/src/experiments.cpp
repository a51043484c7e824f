#include "firmctl/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace firmctl {

const char* to_string(ClipStrategy::Kind k) {
  return k == ClipStrategy::Kind::Random ? "random" : "capital";
}

ClipStrategy::Kind clip_kind_from_string(const std::string& s) {
  if (s == "random") return ClipStrategy::Kind::Random;
  if (s == "capital") return ClipStrategy::Kind::CapitalDescending;
  throw std::invalid_argument("unknown clip strategy: " + s);
}

std::span<const double> default_clip_fractions() {
  static const double fractions[] = {1.0,       0.5,      0.25,
                                     0.125,     0.0625,   0.03125};
  return fractions;
}

namespace {

std::vector<NodeId> capital_descending_order(const DirectedGraph& g) {
  const NodeId n = g.node_count();
  std::vector<NodeId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    const bool ka = g.capital_known(a), kb = g.capital_known(b);
    if (ka != kb) return ka;  // unknown capital ranks last
    if (ka && g.capital(a) != g.capital(b)) return g.capital(a) > g.capital(b);
    return a < b;  // deterministic tie break
  });
  return order;
}

}  // namespace

DirectedGraph clip(const DirectedGraph& g, double fraction,
                   const ClipStrategy& strategy, std::uint32_t sample_index) {
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument("clip fraction must lie in (0, 1]");
  const NodeId n = g.node_count();
  const NodeId kept = static_cast<NodeId>(
      std::llround(fraction * static_cast<double>(n)));

  std::vector<NodeId> keep;
  keep.reserve(kept);
  if (strategy.kind == ClipStrategy::Kind::CapitalDescending) {
    if (!g.has_attributes())
      throw std::invalid_argument(
          "capital-order clipping requires capital attributes");
    const std::vector<NodeId> order = capital_descending_order(g);
    keep.assign(order.begin(), order.begin() + kept);
  } else {
    SplitMix64 rng(derive_seed(strategy.base_seed,
                               std::bit_cast<std::uint64_t>(fraction),
                               sample_index));
    std::vector<NodeId> pool(n);
    std::iota(pool.begin(), pool.end(), 0);
    for (NodeId i = 0; i < kept; ++i) {
      const std::uint64_t j = i + rng.below(n - i);
      std::swap(pool[i], pool[j]);
    }
    keep.assign(pool.begin(), pool.begin() + kept);
  }
  std::sort(keep.begin(), keep.end());
  return induced_subgraph(g, keep);
}

ClipSeriesReport clip_series(const DirectedGraph& g, ControlDirection dir,
                             const ClipStrategy& strategy,
                             std::span<const double> fractions) {
  ClipSeriesReport report;
  report.orientation = dir;
  report.strategy = strategy;

  const std::uint32_t samples =
      strategy.kind == ClipStrategy::Kind::Random ? strategy.sample_count : 1;
  if (samples == 0) throw std::invalid_argument("sample_count must be >= 1");

  struct SampleStats {
    double mean_k, nd_count, nd_capital;
    NodeId nodes;
  };
  auto run_sample = [&](double fraction, std::uint32_t s) -> SampleStats {
    const DirectedGraph sub = clip(g, fraction, strategy, s);
    if (sub.node_count() == 0)
      throw std::invalid_argument("clip fraction keeps zero nodes");
    const ClassificationReport rep = classify_nodes(GraphView(sub, dir));
    SampleStats st;
    st.nodes = sub.node_count();
    st.mean_k = 2.0 * static_cast<double>(sub.edge_count()) /
                static_cast<double>(sub.node_count());
    st.nd_count = rep.count_share(NodeClass::NecessaryDriver);
    st.nd_capital = rep.known_capital_total > 0.0
                        ? rep.capital_share(NodeClass::NecessaryDriver)
                        : std::numeric_limits<double>::quiet_NaN();
    return st;
  };

  const std::uint32_t workers = std::max(
      1u, std::min(samples, std::thread::hardware_concurrency()));

  for (double fraction : fractions) {
    std::vector<SampleStats> stats(samples);
    if (samples == 1 || workers == 1) {
      for (std::uint32_t s = 0; s < samples; ++s)
        stats[s] = run_sample(fraction, s);
    } else {
      std::vector<std::future<SampleStats>> futures;
      futures.reserve(samples);
      for (std::uint32_t s = 0; s < samples; ++s)
        futures.push_back(std::async(std::launch::async, run_sample,
                                     fraction, s));
      for (std::uint32_t s = 0; s < samples; ++s) stats[s] = futures[s].get();
    }

    auto mean_sd = [&](auto pick) -> std::pair<double, double> {
      double mean = 0.0;
      for (const auto& st : stats) mean += pick(st);
      mean /= samples;
      if (samples < 2) return {mean, 0.0};
      double ss = 0.0;
      for (const auto& st : stats) {
        const double d = pick(st) - mean;
        ss += d * d;
      }
      return {mean, std::sqrt(ss / (samples - 1))};
    };

    ClipSeriesRow row;
    row.fraction = fraction;
    row.samples = samples;
    row.nodes_kept = stats[0].nodes;
    row.mean_degree = mean_sd([](const SampleStats& s) { return s.mean_k; }).first;
    std::tie(row.nd_count_ratio_mean, row.nd_count_ratio_sd) =
        mean_sd([](const SampleStats& s) { return s.nd_count; });
    std::tie(row.nd_capital_ratio_mean, row.nd_capital_ratio_sd) =
        mean_sd([](const SampleStats& s) { return s.nd_capital; });
    report.rows.push_back(row);
  }
  return report;
}

namespace {

DegreeFlavorStats flavor_stats(std::span<const std::uint32_t> degrees) {
  DegreeFlavorStats st;
  const std::size_t n = degrees.size();
  std::vector<std::uint32_t> sorted(degrees.begin(), degrees.end());
  std::sort(sorted.begin(), sorted.end());
  double sum = 0.0;
  for (std::size_t i = 0; i < n;) {
    const std::uint32_t k = sorted[i];
    std::size_t j = i;
    while (j < n && sorted[j] == k) ++j;
    st.values.push_back(k);
    st.counts.push_back(j - i);
    // every observation at or after position i is >= k
    st.survival.push_back(static_cast<double>(n - i) / static_cast<double>(n));
    sum += static_cast<double>(k) * static_cast<double>(j - i);
    i = j;
  }
  st.mean = sum / static_cast<double>(n);
  return st;
}

}  // namespace

DegreeStats degree_stats(const DirectedGraph& g) {
  const NodeId n = g.node_count();
  if (n == 0) throw std::invalid_argument("degree stats of an empty graph");
  std::vector<std::uint32_t> in(n), out(n), total(n);
  for (NodeId v = 0; v < n; ++v) {
    in[v] = g.in_degree(v);
    out[v] = g.out_degree(v);
    total[v] = in[v] + out[v];
  }
  DegreeStats st;
  st.n = n;
  st.edges = g.edge_count();
  st.in_deg = flavor_stats(in);
  st.out_deg = flavor_stats(out);
  st.total = flavor_stats(total);
  try {
    st.total_fit = fit_power_law(total);
    st.fit_valid = true;
  } catch (const std::invalid_argument&) {
    // regular graphs and tiny samples have no power-law tail to fit
  }
  return st;
}

double analytic_driver_ratio(double gamma, double mean_k) {
  if (!(gamma > 1.0))
    throw std::invalid_argument("analytic driver ratio requires gamma > 1");
  if (mean_k < 0.0)
    throw std::invalid_argument("mean degree must be non-negative");
  return std::exp(-0.5 * (1.0 - 1.0 / (gamma - 1.0)) * mean_k);
}

namespace {

// Open-addressing set of edge keys. The zero key encodes the self-loop
// (0, 0), which is never inserted, so it can serve as the empty slot.
class EdgeKeySet {
 public:
  explicit EdgeKeySet(std::uint64_t expected) {
    std::size_t cap = 16;
    while (cap < expected * 2) cap <<= 1;
    slots_.assign(cap, 0);
    mask_ = cap - 1;
  }

  bool insert(std::uint64_t key) {
    std::size_t i = mix64(key) & mask_;
    for (;;) {
      if (slots_[i] == 0) {
        slots_[i] = key;
        return true;
      }
      if (slots_[i] == key) return false;
      i = (i + 1) & mask_;
    }
  }

 private:
  std::vector<std::uint64_t> slots_;
  std::size_t mask_;
};

}  // namespace

DirectedGraph random_graph(NodeId n, std::uint64_t m, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("random graph needs n >= 1");
  const auto max_edges = static_cast<unsigned __int128>(n) * (n - 1);
  if (static_cast<unsigned __int128>(m) > max_edges)
    throw std::invalid_argument("requested more edges than n(n-1)");

  SplitMix64 rng(seed);
  EdgeKeySet seen(m);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    const NodeId s = static_cast<NodeId>(rng.below(n));
    NodeId t = static_cast<NodeId>(rng.below(n - 1));
    if (t >= s) ++t;  // skip the diagonal, keeping the draw uniform
    const std::uint64_t key = static_cast<std::uint64_t>(s) * n + t;
    if (seen.insert(key)) edges.emplace_back(s, t);
  }
  return DirectedGraph::from_edges(n, std::move(edges));
}

namespace {

// Mean of floor(c * (U^{-1/(g-1)} - 1)) as a function of c:
// sum_{k>=1} P(X >= k) = sum_k (c/(c+k))^(g-1) = c^(g-1) zeta(g-1, c+1).
double shifted_pareto_floor_mean(double c, double gamma) {
  const double a = gamma - 1.0;
  return std::pow(c, a) * hurwitz_zeta(a, c + 1.0);
}

double solve_degree_scale(double gamma, double target_mean) {
  double lo = 1e-9, hi = 1.0;
  while (shifted_pareto_floor_mean(hi, gamma) < target_mean) hi *= 2.0;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (shifted_pareto_floor_mean(mid, gamma) < target_mean)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::uint32_t> draw_degree_sequence(NodeId n, double gamma,
                                                double scale,
                                                std::uint32_t cap,
                                                SplitMix64& rng) {
  std::vector<std::uint32_t> deg(n);
  const double inv = -1.0 / (gamma - 1.0);
  for (NodeId i = 0; i < n; ++i) {
    for (int attempt = 0;; ++attempt) {
      if (attempt >= 100)
        throw std::runtime_error(
            "degree sequence unrealizable: draws keep exceeding the cap");
      const double x = scale * (std::pow(rng.unit_pos(), inv) - 1.0);
      if (x <= static_cast<double>(cap)) {
        deg[i] = static_cast<std::uint32_t>(x);
        break;
      }
    }
  }
  return deg;
}

void adjust_sequence_sum(std::vector<std::uint32_t>& deg, std::uint64_t target,
                         std::uint32_t cap, SplitMix64& rng) {
  std::uint64_t sum = std::accumulate(deg.begin(), deg.end(), std::uint64_t{0});
  const std::size_t n = deg.size();
  std::uint64_t attempts = 0;
  const std::uint64_t limit = 1000 * (n + target);
  while (sum != target) {
    if (++attempts > limit)
      throw std::runtime_error("degree sequence unrealizable: cannot reach "
                               "the requested edge count");
    const std::size_t i = rng.below(n);
    if (sum < target) {
      if (deg[i] < cap) {
        deg[i]++;
        sum++;
      }
    } else if (deg[i] > 0) {
      deg[i]--;
      sum--;
    }
  }
}

// Average ranks (1-based, ties averaged) of the totals; the rank-correlation
// target for capital.
std::vector<double> average_ranks(const std::vector<std::uint32_t>& values) {
  const std::size_t n = values.size();
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    return values[a] != values[b] ? values[a] < values[b] : a < b;
  });
  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && values[order[j]] == values[order[i]]) ++j;
    const double avg = 0.5 * static_cast<double>(i + 1 + j);  // mean of i+1..j
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
    i = j;
  }
  return ranks;
}

}  // namespace

DirectedGraph synth_firm_network(const SynthParams& params,
                                 SynthReport* report) {
  const NodeId n = params.n;
  const std::uint64_t m = params.m;
  if (n == 0) throw std::invalid_argument("synth network needs n >= 1");
  if (params.gamma_out <= 2.0 || params.gamma_in <= 2.0)
    throw std::invalid_argument("synth network needs gamma > 2");
  if (params.capital_coupling < 0.0 || params.capital_coupling > 1.0)
    throw std::invalid_argument("capital_coupling must lie in [0, 1]");
  if (params.industry_count == 0)
    throw std::invalid_argument("industry_count must be >= 1");
  const auto max_edges = static_cast<unsigned __int128>(n) * (n - 1);
  if (static_cast<unsigned __int128>(m) > max_edges)
    throw std::invalid_argument("requested more edges than n(n-1)");

  const double target_mean = static_cast<double>(m) / static_cast<double>(n);
  const std::uint32_t cap = static_cast<std::uint32_t>(std::min<double>(
      n > 0 ? n - 1 : 0, std::max(1.0, std::sqrt(static_cast<double>(m)))));

  SplitMix64 rng(derive_seed(params.seed, 0x5e9));
  const double c_out = solve_degree_scale(params.gamma_out, target_mean);
  const double c_in = solve_degree_scale(params.gamma_in, target_mean);
  std::vector<std::uint32_t> d_out =
      draw_degree_sequence(n, params.gamma_out, c_out, cap, rng);
  std::vector<std::uint32_t> d_in =
      draw_degree_sequence(n, params.gamma_in, c_in, cap, rng);

  // Production networks show positive in/out degree correlation: firms with
  // many clients tend to have many suppliers. Reusing the out draw for half
  // the nodes gives rank correlation about one half.
  for (NodeId i = 0; i < n; ++i)
    if (rng.next() & 1) d_in[i] = d_out[i];

  adjust_sequence_sum(d_out, m, cap, rng);
  adjust_sequence_sum(d_in, m, cap, rng);

  // Stub pairing: shuffle the in-stubs once, pair positionally.
  std::vector<NodeId> out_stubs, in_stubs;
  out_stubs.reserve(m);
  in_stubs.reserve(m);
  for (NodeId i = 0; i < n; ++i) {
    out_stubs.insert(out_stubs.end(), d_out[i], i);
    in_stubs.insert(in_stubs.end(), d_in[i], i);
  }
  for (std::uint64_t i = m; i > 1; --i) {
    const std::uint64_t j = rng.below(i);
    std::swap(in_stubs[i - 1], in_stubs[j]);
  }
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m);
  for (std::uint64_t i = 0; i < m; ++i)
    edges.emplace_back(out_stubs[i], in_stubs[i]);

  DirectedGraph::BuildCounts counts{};
  DirectedGraph g = DirectedGraph::from_edges(n, std::move(edges), &counts);
  if (report) {
    report->target_edges = m;
    report->self_loops_removed = counts.self_loops_dropped;
    report->multi_edges_removed = counts.duplicates_dropped;
    report->edges = g.edge_count();
  }

  // Capital: a power of total degree times lognormal noise. The noise scale
  // vanishes at coupling 1, where capital becomes a strict function of
  // degree and the Spearman correlation is exactly 1.
  std::vector<std::uint32_t> total(n);
  for (NodeId v = 0; v < n; ++v) total[v] = g.in_degree(v) + g.out_degree(v);
  const double sigma = 5.0 * (1.0 - params.capital_coupling);
  AttributeTable at;
  at.capital.resize(n);
  at.capital_known.assign(n, 1);
  at.industry.resize(n);
  if (params.industry_count == 19) {
    at.industry_labels = default_industry_divisions();
  } else {
    for (std::uint32_t i = 0; i < params.industry_count; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof(buf), "IND%02u", i);
      at.industry_labels.emplace_back(buf);
    }
  }
  const std::vector<double> ranks = average_ranks(total);
  const std::uint32_t labels = params.industry_count;
  for (NodeId v = 0; v < n; ++v) {
    const double noise = sigma > 0.0 ? std::exp(sigma * rng.gaussian()) : 1.0;
    at.capital[v] =
        100.0 * std::pow(static_cast<double>(total[v]) + 1.0, 1.2) * noise;
    // Industry: half the mass on the label picked by the degree percentile,
    // the rest uniform.
    const double percentile = ranks[v] / static_cast<double>(n);
    const auto biased = static_cast<std::uint32_t>(std::min<double>(
        labels - 1, percentile * static_cast<double>(labels)));
    at.industry[v] = static_cast<std::int32_t>(
        (rng.next() & 1) ? biased : rng.below(labels));
  }
  g.attach_attributes(std::move(at));
  return g;
}

IndustryShareReport industry_shares(const ClassificationReport& report,
                                    const DirectedGraph& g) {
  if (!g.has_attributes())
    throw std::invalid_argument("industry shares require attributes");
  if (report.labels.size() != g.node_count())
    throw std::invalid_argument("classification does not match the graph");

  const auto& labels = g.industry_labels();
  std::vector<IndustryShareRow> rows(labels.size() + 1);
  for (std::size_t i = 0; i < labels.size(); ++i) rows[i].industry = labels[i];
  rows.back().industry = "(unknown)";

  for (NodeId v = 0; v < g.node_count(); ++v) {
    const std::int32_t ind = g.industry(v);
    auto& row = ind == kUnknownIndustry ? rows.back()
                                        : rows[static_cast<std::size_t>(ind)];
    row.counts[static_cast<std::size_t>(report.labels[v])]++;
    row.total++;
  }

  IndustryShareReport out;
  out.orientation = report.orientation;
  for (auto& row : rows) {
    if (row.total == 0) continue;  // keep only industries that occur
    for (std::size_t i = 0; i < 3; ++i)
      row.shares[i] =
          static_cast<double>(row.counts[i]) / static_cast<double>(row.total);
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace firmctl
