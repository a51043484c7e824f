#include "firmctl/powerlaw.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace firmctl {

double hurwitz_zeta(double s, double a) {
  if (s <= 1.0) throw std::invalid_argument("hurwitz_zeta requires s > 1");
  if (a < 1.0) throw std::invalid_argument("hurwitz_zeta requires a >= 1");
  constexpr int kDirect = 18;
  double total = 0.0;
  for (int k = 0; k < kDirect; ++k) total += std::pow(a + k, -s);
  const double b = a + kDirect;
  total += std::pow(b, 1.0 - s) / (s - 1.0);
  total += 0.5 * std::pow(b, -s);
  total += s * std::pow(b, -s - 1.0) / 12.0;
  total -= s * (s + 1.0) * (s + 2.0) * std::pow(b, -s - 3.0) / 720.0;
  total += s * (s + 1.0) * (s + 2.0) * (s + 3.0) * (s + 4.0) *
           std::pow(b, -s - 5.0) / 30240.0;
  return total;
}

namespace {

// Discrete MLE: the log-likelihood n*log zeta(g,kmin) + g*sum(log k) is
// convex in g, so ternary search converges to the optimum.
double mle_exponent(double log_sum, std::uint64_t n, std::uint32_t k_min) {
  const double a = static_cast<double>(k_min);
  auto nll = [&](double g) {
    return static_cast<double>(n) * std::log(hurwitz_zeta(g, a)) + g * log_sum;
  };
  double lo = 1.000001, hi = 25.0;
  for (int it = 0; it < 96; ++it) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (nll(m1) < nll(m2))
      hi = m2;
    else
      lo = m1;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

PowerLawFit fit_power_law(std::span<const std::uint32_t> degrees) {
  std::vector<std::uint32_t> sorted;
  sorted.reserve(degrees.size());
  for (std::uint32_t d : degrees)
    if (d > 0) sorted.push_back(d);
  std::sort(sorted.begin(), sorted.end());
  if (sorted.empty()) throw std::invalid_argument("no positive observations");
  if (sorted.front() == sorted.back())
    throw std::invalid_argument("degenerate input: all observations equal");

  // Suffix sums of log k, so each candidate's tail statistics are O(1).
  const std::size_t total = sorted.size();
  std::vector<double> log_suffix(total + 1, 0.0);
  for (std::size_t i = total; i-- > 0;)
    log_suffix[i] = log_suffix[i + 1] + std::log(static_cast<double>(sorted[i]));

  std::vector<std::uint32_t> unique_vals(sorted.begin(), sorted.end());
  unique_vals.erase(std::unique(unique_vals.begin(), unique_vals.end()),
                    unique_vals.end());

  bool found = false;
  PowerLawFit best;
  for (std::uint32_t k_min : unique_vals) {
    const std::size_t first =
        std::lower_bound(sorted.begin(), sorted.end(), k_min) - sorted.begin();
    const std::uint64_t tail_n = total - first;
    if (tail_n < 10) break;
    if (sorted[first] == sorted.back()) continue;  // single-valued tail

    const double gamma = mle_exponent(log_suffix[first], tail_n, k_min);

    // KS distance over the survival functions at every distinct tail value.
    const double z_kmin = hurwitz_zeta(gamma, k_min);
    double ks = 0.0;
    std::size_t pos = first;
    for (std::uint32_t k : unique_vals) {
      if (k < k_min) continue;
      while (pos < total && sorted[pos] < k) ++pos;
      const double emp = static_cast<double>(total - pos) /
                         static_cast<double>(tail_n);
      const double model = hurwitz_zeta(gamma, k) / z_kmin;
      ks = std::max(ks, std::abs(emp - model));
    }

    if (!found || ks < best.ks_distance) {
      found = true;
      best.gamma = gamma;
      best.k_min = k_min;
      best.ks_distance = ks;
      best.tail_count = tail_n;
    }
  }
  if (!found)
    throw std::invalid_argument(
        "not enough observations for any k_min candidate (need 10)");
  return best;
}

ZipfSampler::ZipfSampler(double gamma, std::uint32_t k_min)
    : gamma_(gamma), k_min_(k_min) {
  if (gamma <= 1.0) throw std::invalid_argument("zipf requires gamma > 1");
  if (k_min < 1) throw std::invalid_argument("zipf requires k_min >= 1");
  const double z = hurwitz_zeta(gamma, k_min);
  constexpr std::size_t kMaxTable = 1'000'000;
  double cum = 0.0;
  cdf_.reserve(4096);
  for (std::size_t i = 0; i < kMaxTable; ++i) {
    const double k = static_cast<double>(k_min) + static_cast<double>(i);
    cum += std::pow(k, -gamma) / z;
    cdf_.push_back(cum);
    if (1.0 - cum < 1e-12) break;
  }
}

std::uint32_t ZipfSampler::sample(SplitMix64& rng) const {
  const double u = rng.unit();
  if (u >= cdf_.back()) {
    // Continuous Pareto inversion of the residual tail.
    const double k_edge = static_cast<double>(k_min_) +
                          static_cast<double>(cdf_.size());
    const double tail = 1.0 - cdf_.back();
    const double r = (1.0 - u) / tail;  // in (0, 1]
    const double k = k_edge * std::pow(r, -1.0 / (gamma_ - 1.0));
    return static_cast<std::uint32_t>(
        std::min(k, 4.0e9));
  }
  const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u,
                                   [](double c, double x) { return c <= x; });
  return k_min_ + static_cast<std::uint32_t>(it - cdf_.begin());
}

std::vector<std::uint32_t> zipf_sample(double gamma, std::uint32_t k_min,
                                       std::size_t count, std::uint64_t seed) {
  ZipfSampler sampler(gamma, k_min);
  SplitMix64 rng(seed);
  std::vector<std::uint32_t> out(count);
  for (auto& v : out) v = sampler.sample(rng);
  return out;
}

}  // namespace firmctl
