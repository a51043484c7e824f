// Discrete power-law fitting and sampling.
//
// Fitting follows the Clauset-Shalizi-Newman recipe: for each candidate
// k_min, the exponent is the discrete maximum-likelihood estimate
// (via the Hurwitz zeta normalizer), and the reported fit is the candidate
// with the smallest Kolmogorov-Smirnov distance on its tail. Exponents use
// the density convention p(k) proportional to k^-gamma; the survival
// function then falls off as k^-(gamma-1).

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "firmctl/rng.hpp"

namespace firmctl {

// Hurwitz zeta sum_{i>=0} (a+i)^-s for s > 1, a >= 1 (Euler-Maclaurin).
double hurwitz_zeta(double s, double a);

struct PowerLawFit {
  double gamma = 0.0;
  std::uint32_t k_min = 1;
  double ks_distance = 0.0;
  std::uint64_t tail_count = 0;  // observations >= k_min
};

// Requires at least 10 observations at or above some candidate k_min and at
// least two distinct values; throws on degenerate input. Non-positive
// entries are outside the model's support and are ignored.
PowerLawFit fit_power_law(std::span<const std::uint32_t> degrees);

// Exact discrete power-law (Zipf) sampler, p(k) ~ k^-gamma for k >= k_min.
// Inverse-CDF on a table capped at one million entries; the mass beyond the
// table (< 1e-7 for gamma > 2) falls back to a continuous-tail inversion.
class ZipfSampler {
 public:
  ZipfSampler(double gamma, std::uint32_t k_min);
  std::uint32_t sample(SplitMix64& rng) const;

 private:
  double gamma_;
  std::uint32_t k_min_;
  std::vector<double> cdf_;
};

std::vector<std::uint32_t> zipf_sample(double gamma, std::uint32_t k_min,
                                       std::size_t count, std::uint64_t seed);

}  // namespace firmctl
