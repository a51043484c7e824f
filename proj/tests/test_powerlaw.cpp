#include <doctest.h>

#include <cmath>

#include "firmctl/powerlaw.hpp"

using namespace firmctl;

TEST_CASE("hurwitz_zeta against reference values") {
  // zeta(2) = pi^2/6, zeta(2.5, 1) = 1.3414872573...
  CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(1.6449340668482264).epsilon(1e-12));
  CHECK(hurwitz_zeta(2.5, 1.0) == doctest::Approx(1.3414872572509171).epsilon(1e-12));
  // zeta(s, a+1) = zeta(s, a) - a^-s
  const double s = 3.3, a = 4.0;
  CHECK(hurwitz_zeta(s, a + 1.0) ==
        doctest::Approx(hurwitz_zeta(s, a) - std::pow(a, -s)).epsilon(1e-12));
  CHECK_THROWS(hurwitz_zeta(0.9, 1.0));
}

TEST_CASE("zipf_sample produces the right head frequencies") {
  const auto sample = zipf_sample(2.5, 1, 200000, 42);
  std::size_t ones = 0, twos = 0;
  for (auto v : sample) {
    if (v == 1) ++ones;
    if (v == 2) ++twos;
  }
  // p(1) = 1/zeta(2.5) = 0.7454..., p(2) = 2^-2.5/zeta(2.5) = 0.1318...
  CHECK(static_cast<double>(ones) / sample.size() ==
        doctest::Approx(0.74544).epsilon(0.01));
  CHECK(static_cast<double>(twos) / sample.size() ==
        doctest::Approx(0.13178).epsilon(0.03));
  // deterministic
  CHECK(zipf_sample(2.5, 1, 100, 7) == zipf_sample(2.5, 1, 100, 7));
}

TEST_CASE("fit_power_law recovers the generating exponent") {
  const auto sample = zipf_sample(2.5, 1, 100000, 4242);
  const PowerLawFit fit = fit_power_law(sample);
  CHECK(fit.gamma > 2.45);
  CHECK(fit.gamma < 2.55);
  CHECK(fit.k_min <= 3);
  CHECK(fit.tail_count >= 10);
}

TEST_CASE("fit_power_law rejects degenerate input") {
  std::vector<std::uint32_t> equal(50, 7);
  CHECK_THROWS(fit_power_law(equal));
  std::vector<std::uint32_t> cycle_degrees = {2, 2, 2};
  CHECK_THROWS(fit_power_law(cycle_degrees));
  std::vector<std::uint32_t> too_few = {1, 2, 3};
  CHECK_THROWS(fit_power_law(too_few));
  std::vector<std::uint32_t> empty;
  CHECK_THROWS(fit_power_law(empty));
}
