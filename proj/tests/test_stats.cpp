#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "plpcov/config.hpp"
#include "plpcov/rng.hpp"
#include "plpcov/stats.hpp"

using namespace plpcov;
using Catch::Approx;

TEST_CASE("Kolmogorov tail probability") {
  // asymptotic P(sqrt(n) D > 1.36) = 0.049...
  CHECK(kolmogorov_pvalue(1.36 / std::sqrt(1e6), 1000000) == Approx(0.0494).margin(5e-4));
  CHECK(kolmogorov_pvalue(0.0, 100) == Approx(1.0));
  CHECK(kolmogorov_pvalue(1.0, 100) < 1e-12);
}

TEST_CASE("KS test accepts the true law and rejects a shifted one") {
  Rng rng(1, 0);
  std::vector<double> x(5000);
  for (auto& v : x) v = rng.exponential(2.0);
  auto F = [](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-2.0 * t); };
  auto G = [](double t) { return t <= 0.0 ? 0.0 : 1.0 - std::exp(-2.3 * t); };
  const auto good = ks_test(x, F);
  CHECK(good.samples == 5000);
  CHECK(good.p_value > 0.01);
  CHECK(ks_test(x, G).p_value < 1e-6);
}

TEST_CASE("KS p-values are uniform under the null") {
  std::vector<double> p;
  for (std::uint64_t k = 0; k < 400; ++k) {
    Rng rng(2, k);
    std::vector<double> u(200);
    for (auto& v : u) v = rng.uniform();
    p.push_back(ks_test_uniform(u).p_value);
  }
  CHECK(ks_test_uniform(p).p_value > 0.001);
}

TEST_CASE("chi-square with tail pooling") {
  const std::vector<double> obs{50, 30, 15, 4, 1};
  const std::vector<double> exp{50, 30, 15, 4, 1};
  const auto t = chi_square_test(obs, exp);
  CHECK(t.statistic == Approx(0.0).margin(1e-12));
  CHECK(t.dof == 3.0);  // last cell pooled into the one before
  CHECK(t.p_value == Approx(1.0));
  const std::vector<double> off{70, 20, 5, 4, 1};
  CHECK(chi_square_test(off, exp).p_value < 0.01);
  // Poisson counts against their own law
  Rng rng(3, 0);
  std::vector<double> o(12, 0.0), e(12, 0.0);
  const int n = 20000;
  for (int i = 0; i < n; ++i) o[std::min<std::uint64_t>(rng.poisson(2.5), 11)] += 1.0;
  double acc = 0.0;
  for (int k = 0; k < 11; ++k) {
    e[k] = n * std::exp(-2.5 + k * std::log(2.5) - std::lgamma(k + 1.0));
    acc += e[k];
  }
  e[11] = n - acc;
  CHECK(chi_square_test(o, e).p_value > 0.01);
  CHECK_THROWS_AS(chi_square_test(std::vector<double>{1.0}, std::vector<double>{}), ParameterError);
}

TEST_CASE("Wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 100, 0.95);
  CHECK(lo == Approx(0.4038).margin(1e-4));
  CHECK(hi == Approx(0.5962).margin(1e-4));
  const auto [l0, h0] = wilson_interval(0, 20, 0.95);
  CHECK(l0 == 0.0);
  CHECK(h0 > 0.0);
  const auto [l1, h1] = wilson_interval(20, 20, 0.95);
  CHECK(h1 == Approx(1.0));
  CHECK(l1 < 1.0);
}
