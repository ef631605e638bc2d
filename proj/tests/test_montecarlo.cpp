#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "plpcov/coverage.hpp"
#include "plpcov/distances.hpp"
#include "plpcov/geometry.hpp"
#include "plpcov/montecarlo.hpp"

using namespace plpcov;
using Catch::Approx;

namespace {

const NetworkConfig kFig4 = NetworkConfig::from_transmitter_density(35.0, 35.0, 4.0, 1);

}  // namespace

TEST_CASE("Nakagami gains have unit mean and variance 1/m") {
  for (int m : {1, 3, 8}) {
    Rng rng(4, static_cast<std::uint64_t>(m));
    const int n = 200000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double g = sample_nakagami_gain(m, rng);
      REQUIRE(g > 0.0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    const double var_true = 1.0 / m;
    CHECK(std::abs(mean - 1.0) < 3.0 * std::sqrt(var_true / n));
    // fourth central moment of Gamma(m, 1/m) is 3(m + 2) / m^3
    const double var_se = std::sqrt((3.0 * (m + 2.0) / (m * m * m) - var_true * var_true) / n);
    CHECK(std::abs(var - var_true) < 4.0 * var_se);
  }
}

TEST_CASE("trial records are consistent") {
  const double w = default_window_radius(kFig4);
  for (std::uint64_t t = 0; t < 200; ++t) {
    Rng rng(8, t);
    const auto rec = run_trial(kFig4, w, rng);
    REQUIRE_FALSE(rec.failed);
    CHECK(rec.r >= rec.y_n);
    CHECK(rec.r <= w);
    CHECK((rec.serving_line == 0) == (rec.y_n == 0.0));
    if (!rec.no_interferers) {
      CHECK(rec.sir > 0.0);
      CHECK(rec.covered(rec.sir * 0.999));
      CHECK_FALSE(rec.covered(rec.sir * 1.001));
    }
  }
}

TEST_CASE("a lone transmitter is covered at every threshold") {
  // tiny window: at most the serving node is inside
  const auto c = NetworkConfig::from_transmitter_density(1.0, 1.0, 4.0, 1);
  bool seen = false;
  for (std::uint64_t t = 0; t < 2000 && !seen; ++t) {
    Rng rng(12, t);
    const auto rec = run_trial(c, 0.3, rng);
    if (rec.no_interferers) {
      seen = true;
      CHECK(rec.covered(1e300));
    }
  }
  CHECK(seen);
}

TEST_CASE("estimates are deterministic for any thread count") {
  const std::vector<double> betas{0.1, 1.0, 10.0};
  const double w = default_window_radius(kFig4);
  const auto a = estimate_coverage(kFig4, betas, 5000, w, 42, 1);
  const auto b = estimate_coverage(kFig4, betas, 5000, w, 42, 4);
  REQUIRE(a.coverage.size() == b.coverage.size());
  for (std::size_t i = 0; i < betas.size(); ++i) {
    CHECK(a.coverage[i].covered == b.coverage[i].covered);
    CHECK(a.coverage[i].ci_lo == b.coverage[i].ci_lo);
  }
  CHECK(a.serving_counts == b.serving_counts);
}

TEST_CASE("estimator summaries and intervals") {
  const double w = default_window_radius(kFig4);
  const auto s = estimate_coverage(kFig4, {1e-12, 1.0}, 4000, w, 3);
  CHECK(s.coverage[0].mean == 1.0);
  for (const auto& e : s.coverage) {
    CHECK(e.ci_lo <= e.mean);
    CHECK(e.ci_hi >= e.mean);
  }
  const auto d = estimate_coverage(kFig4, {1.0}, 16000, w, 4);
  const double w1 = s.coverage[1].ci_hi - s.coverage[1].ci_lo;
  const double w4 = d.coverage[0].ci_hi - d.coverage[0].ci_lo;
  CHECK(w4 / w1 == Approx(0.5).epsilon(0.1));
}

TEST_CASE("without other lines coverage matches a direct one-line simulation") {
  const auto c = NetworkConfig::from_transmitter_density(0.0, 35.0, 4.0, 1);
  const double w = 1.0, beta = 1.0;
  const auto s = estimate_coverage(c, {beta}, 40000, w, 21);
  // independent oracle: PPP on both half-lines of the typical line
  Rng rng(22, 0);
  int covered = 0;
  const int trials = 40000;
  for (int t = 0; t < trials; ++t) {
    std::vector<double> d;
    for (int side = 0; side < 2; ++side)
      for (double x = rng.exponential(35.0); x < w; x += rng.exponential(35.0)) d.push_back(x);
    if (d.empty()) {
      ++covered;
      continue;
    }
    const auto it = std::min_element(d.begin(), d.end());
    double sig = 0.0, intf = 0.0;
    for (auto i = d.begin(); i != d.end(); ++i) {
      const double p = rng.exponential(1.0) * std::pow(*i, -4.0);
      (i == it ? sig : intf) += p;
    }
    covered += sig > beta * intf;
  }
  const double p = static_cast<double>(covered) / trials;
  const double se = std::hypot(s.coverage[0].stderr_, std::sqrt(p * (1 - p) / trials));
  CHECK(std::abs(s.coverage[0].mean - p) < 3.0 * se);
}

TEST_CASE("serving-line frequencies match the analytic event probabilities") {
  const double w = default_window_radius(kFig4);
  const auto s = estimate_coverage(kFig4, {1.0}, 100000, w, 17);
  const auto r = coverage_probability(kFig4, 1.0);
  for (std::size_t n = 0; n < 3; ++n) {
    const double p = r.event_mass[n];
    const double f = static_cast<double>(s.serving_counts[n]) / static_cast<double>(s.trials);
    INFO("n " << n);
    CHECK(std::abs(f - p) < 3.0 * std::sqrt(p * (1.0 - p) / s.trials));
  }
}

TEST_CASE("doubling the window leaves coverage within two standard errors") {
  const double w = default_window_radius(kFig4);
  const auto a = estimate_coverage(kFig4, {1.0}, 100000, w, 60);
  const auto b = estimate_coverage(kFig4, {1.0}, 100000, 2.0 * w, 60);
  CHECK(std::abs(a.coverage[0].mean - b.coverage[0].mean) < 2.0 * a.coverage[0].stderr_);
}

TEST_CASE("conditioned interference is finite and nonnegative") {
  const auto ctx = LaplaceContext::make(0.05, 0.03, 2, kFig4);
  for (std::uint64_t t = 0; t < 500; ++t) {
    Rng rng(5, t);
    const double i = sample_conditioned_interference(ctx, 0.3, rng);
    CHECK(i >= 0.0);
    CHECK(std::isfinite(i));
  }
}

TEST_CASE("invalid simulation inputs are rejected") {
  CHECK_THROWS_AS(estimate_coverage(kFig4, {1.0}, 10, 0.0, 1), ParameterError);
}
