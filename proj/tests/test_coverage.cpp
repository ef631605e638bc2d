#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "plpcov/coverage.hpp"
#include "plpcov/montecarlo.hpp"

using namespace plpcov;
using Catch::Approx;

namespace {

const NetworkConfig kFig4 = NetworkConfig::from_transmitter_density(35.0, 35.0, 4.0, 1);

}  // namespace

TEST_CASE("conditional coverage for Rayleigh fading is the transform value") {
  const double beta = 1.3, r = 0.03, y = 0.02;
  const auto c = kFig4.with_beta(beta);
  const auto ctx = LaplaceContext::make(r, y, 2, c);
  const double s = beta * std::pow(r, 4.0);
  CHECK(conditional_coverage(ctx) == Approx(laplace_total(s, ctx).value()).epsilon(1e-12));
  const auto tiny = LaplaceContext::make(r, y, 2, kFig4.with_beta(1e-9));
  CHECK(conditional_coverage(tiny) == Approx(1.0).epsilon(1e-6));
}

TEST_CASE("conditional coverage for m = 3 matches simulation") {
  const auto c = NetworkConfig::from_transmitter_density(5.0, 5.0, 4.0, 3).with_beta(1.0);
  const auto ctx = LaplaceContext::make(0.15, 0.1, 2, c);
  const double analytic = conditional_coverage(ctx);
  const int trials = 100000;
  int covered = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(77, static_cast<std::uint64_t>(t));
    const double interference = sample_conditioned_interference(ctx, 1.5, rng);
    const double gain = sample_nakagami_gain(3, rng);
    covered += gain > c.beta() * std::pow(ctx.r, 4.0) * interference;
  }
  const double p = static_cast<double>(covered) / trials;
  // window truncation only raises the empirical value
  const double se = std::sqrt(p * (1.0 - p) / trials);
  CHECK(std::abs(p - analytic) < 3.0 * se + 0.002);
}

TEST_CASE("coverage result invariants") {
  const auto r = coverage_probability(kFig4, 1.0);
  CHECK(r.pc >= 0.0);
  CHECK(r.pc <= 1.0);
  CHECK(r.truncation_deficit >= 0.0);
  CHECK(r.truncation_deficit < 1e-3);
  CHECK_FALSE(r.cap_reached);
  REQUIRE(r.terms.size() == r.event_mass.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    CHECK(r.terms[i] >= 0.0);
    CHECK(r.terms[i] <= r.event_mass[i] + 1e-12);
    mass += r.event_mass[i];
  }
  CHECK(r.pc <= mass + r.truncation_deficit);
  CHECK(mass + r.truncation_deficit == Approx(1.0).margin(1e-9));
  CHECK(r.evaluations > 0);
}

TEST_CASE("coverage tends to the covered mass as beta -> 0") {
  const auto r = coverage_probability(kFig4, 1e-8);
  CHECK(r.pc == Approx(1.0 - r.truncation_deficit).margin(1e-4));
  CHECK_THROWS_AS(coverage_probability(kFig4, 0.0), ParameterError);
  CHECK_THROWS_AS(coverage_probability(kFig4, -1.0), ParameterError);
}

TEST_CASE("coverage curve is nonincreasing in beta") {
  std::vector<double> betas;
  for (int db = -10; db <= 10; db += 4) betas.push_back(db_to_linear(db));
  for (int m : {1, 2}) {
    const auto c = NetworkConfig::from_transmitter_density(35.0, 35.0, 4.0, m);
    const auto curve = coverage_curve(c, betas);
    for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].pc <= curve[i - 1].pc);
  }
}

TEST_CASE("coverage curve is independent of the worker count") {
  const std::vector<double> betas{0.5, 1.0, 2.0};
  const auto a = coverage_curve(kFig4, betas, {}, 1);
  const auto b = coverage_curve(kFig4, betas, {}, 3);
  for (std::size_t i = 0; i < betas.size(); ++i) CHECK(a[i].pc == b[i].pc);
}

TEST_CASE("raising the serving-line cap cannot lower coverage by more than the tolerance") {
  CoverageOptions small;
  small.n_max_cap = 1;
  const auto capped = coverage_probability(kFig4, 1.0, small);
  CHECK(capped.cap_reached);
  CHECK_FALSE(capped.warnings.empty());
  const auto full = coverage_probability(kFig4, 1.0);
  CHECK(full.pc >= capped.pc - small.tol_series);
  CHECK(full.n_used > capped.n_used);
}

TEST_CASE("planar PPP closed form") {
  CHECK(ppp_coverage_closed_form(1.0) == Approx(1.0 / (1.0 + kPi / 4.0)).epsilon(1e-12));
  CHECK(ppp_coverage_closed_form(1.0) == Approx(0.5601).epsilon(1e-4));
  CHECK(ppp_coverage_closed_form(0.0) == 1.0);
}

TEST_CASE("planar PPP simulation matches the closed form and does not depend on density") {
  const std::vector<double> betas{0.1, 1.0, 10.0};
  const auto a = coverage_ppp_baseline(1225.0, 4.0, 1, betas, 100000, 9);
  const auto b = coverage_ppp_baseline(50.0, 4.0, 1, betas, 100000, 10);
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double exact = ppp_coverage_closed_form(betas[i]);
    // window truncation drops at most 1e-3 of the mean interference
    CHECK(std::abs(a[i].mean - exact) < 3.0 * a[i].stderr_ + 1e-3);
    const double se = std::hypot(a[i].stderr_, b[i].stderr_);
    CHECK(std::abs(a[i].mean - b[i].mean) < 3.0 * se);
  }
  const auto tiny = coverage_ppp_baseline(100.0, 4.0, 2, {1e-12}, 1000, 3);
  CHECK(tiny[0].mean == 1.0);
  CHECK_THROWS_AS(coverage_ppp_baseline(0.0, 4.0, 1, betas, 10, 1), ParameterError);
}
