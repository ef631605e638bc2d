#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "plpcov/jet.hpp"
#include "plpcov/quadrature.hpp"

using namespace plpcov;
using Catch::Approx;

TEST_CASE("adaptive quadrature on finite intervals") {
  CHECK(quad::integral([](double x) { return std::sin(x); }, 0.0, kPi) == Approx(2.0).epsilon(1e-10));
  // integrable endpoint singularity
  CHECK(quad::integral([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {1e-12, 1e-9, 2000, true}) ==
        Approx(2.0).epsilon(1e-7));
  CHECK(quad::integral([](double) { return 1.0; }, 0.5, 0.5) == 0.0);
}

TEST_CASE("quadrature to infinity") {
  CHECK(quad::integral_to_infinity([](double x) { return std::exp(-3.0 * x); }, 0.0, 1.0) ==
        Approx(1.0 / 3.0).epsilon(1e-9));
  CHECK(quad::integral_to_infinity([](double x) { return 1.0 / (x * x); }, 2.0, 2.0) ==
        Approx(0.5).epsilon(1e-9));
  // Gaussian tail, scale far from the natural one
  CHECK(quad::integral_to_infinity([](double x) { return std::exp(-x * x); }, 0.0, 10.0) ==
        Approx(0.5 * std::sqrt(kPi)).epsilon(1e-8));
}

TEST_CASE("vector-valued quadrature integrates each component") {
  auto f = [](double x) { return std::vector<double>{1.0, x, x * x}; };
  const auto r = quad::integrate(f, 0.0, 2.0);
  CHECK(r.value[0] == Approx(2.0));
  CHECK(r.value[1] == Approx(2.0));
  CHECK(r.value[2] == Approx(8.0 / 3.0));
}

TEST_CASE("non-convergence throws when requested") {
  auto wild = [](double x) { return std::sin(1.0 / x) / x; };
  CHECK_THROWS_AS(quad::integrate(wild, 1e-8, 1.0, {1e-14, 1e-14, 20, true}), NumericError);
  const auto r = quad::integrate(wild, 1e-8, 1.0, {1e-14, 1e-14, 20, false});
  CHECK_FALSE(r.converged);
}

namespace {

/// Jet of the variable s at s0 with step h.
Jet variable(int order, double s0, double h) {
  Jet j(order, s0, h);
  if (order >= 1) j[1] = h;
  return j;
}

}  // namespace

TEST_CASE("jet arithmetic reproduces Taylor coefficients") {
  const int K = 6;
  const double s0 = 0.7, h = 0.3;
  const Jet s = variable(K, s0, h);

  SECTION("exp") {
    const Jet e = exp(s * 2.0);
    for (int k = 0; k <= K; ++k) CHECK(e.derivative(k) == Approx(std::pow(2.0, k) * std::exp(2.0 * s0)));
  }
  SECTION("log") {
    const Jet l = log(s);
    CHECK(l.derivative(0) == Approx(std::log(s0)));
    double fact = 1.0;
    for (int k = 1; k <= K; ++k) {
      if (k > 1) fact *= k - 1;
      CHECK(l.derivative(k) == Approx((k % 2 == 1 ? 1.0 : -1.0) * fact / std::pow(s0, k)));
    }
  }
  SECTION("product and power") {
    const Jet p = s * s * s;
    const Jet q = pow(s, 3);
    CHECK(p.derivative(1) == Approx(3.0 * s0 * s0));
    CHECK(p.derivative(2) == Approx(6.0 * s0));
    CHECK(p.derivative(3) == Approx(6.0));
    CHECK(p.derivative(4) == Approx(0.0).margin(1e-12));
    for (int k = 0; k <= K; ++k) CHECK(q[k] == Approx(p[k]).margin(1e-14));
  }
  SECTION("1 - exp(-g) keeps precision for tiny g") {
    Jet g(K, 1e-18, h);
    g[1] = 1e-18;
    const Jet o = one_minus_exp_neg(g);
    CHECK(o.value() == Approx(1e-18).epsilon(1e-12));
    CHECK(o[1] == Approx(1e-18).epsilon(1e-9));
  }
  SECTION("with_step reinterprets the coefficients") {
    const Jet e = exp(-s);
    const Jet r = e.with_step(2.0 * h);
    CHECK(r.step() == 2.0 * h);
    for (int k = 0; k <= K; ++k) {
      CHECK(r[k] == e[k]);
      CHECK(r.derivative(k) == Approx(e.derivative(k) / std::pow(2.0, k)));
    }
  }
}

TEST_CASE("jets as quadrature values") {
  // d^k/ds^k of integral_0^1 exp(-s x) dx at s = 1
  const int K = 3;
  auto f = [&](double x) { return exp(variable(K, 1.0, 1.0) * -x); };
  const auto r = quad::integrate(f, 0.0, 1.0, {1e-14, 1e-12, 400, true});
  const double e1 = std::exp(-1.0);
  CHECK(r.value.derivative(0) == Approx(1.0 - e1));
  CHECK(r.value.derivative(1) == Approx(-(1.0 - 2.0 * e1)));
  CHECK(r.value.derivative(2) == Approx(2.0 - 5.0 * e1));
  CHECK(r.value.derivative(3) == Approx(-(6.0 - 16.0 * e1)));
}
