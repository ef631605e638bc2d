#pragma once

#include <array>
#include <cassert>
#include <cmath>

#include "plpcov/config.hpp"
#include "plpcov/quadrature.hpp"

namespace plpcov {

/// Truncated Taylor expansion of f(s0 + step * e) in e, kept to order K.
///
/// Coefficients are stored normalised (c_k = step^k f^(k)(s0) / k!), which
/// keeps products and compositions well scaled; derivative(k) undoes the
/// normalisation. With step = 1 the coefficients are plain Taylor coefficients.
class Jet {
 public:
  static constexpr int kMaxOrder = kMaxNakagamiM - 1;

  Jet() = default;
  explicit Jet(int order, double value = 0.0, double step = 1.0) : order_(order), step_(step) {
    assert(order >= 0 && order <= kMaxOrder);
    c_.fill(0.0);
    c_[0] = value;
  }

  int order() const { return order_; }
  double step() const { return step_; }
  /// Same coefficients reinterpreted with another step.
  Jet with_step(double step) const {
    Jet j = *this;
    j.step_ = step;
    return j;
  }
  double value() const { return c_[0]; }

  double& operator[](int k) { return c_[k]; }
  double operator[](int k) const { return c_[k]; }

  /// k-th derivative with respect to s at the expansion point.
  double derivative(int k) const {
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return c_[k] * fact / std::pow(step_, k);
  }

  bool all_finite() const {
    for (int k = 0; k <= order_; ++k)
      if (!std::isfinite(c_[k])) return false;
    return true;
  }

  Jet& operator+=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (int k = 0; k <= order_; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(double a) {
    for (int k = 0; k <= order_; ++k) c_[k] *= a;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator-(Jet a) { return a *= -1.0; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.order_, 0.0, a.step_);
    for (int k = 0; k <= a.order_; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      r.c_[k] = acc;
    }
    return r;
  }

  friend Jet exp(const Jet& f) {
    Jet e(f.order_, std::exp(f.c_[0]), f.step_);
    for (int k = 1; k <= f.order_; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * f.c_[j] * e.c_[k - j];
      e.c_[k] = acc / k;
    }
    return e;
  }

  /// Requires value() > 0.
  friend Jet log(const Jet& f) {
    assert(f.c_[0] > 0.0);
    Jet l(f.order_, std::log(f.c_[0]), f.step_);
    for (int k = 1; k <= f.order_; ++k) {
      double acc = 0.0;
      for (int j = 1; j < k; ++j) acc += j * l.c_[j] * f.c_[k - j];
      l.c_[k] = (f.c_[k] - acc / k) / f.c_[0];
    }
    return l;
  }

  /// 1 - exp(-g), with the constant term formed through expm1.
  friend Jet one_minus_exp_neg(const Jet& g) {
    Jet e = exp(-g);
    e *= -1.0;
    e.c_[0] = -std::expm1(-g.c_[0]);
    return e;
  }

  /// f^n for integer n >= 0 by repeated squaring.
  friend Jet pow(Jet base, int n) {
    Jet r(base.order_, 1.0, base.step_);
    while (n > 0) {
      if (n & 1) r = r * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return r;
  }

 private:
  int order_ = 0;
  double step_ = 1.0;
  std::array<double, kMaxOrder + 1> c_{};
};

namespace quad {
template <>
struct ValueTraits<Jet> {
  static Jet zero_like(const Jet& j) { return Jet(j.order(), 0.0, j.step()); }
  static void axpy(Jet& acc, double w, const Jet& v) {
    for (int k = 0; k <= acc.order(); ++k) acc[k] += w * v[k];
  }
  static double norm(const Jet& v) {
    double n = 0.0;
    for (int k = 0; k <= v.order(); ++k) n = std::max(n, std::abs(v[k]));
    return n;
  }
};
}  // namespace quad

}  // namespace plpcov
