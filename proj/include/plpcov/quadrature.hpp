#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <queue>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "plpcov/config.hpp"

/// Globally adaptive Gauss-Kronrod (7/15) quadrature for scalar, jet and
/// vector-valued integrands. A value type V plugs in through ValueTraits<V>.
namespace plpcov::quad {

struct Options {
  double abs_tol = 1e-9;
  double rel_tol = 1e-7;
  int max_intervals = 400;
  /// Throw NumericError instead of returning an unconverged result.
  bool throw_on_failure = true;
};

template <class V>
struct Result {
  V value;
  double error = 0.0;
  int intervals = 0;
  bool converged = true;
};

template <class V>
struct ValueTraits;

template <>
struct ValueTraits<double> {
  static double zero_like(double) { return 0.0; }
  static void axpy(double& acc, double w, double v) { acc += w * v; }
  static double norm(double v) { return std::abs(v); }
};

template <>
struct ValueTraits<std::vector<double>> {
  static std::vector<double> zero_like(const std::vector<double>& v) {
    return std::vector<double>(v.size(), 0.0);
  }
  static void axpy(std::vector<double>& acc, double w, const std::vector<double>& v) {
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += w * v[i];
  }
  static double norm(const std::vector<double>& v) {
    double n = 0.0;
    for (double x : v) n = std::max(n, std::abs(x));
    return n;
  }
};

/// Integrand evaluations performed on this thread since the last reset.
std::uint64_t& evaluation_counter();
inline std::uint64_t evaluation_count() { return evaluation_counter(); }
inline void reset_evaluation_count() { evaluation_counter() = 0; }

namespace detail {

inline constexpr std::array<double, 8> kNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrod = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd nodes kNodes[1], [3], [5] and the centre.
inline constexpr std::array<double, 4> kGauss = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Segment {
  double a;
  double b;
  V value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

template <class V, class F>
Segment<V> gk15(F& f, double a, double b) {
  using T = ValueTraits<V>;
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::array<V, 15> fx;
  fx[7] = f(c);
  for (int j = 0; j < 7; ++j) {
    fx[j] = f(c - h * kNodes[j]);
    fx[14 - j] = f(c + h * kNodes[j]);
  }
  evaluation_counter() += 15;

  V kron = T::zero_like(fx[7]);
  V gauss = T::zero_like(fx[7]);
  T::axpy(kron, kKronrod[7], fx[7]);
  T::axpy(gauss, kGauss[3], fx[7]);
  for (int j = 0; j < 7; ++j) {
    T::axpy(kron, kKronrod[j], fx[j]);
    T::axpy(kron, kKronrod[j], fx[14 - j]);
    if (j % 2 == 1) {
      T::axpy(gauss, kGauss[j / 2], fx[j]);
      T::axpy(gauss, kGauss[j / 2], fx[14 - j]);
    }
  }
  // spread of the integrand about its mean, QUADPACK's resasc
  V mean = T::zero_like(fx[7]);
  T::axpy(mean, 0.5, kron);
  double resasc = 0.0;
  for (int j = 0; j < 15; ++j) {
    V d = fx[j];
    T::axpy(d, -1.0, mean);
    const int k = j < 7 ? j : (j == 7 ? 7 : 14 - j);
    resasc += kKronrod[k] * T::norm(d);
  }
  resasc *= std::abs(h);

  V diff = kron;
  T::axpy(diff, -1.0, gauss);
  double err = T::norm(diff) * std::abs(h);
  if (resasc > 0.0 && err > 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

  V value = T::zero_like(fx[7]);
  T::axpy(value, h, kron);
  return {a, b, std::move(value), err};
}

}  // namespace detail

/// Integral of f over the finite interval [a, b].
template <class F>
auto integrate(F&& f, double a, double b, const Options& opt = {})
    -> Result<std::decay_t<decltype(f(a))>> {
  using V = std::decay_t<decltype(f(a))>;
  using T = ValueTraits<V>;
  using Seg = detail::Segment<V>;

  Seg first = detail::gk15<V>(f, a, b);
  Result<V> out{first.value, first.error, 1, true};
  if (a == b) return out;

  std::priority_queue<Seg> heap;
  V total = first.value;
  double total_err = first.error;
  heap.push(std::move(first));
  int intervals = 1;

  auto target = [&] { return std::max(opt.abs_tol, opt.rel_tol * T::norm(total)); };
  while (total_err > target()) {
    if (intervals >= opt.max_intervals) {
      out.converged = false;
      break;
    }
    Seg worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > std::min(worst.a, worst.b) && mid < std::max(worst.a, worst.b))) {
      // interval exhausted at floating-point resolution
      out.converged = false;
      break;
    }
    heap.pop();
    Seg left = detail::gk15<V>(f, worst.a, mid);
    Seg right = detail::gk15<V>(f, mid, worst.b);
    T::axpy(total, -1.0, worst.value);
    T::axpy(total, 1.0, left.value);
    T::axpy(total, 1.0, right.value);
    total_err += left.error + right.error - worst.error;
    heap.push(std::move(left));
    heap.push(std::move(right));
    ++intervals;
    if (intervals % 64 == 0) {
      // refresh the running sums to keep cancellation error out of the test
      total = T::zero_like(total);
      total_err = 0.0;
      auto copy = heap;
      while (!copy.empty()) {
        T::axpy(total, 1.0, copy.top().value);
        total_err += copy.top().error;
        copy.pop();
      }
    }
  }

  // final sum in a fixed order (left to right) for reproducibility
  std::vector<Seg> segs;
  segs.reserve(heap.size());
  while (!heap.empty()) {
    segs.push_back(heap.top());
    heap.pop();
  }
  std::sort(segs.begin(), segs.end(), [](const Seg& x, const Seg& y) { return x.a < y.a; });
  V sum = T::zero_like(total);
  double err = 0.0;
  for (const auto& s : segs) {
    T::axpy(sum, 1.0, s.value);
    err += s.error;
  }
  out.value = std::move(sum);
  out.error = err;
  out.intervals = intervals;
  if (!out.converged && err <= target()) out.converged = true;
  if (!out.converged && opt.throw_on_failure) {
    std::ostringstream os;
    os << "quadrature did not converge on [" << a << ", " << b << "]: error estimate " << err
       << " after " << intervals << " intervals (target " << target() << ")";
    throw NumericError(os.str());
  }
  return out;
}

/// Integral of f over [a, inf) via x = a + scale * t / (1 - t).
template <class F>
auto integrate_to_infinity(F&& f, double a, double scale, const Options& opt = {}) {
  auto mapped = [&](double t) {
    const double u = 1.0 - t;
    auto v = f(a + scale * t / u);
    using V = std::decay_t<decltype(v)>;
    V out = ValueTraits<V>::zero_like(v);
    ValueTraits<V>::axpy(out, scale / (u * u), v);
    return out;
  };
  return integrate(mapped, 0.0, 1.0, opt);
}

/// Shorthand returning only the value.
template <class F>
double integral(F&& f, double a, double b, const Options& opt = {}) {
  return integrate(std::forward<F>(f), a, b, opt).value;
}

template <class F>
double integral_to_infinity(F&& f, double a, double scale, const Options& opt = {}) {
  return integrate_to_infinity(std::forward<F>(f), a, scale, opt).value;
}

}  // namespace plpcov::quad
