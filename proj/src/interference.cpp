#include "plpcov/interference.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "plpcov/distances.hpp"

namespace plpcov {

namespace {

int resolve_order(const LaplaceOptions& opt, const NetworkConfig& c) {
  const int k = opt.order < 0 ? c.m() - 1 : opt.order;
  if (k > Jet::kMaxOrder) throw ParameterError("jet order exceeds the supported maximum");
  return k;
}

/// Jet of 1 - (1 + q)^-m at unit scaled distance u, expanded in b with step step_b.
Jet one_minus_h(double u, double b, double step_b, double alpha, int m, int order) {
  const double ua = std::pow(u, -alpha);
  const double q = b * ua;
  const double lw = std::log1p(q);
  const double wm = std::exp(-m * lw);
  Jet j(order, -std::expm1(-m * lw));
  const double ratio = step_b * ua / (1.0 + q);
  double binom = 1.0, pw = 1.0;
  for (int k = 1; k <= order; ++k) {
    binom *= static_cast<double>(m + k - 1) / k;
    pw *= ratio;
    j[k] = (k % 2 == 1 ? 1.0 : -1.0) * binom * wm * pw;
  }
  return j;
}

double chebyshev_node(int j, int n) { return std::cos(kPi * (j + 0.5) / n); }

constexpr int kChebNodes = 16;
constexpr int kMaxDepth = 14;

class DirectSource final : public LineExponentSource {
 public:
  DirectSource(double s, double step, const LaplaceContext& ctx, int order,
               const quad::Options& opt)
      : r_(ctx.r), scale_(2.0 * ctx.config.lambda_v() * ctx.r), alpha_(ctx.config.alpha()),
        m_(ctx.config.m()), order_(order), step_(step), opt_(opt) {
    const double unit = ctx.config.m() * std::pow(ctx.r, ctx.config.alpha());
    b_ = s / unit;
    step_b_ = step / unit;
  }
  Jet operator()(double z) const override {
    Jet g = scaled_line_exponent(z / r_, b_, step_b_, alpha_, m_, order_, opt_);
    g *= scale_;
    return g.with_step(step_);
  }

 private:
  double r_, scale_, alpha_;
  int m_, order_;
  double step_;
  double b_ = 0.0, step_b_ = 0.0;
  quad::Options opt_;
};

struct Prepared {
  double step;
  int order;
  DirectSource source;
};

Prepared prepare(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  if (!std::isfinite(s) || s < 0.0) throw ParameterError("Laplace argument s must be >= 0");
  const int order = resolve_order(opt, ctx.config);
  const double step = s > 0.0 ? s : 1.0;
  return {step, order, DirectSource(s, step, ctx, order, opt.line)};
}

Jet constant_one(int order, double step) { return Jet(order, 1.0, step); }

}  // namespace

// ---------------------------------------------------------------------------

LaplaceContext LaplaceContext::make(double r, double y_n, int n, const NetworkConfig& config) {
  if (!std::isfinite(r) || !(r > 0.0)) throw ParameterError("serving distance r must be > 0");
  if (!std::isfinite(y_n) || y_n < 0.0) throw ParameterError("line distance y_n must be >= 0");
  if (y_n > r) throw ParameterError("serving distance r must be >= y_n");
  if (n < 0) throw ParameterError("serving line index n must be >= 0");
  if ((n == 0) != (y_n == 0.0))
    throw ParameterError("y_n must be 0 exactly when the serving line is the typical line");
  return {r, y_n, n, config};
}

Jet scaled_line_exponent(double zhat, double b, double step_b, double alpha, int m, int order,
                         const quad::Options& opt) {
  if (b == 0.0 && step_b == 0.0) return Jet(order, 0.0);
  const double x0 = std::sqrt(std::max(1.0 - zhat * zhat, 0.0));
  const double scale =
      std::max({1.0, zhat, std::pow(std::max(b, step_b), 1.0 / alpha)});
  auto f = [&](double x) { return one_minus_h(std::hypot(x, zhat), b, step_b, alpha, m, order); };
  return quad::integrate_to_infinity(f, x0, scale, opt).value;
}

// ---------------------------------------------------------------------------

LineExponentTable::LineExponentTable(double b, double alpha, int m, int order, double rel_tol,
                                     const quad::Options& opt)
    : b_(b), alpha_(alpha), m_(m), order_(order), rel_tol_(rel_tol), opt_(opt) {
  if (!(b > 0.0)) throw ParameterError("exponent table needs b > 0");
  if (order < 0 || order > Jet::kMaxOrder) throw ParameterError("invalid jet order");
  build(0.0, 0.5 * kPi, false, 0);
  build(0.0, 1.0, true, 0);
}

LineExponentTable::Coeffs LineExponentTable::sample(bool outer, double v) const {
  Coeffs c{};
  double zhat, factor = 1.0;
  if (outer) {
    zhat = std::pow(v, -1.0 / alpha_);
    factor = std::pow(zhat, alpha_ - 1.0);
  } else {
    zhat = std::sin(v);
  }
  const Jet g = scaled_line_exponent(zhat, b_, b_, alpha_, m_, order_, opt_);
  for (int k = 0; k <= order_; ++k) c[k] = g[k] * factor;
  return c;
}

LineExponentTable::Coeffs LineExponentTable::eval(const Piece& p, double v) const {
  const double x = (2.0 * v - p.lo - p.hi) / (p.hi - p.lo);
  const int n = static_cast<int>(p.cheb.size());
  Coeffs out{};
  for (int k = 0; k <= order_; ++k) {
    double b1 = 0.0, b2 = 0.0;
    for (int j = n - 1; j >= 1; --j) {
      const double t = 2.0 * x * b1 - b2 + p.cheb[j][k];
      b2 = b1;
      b1 = t;
    }
    out[k] = x * b1 - b2 + 0.5 * p.cheb[0][k];
  }
  return out;
}

void LineExponentTable::build(double lo, double hi, bool outer, int depth) {
  const int n = kChebNodes;
  std::vector<Coeffs> values(n);
  double piece_scale = 0.0;
  for (int j = 0; j < n; ++j) {
    const double x = chebyshev_node(j, n);
    values[j] = sample(outer, 0.5 * (lo + hi) + 0.5 * (hi - lo) * x);
    for (int k = 0; k <= order_; ++k) piece_scale = std::max(piece_scale, std::abs(values[j][k]));
  }
  Piece p{lo, hi, outer, std::vector<Coeffs>(n)};
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k <= order_; ++k) {
      double acc = 0.0;
      for (int j = 0; j < n; ++j) acc += values[j][k] * std::cos(kPi * i * (j + 0.5) / n);
      p.cheb[i][k] = 2.0 * acc / n;
    }
  }
  // check between the interpolation nodes
  double err = 0.0;
  for (int j = 1; j < n; ++j) {
    const double x = std::cos(kPi * j / n);
    const double v = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x;
    const Coeffs exact = sample(outer, v);
    const Coeffs approx = eval(p, v);
    for (int k = 0; k <= order_; ++k) err = std::max(err, std::abs(exact[k] - approx[k]));
  }
  err /= std::max(piece_scale, 1e-300);
  if (err > rel_tol_ && depth < kMaxDepth) {
    const double mid = 0.5 * (lo + hi);
    build(lo, mid, outer, depth + 1);
    build(mid, hi, outer, depth + 1);
    return;
  }
  max_error_ = std::max(max_error_, err);
  (outer ? outer_ : inner_).push_back(std::move(p));
}

LineExponentTable::Coeffs LineExponentTable::lookup(const std::vector<Piece>& pieces,
                                                    double v) const {
  auto it = std::upper_bound(pieces.begin(), pieces.end(), v,
                             [](double x, const Piece& p) { return x < p.hi; });
  if (it == pieces.end()) --it;
  return eval(*it, v);
}

Jet LineExponentTable::operator()(double zhat) const {
  Jet g(order_, 0.0);
  if (zhat <= 1.0) {
    const Coeffs c = lookup(inner_, std::asin(std::max(zhat, 0.0)));
    for (int k = 0; k <= order_; ++k) g[k] = c[k];
  } else {
    const Coeffs c = lookup(outer_, std::pow(zhat, -alpha_));
    const double factor = std::pow(zhat, 1.0 - alpha_);
    for (int k = 0; k <= order_; ++k) g[k] = c[k] * factor;
  }
  return g;
}

// ---------------------------------------------------------------------------

namespace detail {

Jet average_line_transform(const LineExponentSource& g, double lo, double hi, double r,
                           double lambda_v, LineAveraging averaging, int order, double step,
                           const quad::Options& opt) {
  if (!(hi > lo)) return constant_one(order, step);
  const double a = std::asin(std::min(lo / r, 1.0)), b = std::asin(std::min(hi / r, 1.0));
  const bool weighted = averaging == LineAveraging::void_weighted;
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    double w = r * c;
    if (weighted) w *= std::exp(-2.0 * lambda_v * r * c);
    Jet e = exp(-g(r * std::sin(phi)));
    e *= w;
    return e;
  };
  Jet avg = quad::integrate(f, a, b, opt).value;
  const double norm = weighted ? chord_void_integral(r, lo, hi, lambda_v) : hi - lo;
  avg *= 1.0 / norm;
  return avg;
}

Jet log_annulus_transform(const LineExponentSource& g, double lo, double r,
                          const NetworkConfig& config, LineAveraging averaging, int order,
                          double step, const quad::Options& opt) {
  if (!(r > lo) || config.line_rate() == 0.0) return Jet(order, 0.0, step);
  const double lambda_v = config.lambda_v();
  const bool weighted = averaging == LineAveraging::void_weighted;
  const double a = std::asin(std::min(lo / r, 1.0));
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    double w = r * c;
    if (weighted) w *= std::exp(-2.0 * lambda_v * r * c);
    Jet e = one_minus_exp_neg(g(r * std::sin(phi)));
    e *= w;
    return e;
  };
  Jet acc = quad::integrate(f, a, 0.5 * kPi, opt).value;
  double factor = -config.line_rate();
  if (!weighted) factor *= chord_void_integral(r, lo, r, lambda_v) / (r - lo);
  acc *= factor;
  return acc;
}

Jet log_outer_transform(const LineExponentSource& g, double r, const NetworkConfig& config,
                        int order, double step, const quad::Options& opt) {
  if (config.line_rate() == 0.0) return Jet(order, 0.0, step);
  auto f = [&](double z) { return one_minus_exp_neg(g(z)); };
  Jet acc = quad::integrate_to_infinity(f, r, r, opt).value;
  acc *= -config.line_rate();
  return acc;
}

}  // namespace detail

// ---------------------------------------------------------------------------

Jet laplace_typical_line(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto p = prepare(s, ctx, opt);
  return exp(-p.source(0.0));
}

Jet laplace_serving_line(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto p = prepare(s, ctx, opt);
  if (ctx.n == 0) return constant_one(p.order, p.step);
  return exp(-p.source(ctx.y_n));
}

Jet laplace_inner_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto p = prepare(s, ctx, opt);
  if (ctx.n <= 1) return constant_one(p.order, p.step);
  const Jet a = detail::average_line_transform(p.source, 0.0, ctx.y_n, ctx.r,
                                               ctx.config.lambda_v(), opt.averaging, p.order,
                                               p.step, opt.lines);
  if (!(a.value() > 0.0)) throw NumericError("inner-line average transform is not positive");
  return exp(static_cast<double>(ctx.n - 1) * log(a));
}

Jet laplace_annulus_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto p = prepare(s, ctx, opt);
  return exp(detail::log_annulus_transform(p.source, ctx.y_n, ctx.r, ctx.config, opt.averaging,
                                           p.order, p.step, opt.lines));
}

Jet laplace_outer_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto p = prepare(s, ctx, opt);
  return exp(detail::log_outer_transform(p.source, ctx.r, ctx.config, p.order, p.step, opt.lines));
}

Jet laplace_total(double s, const LaplaceContext& ctx, const LaplaceOptions& opt) {
  Jet total = laplace_typical_line(s, ctx, opt) * laplace_annulus_lines(s, ctx, opt) *
              laplace_outer_lines(s, ctx, opt);
  if (ctx.n >= 1)
    total = total * laplace_serving_line(s, ctx, opt) * laplace_inner_lines(s, ctx, opt);
  return total;
}

}  // namespace plpcov
