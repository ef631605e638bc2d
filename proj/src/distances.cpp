#include "plpcov/distances.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace plpcov {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) throw ParameterError(std::string(what) + " must be > 0");
}
void require_nonnegative(double v, const char* what) {
  if (!std::isfinite(v) || v < 0.0) throw ParameterError(std::string(what) + " must be >= 0");
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

/// Angle phi with r sin(phi) = z, z in [0, r].
double chord_angle(double z, double r) {
  if (z >= r) return 0.5 * kPi;
  return std::asin(z / r);
}

/// Integral over z in [lo, hi] of 1 - exp(-2 lambda_v sqrt(r^2 - z^2)).
double chord_hit_integral(double r, double lo, double hi, double lambda_v,
                          const quad::Options& opt) {
  if (!(hi > lo) || !(r > 0.0)) return 0.0;
  const double a = chord_angle(lo, r), b = chord_angle(hi, r);
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    return -std::expm1(-2.0 * lambda_v * r * c) * r * c;
  };
  return quad::integral(f, a, b, opt);
}

/// 1 - F of the closest node on the typical line.
double typical_survival(double x, double lambda_v) {
  return x <= 0.0 ? 1.0 : std::exp(-2.0 * lambda_v * x);
}

/// Survival of the closest node among the n - 1 inner lines.
double inner_survival(int n, double y, double u, double lambda_v, const quad::Options& opt) {
  if (n <= 1 || u <= 0.0) return 1.0;
  double base;
  if (u < y)
    base = 1.0 - u / y + chord_void_integral(u, 0.0, u, lambda_v, opt) / y;
  else
    base = chord_void_integral(u, 0.0, y, lambda_v, opt) / y;
  return std::pow(std::clamp(base, 0.0, 1.0), n - 1);
}

double inner_density(int n, double y, double u, double lambda_v, const quad::Options& opt) {
  if (n <= 1 || u <= 0.0) return 0.0;
  double base, rate;
  if (u < y) {
    base = 1.0 - u / y + chord_void_integral(u, 0.0, u, lambda_v, opt) / y;
    rate = chord_void_rate_integral(u, 0.0, u, lambda_v, opt) / y;
  } else {
    base = chord_void_integral(u, 0.0, y, lambda_v, opt) / y;
    rate = chord_void_rate_integral(u, 0.0, y, lambda_v, opt) / y;
  }
  return (n - 1) * std::pow(std::clamp(base, 0.0, 1.0), n - 2) * rate;
}

double beyond_survival(double y, double v, double line_rate, double lambda_v,
                       const quad::Options& opt) {
  if (v <= y) return 1.0;
  return std::exp(-line_rate * chord_hit_integral(v, y, v, lambda_v, opt));
}

double beyond_density(double y, double v, double line_rate, double lambda_v,
                      const quad::Options& opt) {
  if (v <= y) return 0.0;
  return line_rate * chord_void_rate_integral(v, y, v, lambda_v, opt) *
         beyond_survival(y, v, line_rate, lambda_v, opt);
}

/// Scale for mapping [0, inf) integrals over node distances.
double distance_scale(const NetworkConfig& c) {
  return 1.0 / (2.0 * c.lambda_v() + c.line_rate());
}

void check_config(const NetworkConfig& c) {
  require_positive(c.lambda_v(), "lambda_v");
  require_nonnegative(c.lambda_l(), "lambda_l");
}

}  // namespace

// ---------------------------------------------------------------------------

Distribution1D Distribution1D::empty_minimum() {
  Distribution1D d;
  d.cdf_ = [](double) { return 0.0; };
  d.pdf_ = [](double) { return 0.0; };
  d.support_ = {kInfinity, kInfinity};
  d.empty_ = true;
  return d;
}

double Distribution1D::cdf(double x) const {
  if (empty_ || x <= support_.lower) return 0.0;
  if (x >= support_.upper) return 1.0;
  return clamp01(cdf_(x));
}

double Distribution1D::pdf(double x) const {
  if (empty_ || x < support_.lower || x >= support_.upper) return 0.0;
  return std::max(pdf_(x), 0.0);
}

double LinePmf::pmf(std::size_t k) const {
  if (mean <= 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(-mean + kk * std::log(mean) - std::lgamma(kk + 1.0));
}

// ---------------------------------------------------------------------------

double chord_void_integral(double r, double lo, double hi, double lambda_v,
                           const quad::Options& opt) {
  if (!(hi > lo) || !(r > 0.0)) return 0.0;
  const double a = chord_angle(lo, r), b = chord_angle(hi, r);
  auto f = [&](double phi) {
    const double c = std::cos(phi);
    return std::exp(-2.0 * lambda_v * r * c) * r * c;
  };
  return quad::integral(f, a, b, opt);
}

double chord_void_rate_integral(double r, double lo, double hi, double lambda_v,
                                const quad::Options& opt) {
  if (!(hi > lo) || !(r > 0.0)) return 0.0;
  const double a = chord_angle(lo, r), b = chord_angle(hi, r);
  auto f = [&](double phi) { return std::exp(-2.0 * lambda_v * r * std::cos(phi)); };
  return 2.0 * lambda_v * r * quad::integral(f, a, b, opt);
}

// ---------------------------------------------------------------------------

Distribution1D nth_line_distance(int n, double lambda_l) {
  if (n < 1) throw ParameterError("line rank n must be >= 1");
  require_positive(lambda_l, "lambda_l");
  const double rate = 2.0 * kPi * lambda_l;
  auto cdf = [n, rate](double y) {
    const double t = rate * y;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < n; ++k) {
      term *= t / k;
      sum += term;
    }
    return 1.0 - std::exp(-t) * sum;
  };
  auto pdf = [n, rate](double y) {
    if (y <= 0.0) return n == 1 ? rate : 0.0;
    const double t = rate * y;
    return rate * std::exp(-t + (n - 1) * std::log(t) - std::lgamma(static_cast<double>(n)));
  };
  return {cdf, pdf, {0.0, kInfinity}};
}

Distribution1D closest_offset_on_line(double lambda_v) {
  require_positive(lambda_v, "lambda_v");
  return {[lambda_v](double x) { return -std::expm1(-2.0 * lambda_v * x); },
          [lambda_v](double x) { return 2.0 * lambda_v * std::exp(-2.0 * lambda_v * x); },
          {0.0, kInfinity}};
}

Distribution1D closest_node_on_line(double y, double lambda_v) {
  require_nonnegative(y, "line distance");
  require_positive(lambda_v, "lambda_v");
  auto cdf = [y, lambda_v](double s) {
    const double x = std::sqrt(std::max(s * s - y * y, 0.0));
    return -std::expm1(-2.0 * lambda_v * x);
  };
  auto pdf = [y, lambda_v](double s) {
    const double x = std::sqrt(std::max(s * s - y * y, 0.0));
    if (x == 0.0) return y == 0.0 ? 2.0 * lambda_v : kInfinity;
    return 2.0 * lambda_v * s / x * std::exp(-2.0 * lambda_v * x);
  };
  return {cdf, pdf, {y, kInfinity}};
}

Distribution1D closest_node_on_typical_line(double lambda_v) {
  return closest_node_on_line(0.0, lambda_v);
}

Distribution1D closest_node_on_inner_lines(int n, double y, double lambda_v,
                                           const DistanceOptions& opt) {
  if (n < 1) throw ParameterError("line rank n must be >= 1");
  if (n == 1) return Distribution1D::empty_minimum();
  require_positive(y, "line distance");
  require_positive(lambda_v, "lambda_v");
  const auto in = opt.inner;
  return {[=](double u) { return 1.0 - inner_survival(n, y, u, lambda_v, in); },
          [=](double u) { return inner_density(n, y, u, lambda_v, in); },
          {0.0, kInfinity}};
}

Distribution1D closest_node_beyond(double y, double lambda_l, double lambda_v,
                                   const DistanceOptions& opt) {
  require_nonnegative(y, "line distance");
  require_nonnegative(lambda_l, "lambda_l");
  require_positive(lambda_v, "lambda_v");
  const double rate = 2.0 * kPi * lambda_l;
  const auto in = opt.inner;
  return {[=](double v) { return 1.0 - beyond_survival(y, v, rate, lambda_v, in); },
          [=](double v) { return beyond_density(y, v, rate, lambda_v, in); },
          {y, kInfinity}};
}

Distribution1D closest_node_on_other_lines(double lambda_l, double lambda_v,
                                           const DistanceOptions& opt) {
  return closest_node_beyond(0.0, lambda_l, lambda_v, opt);
}

Distribution1D closest_competitor(int n, double y, const NetworkConfig& config,
                                  const DistanceOptions& opt) {
  if (n < 1) throw ParameterError("line rank n must be >= 1");
  require_positive(y, "line distance");
  check_config(config);
  const double lv = config.lambda_v(), rate = config.line_rate();
  const auto in = opt.inner;
  auto surv = [=](double w) {
    return typical_survival(w, lv) * inner_survival(n, y, w, lv, in) *
           beyond_survival(y, w, rate, lv, in);
  };
  auto pdf = [=](double w) {
    if (w <= 0.0) return 2.0 * lv;
    const double s0 = typical_survival(w, lv), f0 = 2.0 * lv * s0;
    const double su = inner_survival(n, y, w, lv, in), fu = inner_density(n, y, w, lv, in);
    const double sv = beyond_survival(y, w, rate, lv, in), fv = beyond_density(y, w, rate, lv, in);
    return f0 * su * sv + s0 * fu * sv + s0 * su * fv;
  };
  return {[surv](double w) { return 1.0 - surv(w); }, pdf, {0.0, kInfinity}};
}

// ---------------------------------------------------------------------------

double prob_serving_on_line(int n, double y, const NetworkConfig& config,
                            const DistanceOptions& opt) {
  if (n < 1) throw ParameterError("line rank n must be >= 1");
  require_positive(y, "line distance");
  check_config(config);
  const double lv = config.lambda_v(), rate = config.line_rate();
  // s = sqrt(x^2 + y^2) turns f_S(s | y) ds into 2 lambda_v exp(-2 lambda_v x) dx
  auto f = [&](double x) {
    const double s = std::hypot(x, y);
    return 2.0 * lv * std::exp(-2.0 * lv * x) * typical_survival(s, lv) *
           inner_survival(n, y, s, lv, opt.inner) * beyond_survival(y, s, rate, lv, opt.inner);
  };
  return clamp01(quad::integral_to_infinity(f, 0.0, distance_scale(config), opt.outer));
}

double prob_serving_on_typical_line(const NetworkConfig& config, const DistanceOptions& opt) {
  check_config(config);
  const double lv = config.lambda_v(), rate = config.line_rate();
  if (rate == 0.0) return 1.0;
  auto f = [&](double v) {
    return -std::expm1(-2.0 * lv * v) * beyond_density(0.0, v, rate, lv, opt.inner);
  };
  return clamp01(quad::integral_to_infinity(f, 0.0, distance_scale(config), opt.outer));
}

Distribution1D serving_distance_on_line(int n, double y, const NetworkConfig& config,
                                        const DistanceOptions& opt) {
  const double p = prob_serving_on_line(n, y, config, opt);
  if (!(p > 0.0)) {
    std::ostringstream os;
    os << "serving event on line " << n << " at y=" << y << " has zero probability";
    throw NumericError(os.str());
  }
  const auto competitor = closest_competitor(n, y, config, opt);
  const double lv = config.lambda_v();
  const double scale = distance_scale(config);
  auto line_cdf = [y, lv](double s) {
    return -std::expm1(-2.0 * lv * std::sqrt(std::max(s * s - y * y, 0.0)));
  };
  auto cdf = [=](double r) {
    const double fr = line_cdf(r);
    auto g = [&](double w) { return (line_cdf(w) - fr) * competitor.pdf(w); };
    return 1.0 - quad::integral_to_infinity(g, r, scale, opt.outer) / p;
  };
  const auto on_line = closest_node_on_line(y, lv);
  auto pdf = [=](double r) { return on_line.pdf(r) * competitor.survival(r) / p; };
  return {cdf, pdf, {y, kInfinity}};
}

Distribution1D serving_distance_on_typical_line(const NetworkConfig& config,
                                                const DistanceOptions& opt) {
  const double p = prob_serving_on_typical_line(config, opt);
  if (!(p > 0.0)) throw NumericError("serving event on the typical line has zero probability");
  const double lv = config.lambda_v(), rate = config.line_rate();
  const double scale = distance_scale(config);
  const auto in = opt.inner;
  auto cdf = [=](double r) {
    const double fr = -std::expm1(-2.0 * lv * r);
    auto g = [&](double v) {
      return (-std::expm1(-2.0 * lv * v) - fr) * beyond_density(0.0, v, rate, lv, in);
    };
    return 1.0 - quad::integral_to_infinity(g, r, scale, opt.outer) / p;
  };
  auto pdf = [=](double r) {
    return 2.0 * lv * std::exp(-2.0 * lv * r) * beyond_survival(0.0, r, rate, lv, in) / p;
  };
  return {cdf, pdf, {0.0, kInfinity}};
}

// ---------------------------------------------------------------------------

LinePmf annulus_line_count(double y, double r, const NetworkConfig& config) {
  require_nonnegative(y, "line distance");
  if (!(r >= y)) throw ParameterError("serving distance r must be >= y");
  LinePmf out;
  out.mean = config.line_rate() * chord_void_integral(r, y, r, config.lambda_v());
  return out;
}

LinePmf disc_line_count_typical(double r, const NetworkConfig& config) {
  return annulus_line_count(0.0, r, config);
}

}  // namespace plpcov
