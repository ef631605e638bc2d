#include "plpcov/coverage.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include "plpcov/distances.hpp"
#include "plpcov/montecarlo.hpp"

namespace plpcov {

namespace {

/// sum_k (-s)^k / k! L^(k)(s) from a jet expanded with step s.
double coverage_from_jet(const Jet& j) {
  double acc = 0.0;
  for (int k = 0; k <= j.order(); ++k) acc += (k % 2 == 0 ? 1.0 : -1.0) * j[k];
  return acc;
}

double clamp_logged(double p, const char* where) {
  if (p >= 0.0 && p <= 1.0) return p;
  if (p < -1e-9 || p > 1.0 + 1e-9) std::clog << "plpcov: clamped " << where << " = " << p << "\n";
  return std::clamp(p, 0.0, 1.0);
}

/// Per-line exponents G(z) for serving distance r, read from the table.
class TableSource final : public LineExponentSource {
 public:
  TableSource(const LineExponentTable& table, double r, double lambda_v, double step)
      : table_(table), r_(r), scale_(2.0 * lambda_v * r), step_(step) {}
  Jet operator()(double z) const override {
    Jet g = table_(z / r_);
    g *= scale_;
    return g.with_step(step_);
  }

 private:
  const LineExponentTable& table_;
  double r_, scale_, step_;
};

class Engine {
 public:
  Engine(const NetworkConfig& config, double beta, const CoverageOptions& opt)
      : c_(config.with_beta(beta)), opt_(opt), order_(config.m() - 1),
        table_(beta, config.alpha(), config.m(), config.m() - 1, opt.table_tol, opt.line),
        lv_(config.lambda_v()), rate_(config.line_rate()), cap_(opt.n_max_cap) {}

  double step(double r) const { return c_.m() * c_.beta() * std::pow(r, c_.alpha()); }

  /// Typical-line serving event at distance r: [density, density * coverage].
  std::vector<double> typical_integrand(double r) const {
    const double density = 2.0 * lv_ * std::exp(-2.0 * lv_ * r) *
                           std::exp(-rate_ * hit_integral(r, 0.0));
    if (density == 0.0) return {0.0, 0.0};
    const double st = step(r);
    const TableSource g(table_, r, lv_, st);
    Jet lap = exp(-g(0.0) +
                  detail::log_annulus_transform(g, 0.0, r, c_, opt_.averaging, order_, st,
                                                opt_.lines) +
                  detail::log_outer_transform(g, r, c_, order_, st, opt_.lines));
    const double cov = clamp_logged(coverage_from_jet(lap), "conditional coverage");
    return {density, density * cov};
  }

  /// Other-line serving events given the line distance y and the offset x of
  /// the serving node along it. Layout: [mass_1..mass_N, cov_1..cov_N].
  std::vector<double> line_integrand(double y, double x) const {
    std::vector<double> out(2 * cap_, 0.0);
    const double r = std::hypot(x, y);
    const double base = 2.0 * lv_ * std::exp(-2.0 * lv_ * x) * std::exp(-2.0 * lv_ * r) *
                        std::exp(-rate_ * hit_integral(r, y));
    if (base == 0.0) return out;
    const double a = chord_void_integral(r, 0.0, y, lv_, opt_.lines) / y;
    const double ly = rate_ * y;
    const double log_head = std::log(rate_) - ly;
    const double log_ratio = std::log(std::max(ly * a, 1e-300));

    const double st = step(r);
    const TableSource g(table_, r, lv_, st);
    const Jet common = exp(-g(0.0) - g(y) +
                           detail::log_annulus_transform(g, y, r, c_, opt_.averaging, order_, st,
                                                         opt_.lines) +
                           detail::log_outer_transform(g, r, c_, order_, st, opt_.lines));
    Jet inner(order_, 1.0, st);
    bool inner_ready = false;
    Jet lap = common;
    for (int n = 1; n <= cap_; ++n) {
      const double logw = log_head + (n - 1) * log_ratio - std::lgamma(static_cast<double>(n));
      if (n > 1 && logw < -700.0 && (n - 1) > ly * a) break;
      if (n == 2) {
        inner = detail::average_line_transform(g, 0.0, y, r, lv_, opt_.averaging, order_, st,
                                               opt_.lines);
        inner_ready = true;
      }
      if (n > 1 && inner_ready) lap = lap * inner;
      const double w = base * std::exp(logw);
      out[n - 1] = w;
      out[cap_ + n - 1] = w * clamp_logged(coverage_from_jet(lap), "conditional coverage");
    }
    return out;
  }

  double scale() const { return 1.0 / (2.0 * lv_ + rate_); }

 private:
  double hit_integral(double r, double lo) const {
    if (rate_ == 0.0 || !(r > lo)) return 0.0;
    const double a = std::asin(std::min(lo / r, 1.0));
    auto f = [&](double phi) {
      const double c = std::cos(phi);
      return -std::expm1(-2.0 * lv_ * r * c) * r * c;
    };
    return quad::integral(f, a, 0.5 * kPi, opt_.lines);
  }

  NetworkConfig c_;
  CoverageOptions opt_;
  int order_;
  LineExponentTable table_;
  double lv_, rate_;
  int cap_;
};

}  // namespace

double conditional_coverage(const LaplaceContext& ctx, const LaplaceOptions& opt) {
  const auto& c = ctx.config;
  const double s = c.m() * c.beta() * std::pow(ctx.r, c.alpha());
  LaplaceOptions o = opt;
  o.order = c.m() - 1;
  return clamp_logged(coverage_from_jet(laplace_total(s, ctx, o)), "conditional coverage");
}

CoverageResult coverage_probability(const NetworkConfig& config, double beta,
                                    const CoverageOptions& options) {
  if (!std::isfinite(beta) || !(beta > 0.0)) throw ParameterError("beta must be finite and > 0");
  if (!(config.lambda_v() > 0.0)) throw ParameterError("lambda_v must be > 0");
  if (options.n_max_cap < 1) throw ParameterError("n_max_cap must be >= 1");
  if (!(options.tol_series > 0.0)) throw ParameterError("tol_series must be > 0");

  const auto t0 = std::chrono::steady_clock::now();
  quad::reset_evaluation_count();
  const Engine engine(config, beta, options);
  const int cap = options.n_max_cap;

  CoverageResult res;
  res.beta = beta;

  auto typical = quad::integrate_to_infinity(
      [&](double r) { return engine.typical_integrand(r); }, 0.0, engine.scale(),
      options.middle);
  const double p0 = typical.value[0];

  std::vector<double> lines(2 * cap, 0.0);
  if (config.line_rate() > 0.0) {
    auto over_y = [&](double y) {
      if (!(y > 0.0)) return std::vector<double>(2 * cap, 0.0);
      return quad::integrate_to_infinity([&](double x) { return engine.line_integrand(y, x); },
                                         0.0, engine.scale(), options.middle)
          .value;
    };
    lines = quad::integrate_to_infinity(over_y, 0.0, engine.scale(), options.outer).value;
  }

  res.event_mass.push_back(p0);
  res.terms.push_back(std::max(typical.value[1], 0.0));
  double mass = p0;
  int used = 0;
  for (int n = 1; n <= cap; ++n) {
    if (1.0 - mass < options.tol_series) break;
    mass += lines[n - 1];
    res.event_mass.push_back(lines[n - 1]);
    res.terms.push_back(std::max(lines[cap + n - 1], 0.0));
    used = n;
  }
  res.n_used = used;
  res.truncation_deficit = std::max(1.0 - mass, 0.0);
  if (res.truncation_deficit >= options.tol_series) {
    res.cap_reached = true;
    std::ostringstream os;
    os << "serving-line cap " << cap << " reached with uncovered event mass "
       << res.truncation_deficit;
    res.warnings.push_back(os.str());
  }
  double pc = 0.0;
  for (double t : res.terms) pc += t;
  res.pc = std::clamp(pc, 0.0, 1.0);
  res.evaluations = quad::evaluation_count();
  res.runtime_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

std::vector<CoverageResult> coverage_curve(const NetworkConfig& config,
                                           const std::vector<double>& betas,
                                           const CoverageOptions& options, int threads) {
  std::vector<CoverageResult> out(betas.size());
  parallel_chunks(betas.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t i = lo; i < hi; ++i) out[i] = coverage_probability(config, betas[i], options);
  });
  return out;
}

// ---------------------------------------------------------------------------

double ppp_coverage_closed_form(double beta) {
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");
  if (beta == 0.0) return 1.0;
  const double sb = std::sqrt(beta);
  return 1.0 / (1.0 + sb * (0.5 * kPi - std::atan(1.0 / sb)));
}

double ppp_default_window(double lambda_p, double alpha, double relative_tail) {
  if (!(lambda_p > 0.0)) throw ParameterError("lambda_p must be > 0");
  const double r0 = 1.0 / std::sqrt(kPi * lambda_p);
  // mean interference from [r0, d] and from beyond d, unit gains
  auto tail = [&](double d) { return 2.0 * kPi * lambda_p * std::pow(d, 2.0 - alpha) / (alpha - 2.0); };
  const double full = tail(r0);
  auto ok = [&](double d) { return tail(d) < relative_tail * (full - tail(d)); };
  double hi = 2.0 * r0;
  while (!ok(hi)) hi *= 2.0;
  double lo = hi / 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

std::vector<PppEstimate> coverage_ppp_baseline(double lambda_p, double alpha, int m,
                                               const std::vector<double>& betas,
                                               std::uint64_t trials, std::uint64_t seed,
                                               int threads, double window_radius) {
  if (!std::isfinite(lambda_p) || !(lambda_p > 0.0)) throw ParameterError("lambda_p must be > 0");
  if (!(alpha > 2.0)) throw ParameterError("alpha must be > 2");
  if (m < 1 || m > kMaxNakagamiM) throw ParameterError("m must be an integer in [1, 16]");
  if (trials < 1) throw ParameterError("trials must be >= 1");
  const double w = window_radius > 0.0 ? window_radius : ppp_default_window(lambda_p, alpha);
  const double mean_count = lambda_p * kPi * w * w;

  std::vector<std::uint64_t> covered(trials * betas.size(), 0);
  parallel_chunks(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<double> d2;
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      std::uint64_t count = 0;
      for (int attempt = 0; attempt <= kRetryBudget && count == 0; ++attempt)
        count = rng.poisson(mean_count);
      if (count == 0) continue;
      d2.resize(count);
      for (auto& v : d2) v = w * w * rng.uniform();  // radius^2 uniform on the disc
      const auto nearest = std::min_element(d2.begin(), d2.end()) - d2.begin();
      double interference = 0.0, signal = 0.0;
      for (std::uint64_t i = 0; i < count; ++i) {
        const double p = sample_nakagami_gain(m, rng) * std::pow(d2[i], -0.5 * alpha);
        if (static_cast<std::int64_t>(i) == nearest)
          signal = p;
        else
          interference += p;
      }
      for (std::size_t b = 0; b < betas.size(); ++b)
        covered[t * betas.size() + b] = (interference == 0.0 || signal > betas[b] * interference);
    }
  });

  std::vector<PppEstimate> out;
  for (std::size_t b = 0; b < betas.size(); ++b) {
    std::uint64_t k = 0;
    for (std::uint64_t t = 0; t < trials; ++t) k += covered[t * betas.size() + b];
    const double n = static_cast<double>(trials);
    const double p = k / n;
    const double se = trials > 1 ? std::sqrt(p * (1.0 - p) / (n - 1.0)) : 0.0;
    out.push_back({betas[b], p, se});
  }
  return out;
}

}  // namespace plpcov
