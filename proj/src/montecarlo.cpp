#include "plpcov/montecarlo.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include <boost/math/quadrature/exp_sinh.hpp>

#include "plpcov/stats.hpp"

namespace plpcov {

namespace {

/// d^-alpha from d^2, with the common alpha = 4 case kept cheap.
double path_loss(double d2, double alpha) {
  if (alpha == 4.0) return 1.0 / (d2 * d2);
  return std::pow(d2, -0.5 * alpha);
}

void check_trial_inputs(const NetworkConfig& config, double window_radius) {
  if (!std::isfinite(window_radius) || !(window_radius > 0.0))
    throw ParameterError("window_radius must be > 0");
  if (!(config.lambda_v() > 0.0)) throw ParameterError("lambda_v must be > 0");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double sample_nakagami_gain(int m, Rng& rng) {
  if (m < 1 || m > kMaxNakagamiM) throw ParameterError("m must be an integer in [1, 16]");
  // integer shape: sum of m unit exponentials, one log of the uniform product
  double prod = rng.uniform_pos();
  for (int i = 1; i < m; ++i) prod *= rng.uniform_pos();
  return -std::log(prod) / m;
}

int default_thread_count() {
  if (const char* env = std::getenv("PLPCOV_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::uint64_t n, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& body) {
  if (threads < 1) threads = 1;
  const std::uint64_t workers = std::min<std::uint64_t>(threads, std::max<std::uint64_t>(n, 1));
  if (workers <= 1) {
    body(0, n);
    return;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
    pool.emplace_back([&, w, lo, hi] {
      try {
        body(lo, hi);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------

TrialRecord run_trial(const NetworkConfig& config, double window_radius, Rng& rng) {
  check_trial_inputs(config, window_radius);
  TrialRecord rec;
  PalmRealization net;
  for (;;) {
    net = sample_palm(config, window_radius, rng);
    if (!net.tx_nodes.empty()) break;
    if (rec.retries == kRetryBudget) {
      rec.failed = true;
      return rec;
    }
    ++rec.retries;
  }

  std::size_t best = 0;
  double best_d2 = net.squared_distance(net.tx_nodes[0]);
  for (std::size_t i = 1; i < net.tx_nodes.size(); ++i) {
    const double d2 = net.squared_distance(net.tx_nodes[i]);
    if (d2 < best_d2) {
      best_d2 = d2;
      best = i;
    }
  }
  const TxNode& serving = net.tx_nodes[best];
  rec.r = std::sqrt(best_d2);
  if (serving.line == 0) {
    rec.serving_line = 0;
    rec.y_n = 0.0;
  } else {
    rec.y_n = net.line_of(serving).rho;
    int rank = 1;
    for (const auto& l : net.other_lines)
      if (l.rho < rec.y_n) ++rank;
    rec.serving_line = rank;
  }
  for (const auto& l : net.other_lines)
    if (l.rho < rec.r && (rec.serving_line == 0 || l.rho > rec.y_n)) ++rec.annulus_lines;

  const double alpha = config.alpha();
  const int m = config.m();
  double interference = 0.0;
  for (std::size_t i = 0; i < net.tx_nodes.size(); ++i) {
    if (i == best) continue;
    interference += sample_nakagami_gain(m, rng) * path_loss(net.squared_distance(net.tx_nodes[i]), alpha);
  }
  const double signal = sample_nakagami_gain(m, rng) * path_loss(best_d2, alpha);
  if (interference > 0.0) {
    rec.sir = signal / interference;
  } else {
    rec.no_interferers = true;
    rec.sir = std::numeric_limits<double>::max();
  }
  return rec;
}

EstimatorSummary estimate_coverage(const NetworkConfig& config, const std::vector<double>& betas,
                                   std::uint64_t trials, double window_radius,
                                   std::uint64_t seed, int threads) {
  if (trials < 1) throw ParameterError("trials must be >= 1");
  check_trial_inputs(config, window_radius);
  const std::size_t nb = betas.size();
  std::vector<std::uint8_t> covered(trials * nb, 0);
  std::vector<std::int32_t> serving(trials, -1);
  std::vector<std::int32_t> retries(trials, 0);

  parallel_chunks(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      const TrialRecord rec = run_trial(config, window_radius, rng);
      retries[t] = rec.retries;
      if (rec.failed) continue;
      serving[t] = rec.serving_line;
      for (std::size_t b = 0; b < nb; ++b) covered[t * nb + b] = rec.covered(betas[b]);
    }
  });

  EstimatorSummary out;
  out.trials = trials;
  out.window_radius = window_radius;
  for (std::uint64_t t = 0; t < trials; ++t) {
    out.retries += retries[t];
    if (serving[t] < 0) {
      ++out.failed_trials;
      continue;
    }
    const auto idx = static_cast<std::size_t>(serving[t]);
    if (out.serving_counts.size() <= idx) out.serving_counts.resize(idx + 1, 0);
    ++out.serving_counts[idx];
  }
  const std::uint64_t valid = trials - out.failed_trials;
  for (std::size_t b = 0; b < nb; ++b) {
    CoverageEstimate e;
    e.beta = betas[b];
    for (std::uint64_t t = 0; t < trials; ++t) e.covered += covered[t * nb + b];
    if (valid > 0) {
      const double n = static_cast<double>(valid);
      e.mean = e.covered / n;
      e.stderr_ = valid > 1 ? std::sqrt(e.mean * (1.0 - e.mean) / (n - 1.0)) : 0.0;
      const auto ci = wilson_interval(e.covered, valid, 0.95);
      e.ci_lo = ci.first;
      e.ci_hi = ci.second;
    }
    out.coverage.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------

DistanceSamples conditioned_estimators(const NetworkConfig& config, std::uint64_t trials,
                                    double window_radius, std::uint64_t seed, int threads) {
  check_trial_inputs(config, window_radius);
  DistanceSamples out;
  out.window_radius = window_radius;
  out.samples.resize(trials);

  parallel_chunks(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    std::vector<std::size_t> order;
    std::vector<double> line_min;
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      auto net = sample_palm(config, window_radius, rng);
      DistanceSample& s = out.samples[t];
      const std::size_t nl = net.other_lines.size();

      // closest node per line (index 0 = typical line), and offset magnitude
      line_min.assign(nl + 1, kInf);
      std::vector<double> offset_min(nl + 1, kInf);
      for (const auto& node : net.tx_nodes) {
        const double d = std::sqrt(net.squared_distance(node));
        line_min[node.line] = std::min(line_min[node.line], d);
        offset_min[node.line] = std::min(offset_min[node.line], std::abs(node.offset));
      }
      order.resize(nl);
      for (std::size_t i = 0; i < nl; ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return net.other_lines[a].rho < net.other_lines[b].rho;
      });

      s.y1 = nl > 0 ? net.other_lines[order[0]].rho : kInf;
      s.y2 = nl > 1 ? net.other_lines[order[1]].rho : kInf;
      s.x_offset = nl > 0 ? offset_min[order[0] + 1] : kInf;
      s.s0 = line_min[0];
      s.v0 = kInf;
      for (std::size_t i = 0; i < nl; ++i) s.v0 = std::min(s.v0, line_min[i + 1]);
      for (int n = 1; n <= 2; ++n) {
        const std::size_t k = static_cast<std::size_t>(n - 1);
        if (nl < static_cast<std::size_t>(n)) {
          s.s[k] = s.u[k] = s.v[k] = s.w[k] = kInf;
          continue;
        }
        s.s[k] = line_min[order[k] + 1];
        s.u[k] = kInf;
        for (std::size_t j = 0; j < k; ++j) s.u[k] = std::min(s.u[k], line_min[order[j] + 1]);
        s.v[k] = kInf;
        for (std::size_t j = k + 1; j < nl; ++j) s.v[k] = std::min(s.v[k], line_min[order[j] + 1]);
        s.w[k] = std::min({s.s0, s.u[k], s.v[k]});
      }

      // serving node and conditional line count
      double best = s.s0;
      s.serving_line = 0;
      s.serving_y = 0.0;
      for (std::size_t j = 0; j < nl; ++j) {
        const double d = line_min[order[j] + 1];
        if (d < best) {
          best = d;
          s.serving_line = static_cast<int>(j + 1);
          s.serving_y = net.other_lines[order[j]].rho;
        }
      }
      s.r = best;
      s.annulus_lines = 0;
      for (const auto& l : net.other_lines)
        if (l.rho < s.r && (s.serving_line == 0 || l.rho > s.serving_y)) ++s.annulus_lines;
    }
  });
  return out;
}

// ---------------------------------------------------------------------------

namespace {

/// Adds nodes of a line at distance z on offsets |t| in (excl, half), excl <= half.
double off_chord_interference(double z, double excl, double half, const NetworkConfig& c,
                              Rng& rng) {
  if (!(half > excl)) return 0.0;
  const auto count = rng.poisson(2.0 * c.lambda_v() * (half - excl));
  double sum = 0.0;
  for (std::uint64_t k = 0; k < count; ++k) {
    const double t = rng.uniform(excl, half);
    sum += sample_nakagami_gain(c.m(), rng) * path_loss(z * z + t * t, c.alpha());
  }
  return sum;
}

double chord_void(double z, double r, double lambda_v) {
  return std::exp(-2.0 * lambda_v * std::sqrt(std::max(r * r - z * z, 0.0)));
}

}  // namespace

namespace {

struct ConditionedDraw {
  double interference = 0.0;
  std::vector<double> line_distances;  // every line crossing the window
};

ConditionedDraw draw_conditioned(const LaplaceContext& ctx, double window_radius, Rng& rng) {
  const auto& c = ctx.config;
  const double r = ctx.r, y = ctx.y_n, w = window_radius, lv = c.lambda_v();
  if (!(w > r)) throw ParameterError("window must exceed the serving distance");
  auto half = [w](double z) { return std::sqrt(std::max(w * w - z * z, 0.0)); };
  auto excl = [r](double z) { return std::sqrt(std::max(r * r - z * z, 0.0)); };

  ConditionedDraw d;
  auto add = [&](double z, double lo) {
    d.interference += off_chord_interference(z, lo, half(z), c, rng);
    d.line_distances.push_back(z);
  };
  add(0.0, r);  // typical line
  if (ctx.n >= 1) {
    add(y, excl(y));  // serving line
    for (int i = 1; i < ctx.n; ++i) {
      double z;
      do {
        z = rng.uniform(0.0, y);
      } while (rng.uniform() >= chord_void(z, r, lv));
      add(z, excl(z));
    }
  }
  const double line_rate = c.line_rate();
  const auto annulus = rng.poisson(line_rate * (r - y));
  for (std::uint64_t i = 0; i < annulus; ++i) {
    const double z = rng.uniform(y, r);
    if (rng.uniform() >= chord_void(z, r, lv)) continue;
    add(z, excl(z));
  }
  const auto outer = rng.poisson(line_rate * (w - r));
  for (std::uint64_t i = 0; i < outer; ++i) add(rng.uniform(r, w), 0.0);
  return d;
}

/// Exact mean of exp(-s I) over the transmitters outside the window, given
/// the lines crossing it. Uses its own quadrature so the MC side stays
/// independent of the analytic evaluators.
class FarField {
 public:
  FarField(double s, const NetworkConfig& c, double w) : s_(s), c_(c), w_(w) {
    for (int j = 0; j < kNodes; ++j) {
      const double phi = 0.25 * kPi * (1.0 + std::cos(kPi * (j + 0.5) / kNodes));
      values_[j] = line_tail(w_ * std::sin(phi), w_ * std::cos(phi));
    }
    for (int i = 0; i < kNodes; ++i) {
      double acc = 0.0;
      for (int j = 0; j < kNodes; ++j) acc += values_[j] * std::cos(kPi * i * (j + 0.5) / kNodes);
      cheb_[i] = 2.0 * acc / kNodes;
    }
    if (c.line_rate() > 0.0) {
      boost::math::quadrature::exp_sinh<double> outer;
      beyond_ = -c.line_rate() * outer.integrate(
                                     [&](double z) { return -std::expm1(-line_tail(z, 0.0)); },
                                     w_, std::numeric_limits<double>::infinity());
    }
  }

  /// log of the factor for one line at distance rho < w.
  double line_log_factor(double rho) const {
    const double phi = std::asin(std::min(rho / w_, 1.0));
    const double x = 4.0 * phi / kPi - 1.0;
    double b1 = 0.0, b2 = 0.0;
    for (int j = kNodes - 1; j >= 1; --j) {
      const double t = 2.0 * x * b1 - b2 + cheb_[j];
      b2 = b1;
      b1 = t;
    }
    return -(x * b1 - b2 + 0.5 * cheb_[0]);
  }
  /// log of the factor for all lines beyond the window.
  double beyond_log_factor() const { return beyond_; }

 private:
  static constexpr int kNodes = 32;

  /// 2 lambda_v * integral over |t| > t0 of 1 - E[exp(-s G u^-alpha)] for the line at rho.
  double line_tail(double rho, double t0) const {
    boost::math::quadrature::exp_sinh<double> q;
    const double m = c_.m(), alpha = c_.alpha();
    auto f = [&](double t) {
      const double ua = std::pow(rho * rho + t * t, -0.5 * alpha);
      return -std::expm1(-m * std::log1p(s_ * ua / m));
    };
    return 2.0 * c_.lambda_v() * q.integrate(f, t0, std::numeric_limits<double>::infinity());
  }

  double s_;
  NetworkConfig c_;
  double w_;
  std::array<double, kNodes> values_{};
  std::array<double, kNodes> cheb_{};
  double beyond_ = 0.0;
};

}  // namespace

double sample_conditioned_interference(const LaplaceContext& ctx, double window_radius,
                                       Rng& rng) {
  return draw_conditioned(ctx, window_radius, rng).interference;
}

std::vector<MeanEstimate> mc_laplace(const std::vector<double>& s, const LaplaceContext& ctx,
                                     std::uint64_t trials, double window_radius,
                                     std::uint64_t seed, int threads, bool far_field) {
  if (trials < 2) throw ParameterError("trials must be >= 2");
  std::vector<FarField> fields;
  if (far_field)
    for (double sv : s) fields.emplace_back(sv, ctx.config, window_radius);

  const std::size_t ns = s.size();
  std::vector<double> values(trials * ns);
  parallel_chunks(trials, threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t t = lo; t < hi; ++t) {
      Rng rng(seed, t);
      const auto d = draw_conditioned(ctx, window_radius, rng);
      for (std::size_t k = 0; k < ns; ++k) {
        double log_v = -s[k] * d.interference;
        if (far_field) {
          log_v += fields[k].beyond_log_factor();
          for (double z : d.line_distances) log_v += fields[k].line_log_factor(z);
        }
        values[t * ns + k] = std::exp(log_v);
      }
    }
  });
  std::vector<MeanEstimate> out;
  for (std::size_t k = 0; k < ns; ++k) {
    double mean = 0.0, m2 = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
      const double v = values[t * ns + k];
      const double delta = v - mean;
      mean += delta / (t + 1);
      m2 += delta * (v - mean);
    }
    out.push_back({mean, std::sqrt(m2 / (trials - 1) / trials)});
  }
  return out;
}

}  // namespace plpcov
