#include "plpcov/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>
#include <tuple>

#include "plpcov/coverage.hpp"
#include "plpcov/distances.hpp"
#include "plpcov/geometry.hpp"
#include "plpcov/montecarlo.hpp"
#include "plpcov/stats.hpp"

namespace plpcov {

namespace {

using DistFor = std::function<Distribution1D(const DistanceSample&)>;
using Value = std::function<double(const DistanceSample&)>;
using Keep = std::function<bool(const DistanceSample&)>;

/// F(x) with +inf (absent from the window) mapped to 1.
double transform(const Distribution1D& d, double x) { return std::isfinite(x) ? d.cdf(x) : 1.0; }

ValidationCheck ks_check(std::string name, std::vector<double> u, double level) {
  ValidationCheck c;
  c.name = std::move(name);
  c.kind = "ks";
  c.threshold = level;
  if (u.size() < 2) {
    c.tested = false;
    c.passed = true;
    c.samples = u.size();
    c.note = "too few samples";
    return c;
  }
  const auto t = ks_test_uniform(std::move(u));
  c.statistic = t.statistic;
  c.p_value = t.p_value;
  c.samples = t.samples;
  c.passed = t.p_value > level;
  return c;
}

/// Probability integral transform of value(s) under the law built from s,
/// for the samples accepted by keep. Evaluated in parallel, kept in order.
std::vector<double> conditional_pit(const std::vector<DistanceSample>& samples, const Keep& keep,
                                    const Value& value, const DistFor& law, int threads) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (keep(samples[i])) idx.push_back(i);
  std::vector<double> u(idx.size());
  parallel_chunks(idx.size(), threads, [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t j = lo; j < hi; ++j) {
      const auto& s = samples[idx[j]];
      u[j] = transform(law(s), value(s));
    }
  });
  return u;
}

double two_sided_normal_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

double suite_window_radius(const NetworkConfig& config) {
  double w = default_window_radius(config);
  if (config.line_rate() > 0.0) w = std::max(w, 20.0 / config.line_rate());
  return std::max(w, 20.0 / (2.0 * config.lambda_v()));
}

ValidationReport run_distance_suite(const NetworkConfig& config, const ValidationOptions& opt) {
  if (opt.trials < 10) throw ParameterError("validation needs at least 10 trials");
  if (!(config.line_rate() > 0.0)) throw ParameterError("validation needs mu_l > 0");
  if (!(opt.bin_width > 0.0)) throw ParameterError("bin width must be > 0");

  ValidationReport rep;
  rep.trials = opt.trials;
  rep.window_radius = opt.window_radius > 0.0 ? opt.window_radius : suite_window_radius(config);
  const auto data = conditioned_estimators(config, opt.trials, rep.window_radius, opt.seed,
                                           opt.threads);
  const auto& S = data.samples;
  const double lambda_l = config.lambda_l();
  const double lv = config.lambda_v();
  const int th = opt.threads;
  auto all = [](const DistanceSample&) { return true; };

  // unconditional laws
  auto plain = [&](std::string name, const Distribution1D& d, const Value& v) {
    rep.checks.push_back(ks_check(std::move(name), conditional_pit(S, all, v, [&](const auto&) { return d; }, th),
                                  opt.level));
  };
  plain("Y1 closest line distance", nth_line_distance(1, lambda_l), [](const auto& s) { return s.y1; });
  plain("Y2 second line distance", nth_line_distance(2, lambda_l), [](const auto& s) { return s.y2; });
  plain("X1 closest node offset", closest_offset_on_line(lv), [](const auto& s) { return s.x_offset; });
  plain("S0 typical line", closest_node_on_typical_line(lv), [](const auto& s) { return s.s0; });
  plain("V0 other lines", closest_node_on_other_lines(lambda_l, lv), [](const auto& s) { return s.v0; });

  // laws conditioned on the line distance y_n
  auto y_of = [](int n) { return [n](const DistanceSample& s) { return n == 1 ? s.y1 : s.y2; }; };
  for (int n = 1; n <= 2; ++n) {
    const auto y = y_of(n);
    const std::size_t k = static_cast<std::size_t>(n - 1);
    const Keep has_line = [y, r = rep.window_radius](const DistanceSample& s) { return y(s) < r; };
    const std::string tag = std::to_string(n);
    rep.checks.push_back(ks_check(
        "S" + tag + "|Y" + tag + " node on line " + tag,
        conditional_pit(S, has_line, [k](const auto& s) { return s.s[k]; },
                        [&, y](const auto& s) { return closest_node_on_line(y(s), lv); }, th),
        opt.level));
    if (n > 1)
      rep.checks.push_back(ks_check(
          "U" + tag + "|Y" + tag + " closer lines",
          conditional_pit(S, has_line, [k](const auto& s) { return s.u[k]; },
                          [&, y](const auto& s) { return closest_node_on_inner_lines(n, y(s), lv); }, th),
          opt.level));
    rep.checks.push_back(ks_check(
        "V" + tag + "|Y" + tag + " farther lines",
        conditional_pit(S, has_line, [k](const auto& s) { return s.v[k]; },
                        [&, y](const auto& s) { return closest_node_beyond(y(s), lambda_l, lv); }, th),
        opt.level));
    rep.checks.push_back(ks_check(
        "W" + tag + "|Y" + tag + " closest competitor",
        conditional_pit(S, has_line, [k](const auto& s) { return s.w[k]; },
                        [&, y](const auto& s) { return closest_competitor(n, y(s), config); }, th),
        opt.level));
  }

  // serving distance
  {
    const auto d0 = serving_distance_on_typical_line(config);
    rep.checks.push_back(ks_check(
        "R|E0 serving distance, typical line",
        conditional_pit(S, [](const auto& s) { return s.serving_line == 0; },
                        [](const auto& s) { return s.r; }, [&](const auto&) { return d0; }, th),
        opt.level));
  }
  for (int n = 1; n <= 2; ++n) {
    const std::string tag = std::to_string(n);
    rep.checks.push_back(ks_check(
        "R|E" + tag + ",Y" + tag + " serving distance, line " + tag,
        conditional_pit(S, [n](const auto& s) { return s.serving_line == n; },
                        [](const auto& s) { return s.r; },
                        [&, n](const auto& s) { return serving_distance_on_line(n, s.serving_y, config); },
                        th),
        opt.level));
  }

  // conditional line counts per (n, y_n, r) cell; expected counts are the
  // sum of the per-sample Poisson laws so that the cell width does not bias
  // the test
  {
    using Cell = std::tuple<int, long, long>;
    std::map<Cell, std::vector<std::size_t>> cells;
    for (std::size_t i = 0; i < S.size(); ++i) {
      const auto& s = S[i];
      if (!std::isfinite(s.r)) continue;
      cells[{s.serving_line, std::lround(std::floor(s.serving_y / opt.bin_width)),
             std::lround(std::floor(s.r / opt.bin_width))}]
          .push_back(i);
    }
    struct Pending {
      ValidationCheck check;
      TestResult result;
    };
    std::vector<Pending> tested;
    for (const auto& [cell, members] : cells) {
      const auto [n, yb, rb] = cell;
      std::ostringstream name;
      name << "N_l annulus count | E" << n;
      if (n > 0) name << ", y in [" << yb * opt.bin_width << ", " << (yb + 1) * opt.bin_width << ")";
      name << ", r in [" << rb * opt.bin_width << ", " << (rb + 1) * opt.bin_width << ")";
      ValidationCheck c;
      c.name = name.str();
      c.kind = "chi2";
      c.samples = members.size();
      if (members.size() < opt.min_cell_samples) continue;  // under-populated, counted below
      std::size_t kmax = 0;
      for (auto i : members) kmax = std::max(kmax, S[i].annulus_lines);
      const std::size_t cellsz = kmax + 2;  // last bin: counts above kmax
      std::vector<double> obs(cellsz, 0.0), expct(cellsz, 0.0);
      for (auto i : members) {
        const auto& s = S[i];
        obs[s.annulus_lines] += 1.0;
        const LinePmf law = s.serving_line == 0 ? disc_line_count_typical(s.r, config)
                                                : annulus_line_count(s.serving_y, s.r, config);
        double acc = 0.0;
        for (std::size_t k = 0; k <= kmax; ++k) {
          const double p = law.pmf(k);
          expct[k] += p;
          acc += p;
        }
        expct[kmax + 1] += std::max(1.0 - acc, 0.0);
      }
      const auto t = chi_square_test(obs, expct);
      if (t.dof < 1.0) {
        c.tested = false;
        c.passed = true;
        c.note = "expected counts pool into a single cell";
        rep.checks.push_back(c);
        continue;
      }
      tested.push_back({c, t});
    }
    std::size_t sparse = 0;
    for (const auto& [cell, members] : cells)
      if (members.size() < opt.min_cell_samples) ++sparse;
    // family-wise level over the tested cells
    const double per_cell = opt.level / std::max<std::size_t>(tested.size(), 1);
    for (auto& [c, t] : tested) {
      c.statistic = t.statistic;
      c.p_value = t.p_value;
      c.threshold = per_cell;
      c.passed = t.p_value > per_cell;
      std::ostringstream os;
      os << "dof " << t.dof << ", Bonferroni over " << tested.size() << " cells";
      c.note = os.str();
      rep.checks.push_back(c);
    }
    ValidationCheck flag;
    flag.name = "N_l under-populated cells";
    flag.kind = "chi2";
    flag.samples = sparse;
    flag.tested = false;
    flag.passed = true;
    flag.note = std::to_string(sparse) + " cells below " + std::to_string(opt.min_cell_samples) +
                " samples, not tested";
    rep.checks.push_back(flag);
  }

  // serving-event frequencies and mass closure
  {
    const auto cov = coverage_probability(config, 1.0);
    const double trials = static_cast<double>(S.size());
    for (int n = 0; n <= 2 && n < static_cast<int>(cov.event_mass.size()); ++n) {
      const double p = cov.event_mass[static_cast<std::size_t>(n)];
      const double k = static_cast<double>(
          std::count_if(S.begin(), S.end(), [n](const auto& s) { return s.serving_line == n; }));
      ValidationCheck c;
      c.name = "P(E" + std::to_string(n) + ") serving-event frequency";
      c.kind = "frequency";
      c.samples = S.size();
      const double z = (k - trials * p) / std::sqrt(trials * p * (1.0 - p));
      c.statistic = z;
      c.p_value = two_sided_normal_p(z);
      c.threshold = two_sided_normal_p(3.0);
      c.passed = std::abs(z) < 3.0;
      std::ostringstream os;
      os << "empirical " << k / trials << ", analytic " << p;
      c.note = os.str();
      rep.checks.push_back(c);
    }
    ValidationCheck c;
    c.name = "serving-event mass closure";
    c.kind = "closure";
    c.statistic = 1.0 - cov.truncation_deficit;
    c.threshold = 0.999;
    c.passed = c.statistic >= c.threshold;
    c.note = "N = " + std::to_string(cov.n_used);
    rep.checks.push_back(c);
  }
  return rep;
}

}  // namespace plpcov
