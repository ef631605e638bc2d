#include "plpcov/stats.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include "plpcov/config.hpp"

namespace plpcov {

double kolmogorov_pvalue(double d, std::size_t n) {
  if (n == 0) throw ParameterError("KS test needs at least one sample");
  const double sn = std::sqrt(static_cast<double>(n));
  const double lambda = (sn + 0.12 + 0.11 / sn) * d;
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-16) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

TestResult ks_test_uniform(std::vector<double> u) {
  if (u.empty()) throw ParameterError("KS test needs at least one sample");
  std::sort(u.begin(), u.end());
  const double n = static_cast<double>(u.size());
  double d = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double v = std::clamp(u[i], 0.0, 1.0);
    d = std::max({d, (i + 1) / n - v, v - i / n});
  }
  return {d, kolmogorov_pvalue(d, u.size()), 0.0, u.size()};
}

TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf) {
  std::vector<double> u;
  u.reserve(samples.size());
  for (double x : samples) u.push_back(cdf(x));
  return ks_test_uniform(std::move(u));
}

TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                           double min_expected, int fitted_parameters) {
  if (observed.size() != expected.size() || observed.empty())
    throw ParameterError("chi-square needs matching, non-empty observed and expected counts");
  std::vector<double> obs(observed.begin(), observed.end());
  std::vector<double> exp(expected.begin(), expected.end());
  // pool the upper tail, then the lower tail
  while (exp.size() > 1 && exp.back() < min_expected) {
    exp[exp.size() - 2] += exp.back();
    obs[obs.size() - 2] += obs.back();
    exp.pop_back();
    obs.pop_back();
  }
  while (exp.size() > 1 && exp.front() < min_expected) {
    exp[1] += exp[0];
    obs[1] += obs[0];
    exp.erase(exp.begin());
    obs.erase(obs.begin());
  }
  TestResult r;
  for (double o : observed) r.samples += static_cast<std::size_t>(o);
  for (std::size_t i = 0; i < exp.size(); ++i) {
    if (!(exp[i] > 0.0)) continue;
    const double diff = obs[i] - exp[i];
    r.statistic += diff * diff / exp[i];
  }
  r.dof = static_cast<double>(exp.size()) - 1.0 - fitted_parameters;
  if (r.dof < 1.0) {
    // a single pooled cell carries no information
    r.p_value = 1.0;
    return r;
  }
  boost::math::chi_squared dist(r.dof);
  r.p_value = boost::math::cdf(boost::math::complement(dist, r.statistic));
  return r;
}

std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence) {
  if (n == 0) throw ParameterError("interval needs n >= 1");
  const double z =
      boost::math::quantile(boost::math::normal(), 0.5 + 0.5 * confidence);
  const double nn = static_cast<double>(n);
  const double p = k / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2.0 * nn)) / (1.0 + z2 / nn);
  const double half = z / (1.0 + z2 / nn) * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn));
  return {std::max(0.0, std::min(centre - half, p)), std::min(1.0, std::max(centre + half, p))};
}

}  // namespace plpcov
