#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <utility>
#include <vector>

/// Goodness-of-fit and interval helpers for the simulation checks.
namespace plpcov {

struct TestResult {
  double statistic = 0.0;
  double p_value = 0.0;
  double dof = 0.0;  // chi-square only
  std::size_t samples = 0;
};

/// Asymptotic Kolmogorov p-value, P(D_n > d), with Stephens' small-sample
/// correction of the argument.
double kolmogorov_pvalue(double d, std::size_t n);

/// One-sample KS test of values already mapped through their hypothesised CDF
/// (uniform on [0, 1] under the null).
TestResult ks_test_uniform(std::vector<double> u);

/// One-sample KS test of samples against a CDF.
TestResult ks_test(std::span<const double> samples, const std::function<double(double)>& cdf);

/// Pearson chi-square of observed counts against expected counts. Adjacent
/// cells are pooled from the tail inward until each expectation is at least
/// min_expected. dof = pooled cells - 1 - fitted_parameters.
TestResult chi_square_test(std::span<const double> observed, std::span<const double> expected,
                           double min_expected = 5.0, int fitted_parameters = 0);

/// Wilson score interval for k successes in n trials.
std::pair<double, double> wilson_interval(std::uint64_t k, std::uint64_t n, double confidence);

}  // namespace plpcov
