#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plpcov/config.hpp"
#include "plpcov/interference.hpp"
#include "plpcov/quadrature.hpp"

/// Analytic SIR coverage probability of the typical receiver and the
/// homogeneous planar PPP baseline.
namespace plpcov {

struct CoverageOptions {
  /// Stop adding serving events once the uncovered event mass is below this.
  double tol_series = 1e-3;
  /// Largest serving-line rank evaluated.
  int n_max_cap = 128;
  LineAveraging averaging = LineAveraging::void_weighted;
  /// Outermost integral over the serving line distance y_n.
  quad::Options outer{1e-9, 1e-6, 400, true};
  /// Integral over the serving distance for fixed y_n.
  quad::Options middle{1e-10, 1e-7, 400, true};
  /// Integrals over line distances inside the transforms.
  quad::Options lines{1e-12, 1e-9, 400, true};
  /// Per-line offset integrals used to build the exponent table.
  quad::Options line{1e-300, 1e-11, 400, true};
  /// Accuracy of the tabulated per-line exponent.
  double table_tol = 1e-9;
};

struct CoverageResult {
  double beta = 0.0;
  double pc = 0.0;
  /// terms[0]: typical-line serving event; terms[n]: n-th closest other line.
  std::vector<double> terms;
  /// Probability of each serving event, same indexing as terms.
  std::vector<double> event_mass;
  /// 1 - covered event mass.
  double truncation_deficit = 0.0;
  /// Number of other-line serving events included (N).
  int n_used = 0;
  bool cap_reached = false;
  std::uint64_t evaluations = 0;
  double runtime_seconds = 0.0;
  std::vector<std::string> warnings;
};

/// P(SIR > beta | serving event, r, y_n) with beta taken from ctx.config.
/// Clamped to [0, 1]; clamping beyond rounding level is logged to stderr.
double conditional_coverage(const LaplaceContext& ctx, const LaplaceOptions& opt = {});

/// Coverage probability at linear threshold beta (overrides config.beta()).
CoverageResult coverage_probability(const NetworkConfig& config, double beta,
                                    const CoverageOptions& options = {});

/// coverage_probability over a grid of linear thresholds; threshold points are
/// distributed over `threads` workers and returned in grid order.
std::vector<CoverageResult> coverage_curve(const NetworkConfig& config,
                                           const std::vector<double>& betas,
                                           const CoverageOptions& options = {}, int threads = 1);

/// Rayleigh fading, alpha = 4 closed form for the planar PPP with nearest
/// association: 1 / (1 + sqrt(beta) (pi/2 - atan(1 / sqrt(beta)))).
double ppp_coverage_closed_form(double beta);

struct PppEstimate {
  double beta = 0.0;
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Monte-Carlo coverage of a homogeneous planar PPP of transmitters with
/// density lambda_p (km^-2), nearest-transmitter association and Nakagami-m
/// fading, for every threshold in `betas` (linear) from the same trials.
std::vector<PppEstimate> coverage_ppp_baseline(double lambda_p, double alpha, int m,
                                               const std::vector<double>& betas,
                                               std::uint64_t trials, std::uint64_t seed,
                                               int threads = 1, double window_radius = 0.0);

/// Window used by coverage_ppp_baseline when window_radius <= 0: same
/// tail-interference rule as the Cox default, for a planar PPP.
double ppp_default_window(double lambda_p, double alpha, double relative_tail = 1e-3);

}  // namespace plpcov
