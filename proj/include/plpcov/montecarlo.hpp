#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "plpcov/config.hpp"
#include "plpcov/geometry.hpp"
#include "plpcov/interference.hpp"
#include "plpcov/rng.hpp"

/// Monte-Carlo simulation of the Palm network seen from the typical receiver.
namespace plpcov {

inline constexpr int kRetryBudget = 100;

/// Nakagami-m power gain: Gamma(m, 1/m), unit mean.
double sample_nakagami_gain(int m, Rng& rng);

struct TrialRecord {
  /// 0: typical line; n >= 1: n-th closest other line.
  int serving_line = 0;
  double y_n = 0.0;
  double r = 0.0;
  /// Finite SIR. Meaningless when no_interferers is set.
  double sir = 0.0;
  /// Only the serving node transmits in the window: covered at every threshold.
  bool no_interferers = false;
  /// Other lines with y_n < rho < r (0 < rho < r for the typical line).
  std::size_t annulus_lines = 0;
  /// Empty windows redrawn before this trial succeeded.
  int retries = 0;
  /// Retry budget exhausted; every other field is unset.
  bool failed = false;

  bool covered(double beta) const { return !failed && (no_interferers || sir > beta); }
};

/// One trial: Palm realization, nearest-transmitter association, independent
/// gains for every node. Redraws windows without transmitters up to the
/// retry budget.
TrialRecord run_trial(const NetworkConfig& config, double window_radius, Rng& rng);

struct CoverageEstimate {
  double beta = 0.0;
  std::uint64_t covered = 0;
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
};

struct EstimatorSummary {
  std::uint64_t trials = 0;
  std::uint64_t failed_trials = 0;
  std::uint64_t retries = 0;
  double window_radius = 0.0;
  std::vector<CoverageEstimate> coverage;
  /// Trials served by the typical line (index 0) and the n-th other line.
  std::vector<std::uint64_t> serving_counts;
};

/// Per-threshold empirical coverage with 95% Wilson intervals. Trial i draws
/// from Rng(seed, i); the result does not depend on `threads`.
EstimatorSummary estimate_coverage(const NetworkConfig& config, const std::vector<double>& betas,
                                   std::uint64_t trials, double window_radius,
                                   std::uint64_t seed, int threads = 1);

/// Distances observed in one realization, for checking the distance laws.
/// Quantities absent from the window are +inf.
struct DistanceSample {
  double y1 = 0.0, y2 = 0.0;  // closest and second closest other lines
  double x_offset = 0.0;      // closest node offset from the foot, line 1
  double s0 = 0.0;            // closest node on the typical line
  double v0 = 0.0;            // closest node on any other line
  // index 0: n = 1, index 1: n = 2
  double s[2] = {0.0, 0.0};   // closest node on the n-th line
  double u[2] = {0.0, 0.0};   // closest node on the n - 1 closer lines
  double v[2] = {0.0, 0.0};   // closest node on lines beyond the n-th
  double w[2] = {0.0, 0.0};   // min(s0, u, v)
  int serving_line = 0;
  double serving_y = 0.0;
  double r = 0.0;
  std::size_t annulus_lines = 0;
};

struct DistanceSamples {
  double window_radius = 0.0;
  std::vector<DistanceSample> samples;
};

/// Realizations reduced to the distance variables of DistanceSample, in trial
/// order. Trial i draws from Rng(seed, i).
DistanceSamples conditioned_estimators(const NetworkConfig& config, std::uint64_t trials,
                                    double window_radius, std::uint64_t seed, int threads = 1);

/// Interference sampled under the exact conditioning of ctx: serving node on
/// line n at distance r, no other transmitter in b(o, r). Inner lines are drawn
/// uniformly on (0, y_n) and accepted with their chord void probability;
/// annulus lines are a Poisson process thinned by the same probability; outer
/// lines and nodes are unconditioned inside the window.
double sample_conditioned_interference(const LaplaceContext& ctx, double window_radius,
                                       Rng& rng);

struct MeanEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// MC estimate of E[exp(-s I)] under the conditioning of ctx, for every s.
/// With far_field, each draw is multiplied by the exact conditional mean of
/// exp(-s I) over transmitters outside the window given the lines inside it
/// (1D PPP functional per line, Poisson functional for lines beyond), which
/// removes the window truncation bias.
std::vector<MeanEstimate> mc_laplace(const std::vector<double>& s, const LaplaceContext& ctx,
                                     std::uint64_t trials, double window_radius,
                                     std::uint64_t seed, int threads = 1, bool far_field = true);

/// Runs body(begin, end) over [0, n) split into contiguous chunks, one per
/// worker. Chunk boundaries depend only on n and threads.
void parallel_chunks(std::uint64_t n, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t)>& body);

/// Default worker count: PLPCOV_THREADS if set, else hardware concurrency.
int default_thread_count();

}  // namespace plpcov
