#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "plpcov/config.hpp"

/// Goodness-of-fit suite comparing conditioned Monte-Carlo samples with the
/// analytic distance, serving-event and line-count laws.
namespace plpcov {

struct ValidationOptions {
  std::uint64_t trials = 20000;
  /// <= 0 selects suite_window_radius(config).
  double window_radius = 0.0;
  std::uint64_t seed = 1;
  int threads = 1;
  /// Per-check rejection level.
  double level = 0.01;
  /// Width of the (y_n, r) cells for the line-count tests.
  double bin_width = 0.005;
  /// Cells with fewer samples are reported as under-populated and not tested.
  std::size_t min_cell_samples = 200;
};

struct ValidationCheck {
  std::string name;
  /// "ks", "chi2", "frequency" or "closure".
  std::string kind;
  double statistic = 0.0;
  double p_value = 0.0;
  /// Level the check is held to (closure: required mass).
  double threshold = 0.0;
  std::size_t samples = 0;
  bool tested = true;
  bool passed = false;
  std::string note;
};

struct ValidationReport {
  double window_radius = 0.0;
  std::uint64_t trials = 0;
  std::vector<ValidationCheck> checks;

  bool passed() const;
};

/// Window large enough that the second closest line and the closest node on
/// the typical line fall inside it except with negligible probability.
double suite_window_radius(const NetworkConfig& config);

/// KS tests of every distance law (conditional laws through the per-sample
/// probability integral transform at the sampled line distance), chi-square
/// tests of the conditional line count per populated (n, y_n, r) cell,
/// serving-event frequencies and the serving-event mass closure.
ValidationReport run_distance_suite(const NetworkConfig& config, const ValidationOptions& options = {});

}  // namespace plpcov
