#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace plpcov::cli {

/// Bad invocation or configuration; exit status 1.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Mode { analytic, simulate, compare, validate, ppp };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);

/// One network configuration of an experiment.
struct Series {
  std::string label;
  double mu_l = 35.0;
  double lambda_v = 35.0;
  /// PPP baseline density; <= 0 means mu_l * lambda_v.
  double lambda_p = 0.0;
};

/// Values that may come from a config file or from flags. Unset members
/// leave the preset / default untouched.
struct Overrides {
  std::optional<std::string> preset;
  std::optional<double> mu_l, lambda_v, alpha, lambda_p;
  std::optional<int> m;
  std::optional<std::string> beta_db;
  std::optional<std::uint64_t> trials, seed;
  std::optional<double> window_km;
  std::optional<std::string> out, svg;
  std::optional<int> threads;
  std::optional<bool> ppp;
  std::optional<double> tol_series;
  std::optional<int> n_max_cap;

  /// Members set here replace those of base.
  void apply_to(Overrides& base) const;
};

struct ExperimentSpec {
  Mode mode = Mode::analytic;
  std::string preset;
  std::vector<Series> series{{"", 35.0, 35.0, 0.0}};
  double alpha = 4.0;
  int m = 1;
  /// Strictly increasing, nonempty.
  std::vector<double> beta_db;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 1;
  /// <= 0 selects the default window.
  double window_km = 0.0;
  std::string out;
  std::string svg;
  int threads = 1;
  /// Add the PPP baseline column in compare mode.
  bool with_ppp = false;
  double tol_series = 1e-3;
  int n_max_cap = 128;
};

/// "a:step:b" (inclusive) or a comma separated list, in dB.
std::vector<double> parse_beta_grid(const std::string& text);

/// Flat `key = value` file; '#' starts a comment. Keys mirror the long
/// flags with '_' for '-'.
Overrides read_config_file(const std::string& path);
Overrides parse_config(std::istream& in, const std::string& origin);

/// Defaults, then the preset, then `settings`; validates the result.
ExperimentSpec build_spec(Mode mode, const Overrides& settings, int default_threads);

}  // namespace plpcov::cli
