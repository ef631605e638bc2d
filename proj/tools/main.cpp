#include <fstream>
#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "experiment.hpp"
#include "output.hpp"
#include "plpcov/coverage.hpp"
#include "plpcov/geometry.hpp"
#include "plpcov/montecarlo.hpp"
#include "plpcov/validation.hpp"

using namespace plpcov;
using namespace plpcov::cli;

namespace {

enum Exit { kOk = 0, kUsage = 1, kNumeric = 2, kValidation = 3 };

void add_common_flags(CLI::App* sub, Overrides& o, std::string& config_path) {
  sub->add_option("--config", config_path, "flat key = value file; flags override it");
  sub->add_option("--preset", o.preset, "fig4, fig5, fig6, fig7 or fig7-asymptotic");
  sub->add_option("--mu-l", o.mu_l, "line density (km/km^2)");
  sub->add_option("--lambda-v", o.lambda_v, "transmitter density on each line (/km)");
  sub->add_option("--alpha", o.alpha, "path-loss exponent (> 2)");
  sub->add_option("--m", o.m, "Nakagami fading parameter (integer 1..16)");
  sub->add_option("--beta-db", o.beta_db, "SIR thresholds in dB: start:step:stop or a,b,c");
  sub->add_option("--trials", o.trials, "Monte-Carlo trials");
  sub->add_option("--seed", o.seed, "random seed");
  sub->add_option("--window-km", o.window_km, "simulation window radius (km); 0 = default");
  sub->add_option("--out", o.out, "output CSV (stdout when absent)");
  sub->add_option("--svg", o.svg, "optional SVG plot");
  sub->add_option("--threads", o.threads, "worker threads (default: PLPCOV_THREADS or all cores)");
  sub->add_option("--lambda-p", o.lambda_p, "PPP baseline density (/km^2); default mu_l * lambda_v");
  sub->add_option("--tol-series", o.tol_series, "serving-event mass deficit target");
  sub->add_option("--n-max-cap", o.n_max_cap, "largest serving-line rank evaluated");
  sub->add_flag_function(
      "--ppp", [&o](std::int64_t) { o.ppp = true; }, "add the PPP baseline (compare)");
}

/// Opens the output for `label`; stdout when no path was given.
class Sink {
 public:
  Sink(const std::string& path, const std::string& label, bool many) {
    if (path.empty()) {
      if (many) std::cout << "# " << label << "\n";
      return;
    }
    path_ = many ? suffixed_path(path, label) : path;
    file_ = std::make_unique<std::ofstream>(path_);
    if (!*file_) throw UsageError("cannot write '" + path_ + "'");
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::unique_ptr<std::ofstream> file_;
};

double ppp_density(const Series& s) { return s.lambda_p > 0.0 ? s.lambda_p : s.mu_l * s.lambda_v; }

Curve run_curve(const ExperimentSpec& spec, const Series& ser) {
  const auto config = NetworkConfig::from_transmitter_density(ser.mu_l, ser.lambda_v, spec.alpha, spec.m);
  std::vector<double> betas;
  for (double b : spec.beta_db) betas.push_back(db_to_linear(b));
  Curve curve{ser.label, {}};
  for (double b : spec.beta_db) curve.rows.push_back({b, {}, {}, {}, {}, {}});

  const bool analytic = spec.mode == Mode::analytic || spec.mode == Mode::compare;
  const bool mc = spec.mode == Mode::simulate || spec.mode == Mode::compare;
  const bool ppp = spec.mode == Mode::ppp || (spec.mode == Mode::compare && spec.with_ppp);
  const std::string tag = ser.label.empty() ? "" : ser.label + ": ";

  if (analytic) {
    CoverageOptions opt;
    opt.tol_series = spec.tol_series;
    opt.n_max_cap = spec.n_max_cap;
    const auto res = coverage_curve(config, betas, opt, spec.threads);
    double runtime = 0.0;
    for (std::size_t i = 0; i < res.size(); ++i) {
      curve.rows[i].pc_analytic = res[i].pc;
      runtime += res[i].runtime_seconds;
      for (const auto& w : res[i].warnings) std::cerr << tag << "warning: " << w << "\n";
    }
    std::cerr << tag << "analytic: N = " << res.front().n_used << ", event-mass deficit "
              << res.front().truncation_deficit << ", " << runtime << " s\n";
  }
  if (mc) {
    const double w = spec.window_km > 0.0 ? spec.window_km : default_window_radius(config);
    const auto sum = estimate_coverage(config, betas, spec.trials, w, spec.seed, spec.threads);
    for (std::size_t i = 0; i < betas.size(); ++i) {
      const auto& e = sum.coverage[i];
      curve.rows[i].pc_mc = e.mean;
      curve.rows[i].ci_lo = e.ci_lo;
      curve.rows[i].ci_hi = e.ci_hi;
    }
    std::cerr << tag << "simulate: " << sum.trials << " trials, window " << w << " km, "
              << sum.retries << " retries, " << sum.failed_trials << " failed\n";
  }
  if (ppp) {
    const double lp = ppp_density(ser);
    // distinct stream family from the Cox simulation
    const auto seed = Rng::mix(spec.seed ^ 0x5050505050505050ULL);
    const auto est = coverage_ppp_baseline(lp, spec.alpha, spec.m, betas, spec.trials, seed,
                                           spec.threads, spec.window_km);
    for (std::size_t i = 0; i < betas.size(); ++i) curve.rows[i].pc_ppp = est[i].mean;
    std::cerr << tag << "ppp: lambda_p = " << lp << " /km^2, " << spec.trials << " trials\n";
  }
  return curve;
}

int run(const ExperimentSpec& spec) {
  const bool many = spec.series.size() > 1;
  if (spec.mode == Mode::validate) {
    bool ok = true;
    for (const auto& ser : spec.series) {
      const auto config =
          NetworkConfig::from_transmitter_density(ser.mu_l, ser.lambda_v, spec.alpha, spec.m);
      ValidationOptions opt;
      opt.trials = spec.trials;
      opt.window_radius = spec.window_km;
      opt.seed = spec.seed;
      opt.threads = spec.threads;
      const auto rep = run_distance_suite(config, opt);
      Sink sink(spec.out, ser.label, many);
      write_report(sink.stream(), rep);
      std::size_t failed = 0;
      for (const auto& c : rep.checks) failed += c.tested && !c.passed;
      std::cerr << (ser.label.empty() ? "" : ser.label + ": ") << "validate: " << rep.checks.size()
                << " checks, " << failed << " failed, window " << rep.window_radius << " km\n";
      ok = ok && rep.passed();
    }
    return ok ? kOk : kValidation;
  }

  std::vector<Curve> curves;
  for (const auto& ser : spec.series) {
    curves.push_back(run_curve(spec, ser));
    Sink sink(spec.out, ser.label, many);
    write_csv(sink.stream(), curves.back());
  }
  if (!spec.svg.empty()) {
    std::ofstream svg(spec.svg);
    if (!svg) throw UsageError("cannot write '" + spec.svg + "'");
    std::string title = mode_name(spec.mode) + " coverage";
    if (!spec.preset.empty()) title += " (" + spec.preset + ")";
    write_svg(svg, title, curves);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SIR coverage of a typical receiver in a Poisson line Cox network"};
  app.require_subcommand(1);
  Overrides flags;
  std::string config_path;
  const std::pair<const char*, const char*> modes[] = {
      {"analytic", "analytic coverage curve"},
      {"simulate", "Monte-Carlo coverage curve"},
      {"compare", "analytic and Monte-Carlo curves (plus PPP baseline with --ppp)"},
      {"validate", "goodness-of-fit suite for the distance and line-count laws"},
      {"ppp", "Monte-Carlo coverage of the planar PPP with the same node density"}};
  for (const auto& [name, help] : modes) add_common_flags(app.add_subcommand(name, help), flags, config_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  try {
    const Mode mode = parse_mode(app.get_subcommands().front()->get_name());
    Overrides settings;
    if (!config_path.empty()) settings = read_config_file(config_path);
    flags.apply_to(settings);
    return run(build_spec(mode, settings, default_thread_count()));
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kNumeric;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kNumeric;
  }
}
