// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is
// the number of failed criteria.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "plpcov/coverage.hpp"
#include "plpcov/distances.hpp"
#include "plpcov/geometry.hpp"
#include "plpcov/interference.hpp"
#include "plpcov/montecarlo.hpp"
#include "plpcov/validation.hpp"

using namespace plpcov;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << v;
  return os.str();
}

std::vector<double> fig_grid() {
  std::vector<double> b;
  for (int db = -10; db <= 10; db += 2) b.push_back(db_to_linear(db));
  return b;
}

NetworkConfig cox(double mu, double lv, int m = 1) {
  return NetworkConfig::from_transmitter_density(mu, lv, 4.0, m);
}

/// Analytic curves over the threshold grid, shared by several criteria.
std::map<std::pair<double, double>, std::vector<CoverageResult>> g_curves;

const std::vector<CoverageResult>& curve(double mu, double lv) {
  auto& c = g_curves[{mu, lv}];
  if (c.empty()) c = coverage_curve(cox(mu, lv), fig_grid());
  return c;
}

constexpr std::size_t kZeroDb = 5;  // index of 0 dB in fig_grid()

Outcome fig4_agreement() {
  const auto config = cox(35, 35);
  const auto& an = curve(35, 35);
  const auto mc = estimate_coverage(config, fig_grid(), 100000, default_window_radius(config), 4);
  double worst = 0.0;
  int at = 0;
  for (std::size_t i = 0; i < an.size(); ++i) {
    const double d = std::abs(an[i].pc - mc.coverage[i].mean);
    if (d > worst) {
      worst = d;
      at = -10 + 2 * static_cast<int>(i);
    }
  }
  return {worst < 0.015, "max |analytic - MC| = " + fmt(worst) + " at " + std::to_string(at) +
                             " dB over 11 thresholds, 1e5 trials (tolerance 0.015)"};
}

Outcome monotone_trend(const std::vector<std::pair<double, double>>& cfgs, bool decreasing,
                       const std::string& what) {
  std::vector<double> pc;
  std::string vals;
  for (auto [mu, lv] : cfgs) {
    pc.push_back(curve(mu, lv)[kZeroDb].pc);
    vals += (vals.empty() ? "" : ", ") + fmt(pc.back(), 5);
  }
  bool ok = true;
  for (std::size_t i = 1; i < pc.size(); ++i) ok = ok && (decreasing ? pc[i] < pc[i - 1] : pc[i] > pc[i - 1]);
  return {ok, "pc(0 dB) over " + what + ": " + vals};
}

std::map<std::string, double> read_keys(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::map<std::string, double> out;
  std::string line;
  while (std::getline(in, line)) {
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::string key = line.substr(0, eq);
    key.erase(std::remove_if(key.begin(), key.end(), ::isspace), key.end());
    out[key] = std::stod(line.substr(eq + 1));
  }
  return out;
}

Outcome ppp_asymptotics(const std::string& thresholds) {
  const auto k = read_keys(thresholds);
  const double dh = k.at("delta_high"), dl = k.at("delta_low");
  const auto seed = static_cast<std::uint64_t>(k.at("eval_seed"));
  const auto trials = static_cast<std::uint64_t>(k.at("eval_trials"));
  auto gap = [&](double mu, double lv) {
    const auto c = cox(mu, lv);
    const auto mc = estimate_coverage(c, {1.0}, trials, default_window_radius(c), seed);
    const auto ppp = coverage_ppp_baseline(mu * lv, 4.0, 1, {1.0}, trials, seed + 1);
    return std::abs(mc.coverage[0].mean - ppp[0].mean);
  };
  const double high = gap(150, 5), low = gap(10, 100);
  return {high < dh && low > dl, "|pc - pc_ppp| = " + fmt(high) + " (< " + fmt(dh) +
                                     ") for mu_l=150, lambda_v=5; " + fmt(low) + " (> " +
                                     fmt(dl) + ") for mu_l=10, lambda_v=100"};
}

Outcome distance_suite() {
  ValidationOptions opt;
  opt.seed = 7;
  const auto rep = run_distance_suite(cox(35, 35), opt);
  int ks = 0, chi = 0, other = 0, failed = 0;
  double min_p = 1.0, closure = 0.0;
  std::string first_fail;
  for (const auto& c : rep.checks) {
    if (!c.tested) continue;
    if (c.kind == "ks") ++ks;
    else if (c.kind == "chi2") ++chi;
    else ++other;
    if (c.kind == "closure") closure = c.statistic;
    else if (c.kind == "ks") min_p = std::min(min_p, c.p_value);
    if (!c.passed) {
      ++failed;
      if (first_fail.empty()) first_fail = "; first failure: " + c.name + " p=" + fmt(c.p_value);
    }
  }
  return {rep.passed(), std::to_string(ks) + " KS, " + std::to_string(chi) + " chi-square, " +
                            std::to_string(other) + " frequency/closure checks on " +
                            std::to_string(rep.trials) + " realizations; min KS p = " + fmt(min_p) +
                            ", closure " + fmt(closure, 6) + ", " + std::to_string(failed) +
                            " failed" + first_fail};
}

Outcome laplace_correctness() {
  // contexts drawn once from a fixed stream
  Rng rng(2026, 0);
  int compared = 0, outside = 0, fd_bad = 0;
  double worst_z = 0.0, worst_fd = 0.0;
  for (int i = 0; i < 5; ++i) {
    const double mu = rng.uniform(2.0, 8.0), lv = rng.uniform(2.0, 8.0);
    const int n = static_cast<int>(rng.uniform(0.0, 4.0));
    const double ref = reference_distance(cox(mu, lv));
    const double r = ref * rng.uniform(0.5, 2.0);
    const double y = n == 0 ? 0.0 : r * rng.uniform(0.2, 0.95);
    const double beta = db_to_linear(rng.uniform(-5.0, 5.0));
    for (int m = 1; m <= 3; ++m) {
      const auto ctx = LaplaceContext::make(r, y, n, cox(mu, lv, m));
      const double s = m * beta * std::pow(r, 4.0);
      const auto est = mc_laplace({s}, ctx, 100000, 1.5, 20261014 + 10 * i + m);
      LaplaceOptions opt;
      opt.order = 2;
      const Jet j = laplace_total(s, ctx, opt);
      const double z = (j.value() - est[0].mean) / est[0].stderr_;
      ++compared;
      outside += std::abs(z) >= 3.0;
      worst_z = std::max(worst_z, std::abs(z));

      const double h = 1e-3 * s;
      auto f = [&](double x) { return laplace_total(x, ctx, opt).value(); };
      const double fp = f(s + h), f0 = f(s), fm = f(s - h);
      const double d1 = (fp - fm) / (2.0 * h), d2 = (fp - 2.0 * f0 + fm) / (h * h);
      const double e0 = std::abs(j.derivative(0) - f0) / std::abs(f0);
      const double e1 = std::abs(j.derivative(1) - d1) / std::abs(d1);
      const double e2 = std::abs(j.derivative(2) - d2) / std::abs(d2);
      const double e = std::max({e0, e1, e2});
      worst_fd = std::max(worst_fd, e);
      fd_bad += e >= 1e-4;
    }
  }
  return {outside == 0 && fd_bad == 0,
          std::to_string(compared) + " contexts x m: " + std::to_string(outside) +
              " outside 3 SE (max |z| = " + fmt(worst_z, 3) + "), max jet/FD relative error " +
              fmt(worst_fd, 3) + " for k <= 2"};
}

/// Integral of the pdf with x = lower + u^2 (absorbs inverse square-root peaks).
double mass(const Distribution1D& d) {
  const auto s = d.support();
  const double lo = s.lower;
  const quad::Options opt{1e-13, 1e-10, 2000, true};
  auto f = [&](double u) { return u > 0.0 ? 2.0 * u * d.pdf(lo + u * u) : 0.0; };
  if (std::isfinite(s.upper)) return quad::integral(f, 0.0, std::sqrt(s.upper - lo), opt);
  return quad::integral_to_infinity(f, 0.0, 0.1, opt);
}

Outcome property_battery() {
  int dists = 0, dist_bad = 0, curves = 0, curve_bad = 0, jets = 0, jet_bad = 0;
  double worst_mass = 0.0;
  for (auto [mu, lv] : {std::pair{35.0, 35.0}, std::pair{15.0, 35.0}, std::pair{35.0, 50.0},
                        std::pair{150.0, 5.0}, std::pair{10.0, 100.0}}) {
    const auto c = cox(mu, lv);
    const double ll = c.lambda_l();
    const double ref = reference_distance(c);
    std::vector<Distribution1D> laws{nth_line_distance(1, ll), nth_line_distance(2, ll),
                                     nth_line_distance(4, ll), closest_offset_on_line(lv),
                                     closest_node_on_typical_line(lv),
                                     closest_node_on_other_lines(ll, lv),
                                     serving_distance_on_typical_line(c)};
    for (double y : {0.3 * ref, ref, 2.0 * ref}) {
      laws.push_back(closest_node_on_line(y, lv));
      laws.push_back(closest_node_beyond(y, ll, lv));
      for (int n : {1, 2, 4}) {
        laws.push_back(closest_node_on_inner_lines(n, y, lv));
        laws.push_back(closest_competitor(n, y, c));
        laws.push_back(serving_distance_on_line(n, y, c));
      }
    }
    for (const auto& d : laws) {
      if (d.is_empty_minimum()) continue;
      const double e = std::abs(mass(d) - 1.0);
      ++dists;
      dist_bad += e > 1e-6;
      worst_mass = std::max(worst_mass, e);
    }
  }
  for (const auto& [key, cv] : g_curves) {
    ++curves;
    for (std::size_t i = 1; i < cv.size(); ++i) curve_bad += cv[i].pc > cv[i - 1].pc;
  }
  for (int m : {1, 2, 4, 8}) {
    const auto c = cox(35, 35, m);
    for (auto [r, y, n] : {std::tuple{0.01, 0.005, 1}, std::tuple{0.03, 0.0, 0}, std::tuple{0.04, 0.02, 3}}) {
      const auto ctx = LaplaceContext::make(r, y, n, c);
      for (double beta : {0.1, 1.0, 10.0}) {
        const Jet j = laplace_total(m * beta * std::pow(r, 4.0), ctx);
        ++jets;
        for (int k = 0; k <= j.order(); ++k) jet_bad += (k % 2 == 0 ? 1.0 : -1.0) * j[k] < 0.0;
      }
    }
  }
  return {dist_bad == 0 && curve_bad == 0 && jet_bad == 0,
          std::to_string(dists) + " distributions (max |mass - 1| = " + fmt(worst_mass, 3) + "), " +
              std::to_string(curves) + " coverage curves (" + std::to_string(curve_bad) +
              " increases), " + std::to_string(jets) + " jets (" + std::to_string(jet_bad) +
              " sign violations)"};
}

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism(const std::string& tool) {
  const auto dir = std::filesystem::temp_directory_path() / "plpcov_acceptance";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "t1.csv").string(), b = (dir / "t8.csv").string();
  auto run = [&](int threads, const std::string& out) {
    const std::string cmd = tool + " simulate --seed 42 --threads " + std::to_string(threads) +
                            " --out " + out + " 2>/dev/null";
    const int st = std::system(cmd.c_str());
    return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  };
  const int s1 = run(1, a), s8 = run(8, b);
  if (s1 != 0 || s8 != 0)
    return {false, "tool exited with " + std::to_string(s1) + " / " + std::to_string(s8)};
  const auto x = slurp(a), y = slurp(b);
  return {!x.empty() && x == y, std::to_string(x.size()) + " bytes, " +
                                    (x == y ? std::string("identical") : std::string("different"))};
}

}  // namespace

int main(int argc, char** argv) {
  std::string tool, thresholds;
  for (int i = 1; i + 1 < argc; i += 2) {
    const std::string k = argv[i];
    if (k == "--tool") tool = argv[i + 1];
    else if (k == "--thresholds") thresholds = argv[i + 1];
  }
  if (tool.empty() || thresholds.empty()) {
    std::cerr << "usage: acceptance --tool PATH --thresholds FILE\n";
    return 64;
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1 fig4 analytic vs Monte-Carlo", fig4_agreement},
      {"2 fig5 coverage decreases with line density",
       [] { return monotone_trend({{15, 35}, {25, 35}, {35, 35}, {45, 35}}, true, "mu_l = 15,25,35,45"); }},
      {"3 fig6 coverage increases with node density",
       [] { return monotone_trend({{35, 20}, {35, 30}, {35, 40}, {35, 50}}, false, "lambda_v = 20,30,40,50"); }},
      {"4 fig7 planar PPP asymptotics", [&] { return ppp_asymptotics(thresholds); }},
      {"5 distance, serving and line-count laws", distance_suite},
      {"6 Laplace transform vs conditioned MC and jets vs finite differences", laplace_correctness},
      {"7 normalization and monotonicity battery", property_battery},
      {"8 simulate output independent of thread count", [&] { return determinism(tool); }},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " [" << name << "] " << o.detail << " ("
              << fmt(dt, 3) << " s)" << std::endl;
  }
  return failed;
}
