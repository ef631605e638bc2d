#include "experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace plpcov::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <class T>
T parse_number(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  T v{};
  const auto* end = t.data() + t.size();
  const auto [ptr, ec] = std::from_chars(t.data(), end, v);
  if (t.empty() || ec != std::errc() || ptr != end)
    throw UsageError("invalid value '" + text + "' for " + what);
  return v;
}

bool parse_bool(const std::string& text, const std::string& what) {
  const std::string t = trim(text);
  if (t == "1" || t == "true" || t == "yes" || t == "on") return true;
  if (t == "0" || t == "false" || t == "no" || t == "off") return false;
  throw UsageError("invalid boolean '" + text + "' for " + what);
}

std::string series_label(double mu, double lv) {
  std::ostringstream os;
  os << "mu" << mu << "_lv" << lv;
  return os.str();
}

Series make_series(double mu, double lv) { return {series_label(mu, lv), mu, lv, 0.0}; }

constexpr const char* kDefaultGrid = "-10:2:10";

void apply_preset(const std::string& name, ExperimentSpec& spec) {
  spec.preset = name;
  spec.alpha = 4.0;
  spec.m = 1;
  spec.beta_db = parse_beta_grid(kDefaultGrid);
  if (name == "fig4") {
    spec.series = {make_series(35, 35)};
  } else if (name == "fig5") {
    spec.series.clear();
    for (double mu : {15.0, 25.0, 35.0, 45.0}) spec.series.push_back(make_series(mu, 35));
  } else if (name == "fig6") {
    spec.series.clear();
    for (double lv : {20.0, 30.0, 40.0, 50.0}) spec.series.push_back(make_series(35, lv));
  } else if (name == "fig7") {
    spec.series = {make_series(35, 35), make_series(150, 5), make_series(10, 100)};
    spec.with_ppp = true;
  } else if (name == "fig7-asymptotic") {
    spec.series = {make_series(150, 5), make_series(10, 100)};
    spec.with_ppp = true;
  } else {
    throw UsageError("unknown preset '" + name +
                     "' (expected fig4, fig5, fig6, fig7 or fig7-asymptotic)");
  }
}

}  // namespace

Mode parse_mode(const std::string& name) {
  static const std::map<std::string, Mode> modes{{"analytic", Mode::analytic},
                                                 {"simulate", Mode::simulate},
                                                 {"compare", Mode::compare},
                                                 {"validate", Mode::validate},
                                                 {"ppp", Mode::ppp}};
  const auto it = modes.find(name);
  if (it == modes.end()) throw UsageError("unknown mode '" + name + "'");
  return it->second;
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::analytic: return "analytic";
    case Mode::simulate: return "simulate";
    case Mode::compare: return "compare";
    case Mode::validate: return "validate";
    case Mode::ppp: return "ppp";
  }
  return "?";
}

void Overrides::apply_to(Overrides& base) const {
  auto take = [](auto& dst, const auto& src) {
    if (src) dst = src;
  };
  take(base.preset, preset);
  take(base.mu_l, mu_l);
  take(base.lambda_v, lambda_v);
  take(base.alpha, alpha);
  take(base.lambda_p, lambda_p);
  take(base.m, m);
  take(base.beta_db, beta_db);
  take(base.trials, trials);
  take(base.seed, seed);
  take(base.window_km, window_km);
  take(base.out, out);
  take(base.svg, svg);
  take(base.threads, threads);
  take(base.ppp, ppp);
  take(base.tol_series, tol_series);
  take(base.n_max_cap, n_max_cap);
}

std::vector<double> parse_beta_grid(const std::string& text) {
  const std::string t = trim(text);
  std::vector<double> grid;
  if (t.empty()) return grid;
  // a leading '-' is a sign, not a range separator
  if (t.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(parse_number<double>(item, "beta_db"));
    if (parts.size() != 3) throw UsageError("beta grid range must be start:step:stop");
    const double a = parts[0], step = parts[1], b = parts[2];
    if (!(step > 0.0) || b < a) throw UsageError("beta grid range needs step > 0 and stop >= start");
    const auto count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
    if (count > 100000) throw UsageError("beta grid has too many points");
    for (long i = 0; i < count; ++i) grid.push_back(a + static_cast<double>(i) * step);
  } else {
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ',')) grid.push_back(parse_number<double>(item, "beta_db"));
  }
  return grid;
}

Overrides parse_config(std::istream& in, const std::string& origin) {
  Overrides o;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) throw UsageError(where + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::replace(key.begin(), key.end(), '-', '_');
    const std::string value = trim(line.substr(eq + 1));
    const std::string what = where + " " + key;
    if (key == "preset") o.preset = value;
    else if (key == "mu_l") o.mu_l = parse_number<double>(value, what);
    else if (key == "lambda_v") o.lambda_v = parse_number<double>(value, what);
    else if (key == "alpha") o.alpha = parse_number<double>(value, what);
    else if (key == "lambda_p") o.lambda_p = parse_number<double>(value, what);
    else if (key == "m") o.m = parse_number<int>(value, what);
    else if (key == "beta_db") o.beta_db = value;
    else if (key == "trials") o.trials = parse_number<std::uint64_t>(value, what);
    else if (key == "seed") o.seed = parse_number<std::uint64_t>(value, what);
    else if (key == "window_km") o.window_km = parse_number<double>(value, what);
    else if (key == "out") o.out = value;
    else if (key == "svg") o.svg = value;
    else if (key == "threads") o.threads = parse_number<int>(value, what);
    else if (key == "ppp") o.ppp = parse_bool(value, what);
    else if (key == "tol_series") o.tol_series = parse_number<double>(value, what);
    else if (key == "n_max_cap") o.n_max_cap = parse_number<int>(value, what);
    else throw UsageError(where + ": unknown key '" + key + "'");
  }
  return o;
}

Overrides read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  return parse_config(in, path);
}

ExperimentSpec build_spec(Mode mode, const Overrides& s, int default_threads) {
  ExperimentSpec spec;
  spec.mode = mode;
  spec.threads = default_threads;
  spec.beta_db = parse_beta_grid(kDefaultGrid);
  if (mode == Mode::validate) spec.trials = 20000;
  if (s.preset) apply_preset(*s.preset, spec);

  for (auto& ser : spec.series) {
    if (s.mu_l) ser.mu_l = *s.mu_l;
    if (s.lambda_v) ser.lambda_v = *s.lambda_v;
    if (s.lambda_p) ser.lambda_p = *s.lambda_p;
    if (s.mu_l || s.lambda_v) ser.label = series_label(ser.mu_l, ser.lambda_v);
  }
  // overriding the swept parameter collapses the sweep
  std::vector<Series> unique;
  for (const auto& ser : spec.series)
    if (std::none_of(unique.begin(), unique.end(), [&](const Series& u) { return u.label == ser.label; }))
      unique.push_back(ser);
  spec.series = unique;

  if (s.alpha) spec.alpha = *s.alpha;
  if (s.m) spec.m = *s.m;
  if (s.beta_db) spec.beta_db = parse_beta_grid(*s.beta_db);
  if (s.trials) spec.trials = *s.trials;
  if (s.seed) spec.seed = *s.seed;
  if (s.window_km) spec.window_km = *s.window_km;
  if (s.out) spec.out = *s.out;
  if (s.svg) spec.svg = *s.svg;
  if (s.threads) spec.threads = *s.threads;
  if (s.ppp) spec.with_ppp = *s.ppp;
  if (s.tol_series) spec.tol_series = *s.tol_series;
  if (s.n_max_cap) spec.n_max_cap = *s.n_max_cap;

  if (spec.beta_db.empty()) throw UsageError("beta grid is empty");
  for (double b : spec.beta_db)
    if (!std::isfinite(b)) throw UsageError("beta grid values must be finite");
  if (std::adjacent_find(spec.beta_db.begin(), spec.beta_db.end(), std::greater_equal<>()) !=
      spec.beta_db.end())
    throw UsageError("beta grid must be strictly increasing");
  if (spec.trials < 1) throw UsageError("trials must be >= 1");
  if (spec.threads < 1) throw UsageError("threads must be >= 1");
  if (spec.window_km < 0.0) throw UsageError("window_km must be >= 0");
  if (mode == Mode::validate && !spec.svg.empty())
    throw UsageError("validate does not produce a plot");
  return spec;
}

}  // namespace plpcov::cli
