#include "plpcov/geometry.hpp"

#include <cmath>

namespace plpcov {

namespace {

void check_window(double window_radius) {
  if (!std::isfinite(window_radius) || !(window_radius > 0.0))
    throw ParameterError("window_radius must be finite and > 0");
}

void add_chord_nodes(std::size_t line_index, double rho, double window_radius,
                     double lambda_v, Rng& rng, std::vector<TxNode>& out) {
  const double half = std::sqrt(std::max(window_radius * window_radius - rho * rho, 0.0));
  const auto count = rng.poisson(lambda_v * 2.0 * half);
  for (std::uint64_t k = 0; k < count; ++k)
    out.push_back({line_index, rng.uniform(-half, half)});
}

}  // namespace

std::vector<Line> sample_plp(double lambda_l, double window_radius, Rng& rng) {
  if (!std::isfinite(lambda_l) || lambda_l < 0.0)
    throw ParameterError("lambda_l must be finite and >= 0");
  check_window(window_radius);
  const auto count = rng.poisson(2.0 * kPi * lambda_l * window_radius);
  std::vector<Line> lines;
  lines.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    Line l;
    l.rho = rng.uniform(0.0, window_radius);
    l.theta = rng.uniform(0.0, 2.0 * kPi);
    lines.push_back(l);
  }
  return lines;
}

PalmRealization sample_palm(const NetworkConfig& config, double window_radius, Rng& rng) {
  check_window(window_radius);
  PalmRealization out;
  out.window_radius = window_radius;
  out.typical_line = {0.0, rng.uniform(0.0, 2.0 * kPi)};
  out.other_lines = sample_plp(config.lambda_l(), window_radius, rng);

  const double lambda_v = config.lambda_v();
  if (lambda_v > 0.0) {
    out.tx_nodes.reserve(static_cast<std::size_t>(
        lambda_v * 2.0 * window_radius * (1.0 + 0.8 * out.other_lines.size()) + 16.0));
    add_chord_nodes(0, 0.0, window_radius, lambda_v, rng, out.tx_nodes);
    for (std::size_t i = 0; i < out.other_lines.size(); ++i)
      add_chord_nodes(i + 1, out.other_lines[i].rho, window_radius, lambda_v, rng, out.tx_nodes);
  }
  return out;
}

std::size_t count_lines_in_disc(std::span<const Line> lines, double d) {
  std::size_t n = 0;
  for (const auto& l : lines)
    if (l.rho < d) ++n;
  return n;
}

Line translate_line(const Line& line, double t, double direction) {
  double rho = line.rho - t * std::cos(line.theta - direction);
  double theta = line.theta;
  if (rho < 0.0) {
    // same line, perpendicular now points the other way
    rho = -rho;
    theta += kPi;
  }
  theta = std::fmod(theta, 2.0 * kPi);
  if (theta < 0.0) theta += 2.0 * kPi;
  return {rho, theta};
}

double reference_distance(const NetworkConfig& config) {
  // mu_l lambda_v pi r^2 + 2 lambda_v r = 1
  const double a = kPi * config.mu_l() * config.lambda_v();
  const double b = 2.0 * config.lambda_v();
  if (!(b > 0.0)) throw ParameterError("lambda_v must be > 0");
  if (a <= 0.0) return 1.0 / b;
  return (-b + std::sqrt(b * b + 4.0 * a)) / (2.0 * a);
}

double mean_tail_interference(const NetworkConfig& config, double d) {
  const double alpha = config.alpha();
  const double planar = 2.0 * kPi * config.mu_l() * config.lambda_v() * std::pow(d, 2.0 - alpha) /
                        (alpha - 2.0);
  const double typical = 2.0 * config.lambda_v() * std::pow(d, 1.0 - alpha) / (alpha - 1.0);
  return planar + typical;
}

double default_window_radius(const NetworkConfig& config, double relative_tail) {
  if (!(relative_tail > 0.0 && relative_tail < 1.0))
    throw ParameterError("relative_tail must lie in (0, 1)");
  const double r0 = reference_distance(config);
  const double total = mean_tail_interference(config, r0);
  // tail(d) / (total - tail(d)) < eps  <=>  tail(d) < total * eps / (1 + eps)
  const double target = total * relative_tail / (1.0 + relative_tail);
  double lo = r0, hi = 2.0 * r0;
  while (mean_tail_interference(config, hi) > target) {
    lo = hi;
    hi *= 2.0;
  }
  for (int i = 0; i < 100 && hi - lo > 1e-9 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mean_tail_interference(config, mid) > target ? lo : hi) = mid;
  }
  return hi;
}

}  // namespace plpcov
