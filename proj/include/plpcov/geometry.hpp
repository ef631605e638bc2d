#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "plpcov/config.hpp"
#include "plpcov/rng.hpp"

namespace plpcov {

/// Undirected line in polar form: foot of the perpendicular from the origin is
/// (rho cos theta, rho sin theta).
struct Line {
  double rho = 0.0;    // km, >= 0
  double theta = 0.0;  // rad, [0, 2 pi)
};

/// Transmitter on a line, located at signed offset t (km) from the foot of the
/// perpendicular. line == 0 is the typical line, line == i + 1 is
/// other_lines[i].
struct TxNode {
  std::size_t line = 0;
  double offset = 0.0;
};

/// One network sampled under Palm conditioning at the origin. The typical
/// receiver sits at the origin and is not stored.
struct PalmRealization {
  Line typical_line;
  std::vector<Line> other_lines;
  std::vector<TxNode> tx_nodes;
  double window_radius = 0.0;

  const Line& line_of(const TxNode& node) const {
    return node.line == 0 ? typical_line : other_lines[node.line - 1];
  }
  double squared_distance(const TxNode& node) const {
    const double rho = line_of(node).rho;
    return rho * rho + node.offset * node.offset;
  }
};

/// Lines of a motion-invariant PLP hitting the disc b(o, window_radius).
std::vector<Line> sample_plp(double lambda_l, double window_radius, Rng& rng);

/// Palm realization: sampled lines plus the typical line through the origin,
/// each carrying a 1D PPP of transmitters with density lambda_v on its chord.
PalmRealization sample_palm(const NetworkConfig& config, double window_radius, Rng& rng);

/// Lines with rho < d (strict).
std::size_t count_lines_in_disc(std::span<const Line> lines, double d);

/// Representation of a line after moving the origin by distance t in direction
/// `direction` (rad).
Line translate_line(const Line& line, double t, double direction);

/// Typical nearest-transmitter distance: radius at which the expected number
/// of transmitters in b(o, r) (Cox part plus the typical line) equals one.
double reference_distance(const NetworkConfig& config);

/// Smallest window for which the mean interference from beyond the window,
/// 2 pi mu_l lambda_v d^(2 - alpha) / (alpha - 2) plus the typical-line tail,
/// is below `relative_tail` of the mean interference from
/// [reference_distance, d].
double default_window_radius(const NetworkConfig& config, double relative_tail = 1e-3);

/// Mean interference (unit gains) from nodes at distance > d.
double mean_tail_interference(const NetworkConfig& config, double d);

}  // namespace plpcov
