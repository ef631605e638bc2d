#pragma once

#include <cstddef>
#include <functional>
#include <limits>

#include "plpcov/config.hpp"
#include "plpcov/quadrature.hpp"

/// Distance distributions, serving-event probabilities and conditional
/// line-count laws seen from the typical receiver at the origin.
///
/// Naming: "other lines" excludes the typical line through the origin; the
/// n-th closest other line sits at distance y; "serving" refers to the
/// globally nearest transmitter.
namespace plpcov {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct Support {
  double lower = 0.0;
  double upper = kInfinity;
};

/// Evaluable CDF/PDF pair. Evaluations outside the support clamp to 0 / 1.
class Distribution1D {
 public:
  using Fn = std::function<double(double)>;

  Distribution1D(Fn cdf, Fn pdf, Support support)
      : cdf_(std::move(cdf)), pdf_(std::move(pdf)), support_(support) {}

  /// Minimum over an empty set: the variable is +inf almost surely.
  static Distribution1D empty_minimum();

  bool is_empty_minimum() const { return empty_; }
  const Support& support() const { return support_; }

  double cdf(double x) const;
  double pdf(double x) const;
  double survival(double x) const { return 1.0 - cdf(x); }

 private:
  Distribution1D() = default;

  Fn cdf_;
  Fn pdf_;
  Support support_;
  bool empty_ = false;
};

/// Poisson law of a conditional line count.
struct LinePmf {
  double mean = 0.0;
  double pmf(std::size_t k) const;
};

/// Tolerances shared by the distance evaluators.
struct DistanceOptions {
  quad::Options inner{1e-12, 1e-10, 400, true};
  quad::Options outer{1e-9, 1e-7, 400, true};
};

// ---- chord void probabilities -------------------------------------------

/// Integral over z in [lo, hi] (0 <= lo <= hi <= r) of
/// exp(-2 lambda_v sqrt(r^2 - z^2)), the expected void probability of a chord
/// of b(o, r) cut by a line at distance z. Evaluated with z = r sin(phi).
double chord_void_integral(double r, double lo, double hi, double lambda_v,
                           const quad::Options& opt = DistanceOptions{}.inner);

/// d/dr of the integrand above, integrated over [lo, hi]:
/// integral of exp(-2 lambda_v sqrt(r^2 - z^2)) 2 lambda_v r / sqrt(r^2 - z^2).
double chord_void_rate_integral(double r, double lo, double hi, double lambda_v,
                                const quad::Options& opt = DistanceOptions{}.inner);

// ---- distance distributions --------------------------------------------

/// Distance of the n-th closest other line (n >= 1): Erlang in 2 pi lambda_l y.
Distribution1D nth_line_distance(int n, double lambda_l);

/// Offset along a line from the foot of the perpendicular to its closest node.
Distribution1D closest_offset_on_line(double lambda_v);

/// Distance to the closest node on a line at distance y (support [y, inf)).
Distribution1D closest_node_on_line(double y, double lambda_v);

/// Distance to the closest node on the typical line.
Distribution1D closest_node_on_typical_line(double lambda_v);

/// Distance to the closest node on the n - 1 lines closer than the n-th line,
/// given that line sits at y. For n == 1 the set is empty.
Distribution1D closest_node_on_inner_lines(int n, double y, double lambda_v,
                                           const DistanceOptions& opt = {});

/// Distance to the closest node on the lines farther than y.
Distribution1D closest_node_beyond(double y, double lambda_l, double lambda_v,
                                   const DistanceOptions& opt = {});

/// Distance to the closest node on any other line (y = 0 case of the above).
Distribution1D closest_node_on_other_lines(double lambda_l, double lambda_v,
                                           const DistanceOptions& opt = {});

/// min(typical-line, inner-line, beyond-line closest node) given the n-th line at y.
Distribution1D closest_competitor(int n, double y, const NetworkConfig& config,
                                  const DistanceOptions& opt = {});

// ---- serving events -----------------------------------------------------

/// P(serving node lies on the n-th closest other line | that line at distance y).
double prob_serving_on_line(int n, double y, const NetworkConfig& config,
                            const DistanceOptions& opt = {});

/// P(serving node lies on the typical line).
double prob_serving_on_typical_line(const NetworkConfig& config, const DistanceOptions& opt = {});

/// Serving distance given service from the n-th line at distance y.
Distribution1D serving_distance_on_line(int n, double y, const NetworkConfig& config,
                                        const DistanceOptions& opt = {});

/// Serving distance given service from the typical line.
Distribution1D serving_distance_on_typical_line(const NetworkConfig& config,
                                                const DistanceOptions& opt = {});

// ---- conditional line counts -------------------------------------------

/// Number of other lines with y < rho < r given service at distance r from the
/// line at y: Poisson with mean 2 pi lambda_l * chord_void_integral(r, y, r).
LinePmf annulus_line_count(double y, double r, const NetworkConfig& config);

/// Number of other lines with rho < r given service at r from the typical line.
LinePmf disc_line_count_typical(double r, const NetworkConfig& config);

}  // namespace plpcov
