#pragma once

#include <array>
#include <memory>
#include <vector>

#include "plpcov/config.hpp"
#include "plpcov/jet.hpp"
#include "plpcov/quadrature.hpp"

/// Conditional Laplace transforms of the interference seen by the typical
/// receiver, with derivatives in s carried as jets.
///
/// All transforms are conditioned on the serving event (line n, 0 for the
/// typical line), the serving distance r and the serving line distance y_n.
/// Returned jets are expanded around s with step s (step 1 at s = 0), so
/// Jet::derivative(k) is the k-th s-derivative and Jet::operator[](k) the
/// normalised coefficient s^k f^(k)(s) / k!.
namespace plpcov {

struct LaplaceContext {
  double r = 0.0;
  double y_n = 0.0;
  int n = 0;
  NetworkConfig config;

  /// Validates r >= y_n >= 0, n >= 0 and (n == 0) == (y_n == 0).
  static LaplaceContext make(double r, double y_n, int n, const NetworkConfig& config);
  /// Context of a typical-line serving event.
  static LaplaceContext typical(double r, const NetworkConfig& config) {
    return make(r, 0.0, 0, config);
  }
};

/// How a conditioned line's distance is averaged over its admissible range in
/// the inner and annulus components.
enum class LineAveraging {
  /// Uniform over the range, as in the closed forms of the inner and annulus
  /// transforms.
  uniform,
  /// Weighted by the chord void probability exp(-2 lambda_v sqrt(r^2 - z^2)),
  /// the exact law of a line's distance once its chord of b(o, r) is known to
  /// be empty.
  void_weighted,
};

struct LaplaceOptions {
  /// Jet order; negative means m - 1.
  int order = -1;
  LineAveraging averaging = LineAveraging::void_weighted;
  /// Per-line integral over the offset along a line.
  quad::Options line{1e-300, 1e-11, 400, true};
  /// Integrals over line distances.
  quad::Options lines{1e-13, 1e-9, 400, true};
};

/// Exponent of one line's transform in units where r = 1:
///   G(z) = 2 lambda_v r * scaled_line_exponent(z / r, b, step_b, ...)
/// with b = s / (m r^alpha) the expansion point and step_b = step / (m r^alpha)
/// the jet step, both in the same scaled units. Coefficients are returned
/// normalised with step_b; the caller attaches the step in s.
Jet scaled_line_exponent(double zhat, double b, double step_b, double alpha, int m, int order,
                         const quad::Options& opt = LaplaceOptions{}.line);

/// Piecewise-Chebyshev table of scaled_line_exponent(zhat, b, b, ...) on
/// zhat in [0, inf). Built once per (b, alpha, m, order), then evaluated in
/// O(degree). Pieces are bisected until the interpolant matches direct
/// quadrature to rel_tol at check points between the nodes.
class LineExponentTable {
 public:
  LineExponentTable(double b, double alpha, int m, int order, double rel_tol = 1e-9,
                    const quad::Options& opt = LaplaceOptions{}.line);

  Jet operator()(double zhat) const;

  double b() const { return b_; }
  int order() const { return order_; }
  /// Largest relative mismatch seen at the check points.
  double max_check_error() const { return max_error_; }
  std::size_t pieces() const { return inner_.size() + outer_.size(); }

 private:
  using Coeffs = std::array<double, Jet::kMaxOrder + 1>;
  struct Piece {
    double lo, hi;  // in the piece's variable
    bool outer;     // tau = zhat^-alpha on zhat >= 1, else phi with zhat = sin(phi)
    std::vector<Coeffs> cheb;
  };

  Coeffs sample(bool outer, double v) const;
  Coeffs eval(const Piece& p, double v) const;
  void build(double lo, double hi, bool outer, int depth);
  Coeffs lookup(const std::vector<Piece>& pieces, double v) const;

  double b_, alpha_;
  int m_, order_;
  double rel_tol_;
  quad::Options opt_;
  std::vector<Piece> inner_;
  std::vector<Piece> outer_;
  double max_error_ = 0.0;
};

/// Source of per-line exponents for a fixed context.
class LineExponentSource {
 public:
  virtual ~LineExponentSource() = default;
  /// Jet of G(z) = 2 lambda_v r * scaled exponent, for the line at distance z.
  virtual Jet operator()(double z) const = 0;
};

Jet laplace_typical_line(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});
Jet laplace_serving_line(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});
Jet laplace_inner_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});
Jet laplace_annulus_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});
Jet laplace_outer_lines(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});
/// Product of the five components (n >= 1) or of the typical, annulus and
/// outer components (n == 0, where the annulus spans (0, r)).
Jet laplace_total(double s, const LaplaceContext& ctx, const LaplaceOptions& opt = {});

namespace detail {

/// Per-line transform exp(-G) averaged over line distances in (lo, hi),
/// uniformly or with the chord void weight. Returns the jet of the average.
Jet average_line_transform(const LineExponentSource& g, double lo, double hi, double r,
                           double lambda_v, LineAveraging averaging, int order, double step,
                           const quad::Options& opt);

/// log of the annulus transform: -2 pi lambda_l * (c-weighted mean of 1 - exp(-G)).
Jet log_annulus_transform(const LineExponentSource& g, double lo, double r,
                          const NetworkConfig& config, LineAveraging averaging, int order,
                          double step, const quad::Options& opt);

/// log of the outer-lines transform: -2 pi lambda_l * integral over (r, inf) of 1 - exp(-G).
Jet log_outer_transform(const LineExponentSource& g, double r, const NetworkConfig& config,
                        int order, double step, const quad::Options& opt);

}  // namespace detail

}  // namespace plpcov
