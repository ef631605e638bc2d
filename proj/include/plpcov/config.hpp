#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace plpcov {

/// Raised for out-of-domain or non-finite model parameters.
class ParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a quadrature or sampling loop cannot meet its contract.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr int kMaxNakagamiM = 16;

/// Model parameters of the Cox network driven by a Poisson line process.
///
/// Lengths are in km and densities in km^-1 (per line) or km/km^2 (line
/// density). The representation-space density lambda_l = mu_l / (2 pi) and the
/// thinned transmitter/receiver densities are derived, never set directly.
class NetworkConfig {
 public:
  NetworkConfig() = default;

  /// mu_l: km of road per km^2; lambda_n: nodes per km of road; p: transmit
  /// probability; alpha: path-loss exponent (> 2); m: Nakagami parameter
  /// (integer in [1, 16]); beta: linear SIR threshold.
  static NetworkConfig make(double mu_l, double lambda_n, double p, double alpha, int m,
                            double beta = 1.0);

  /// Convenience for callers that think in transmitter density. The node
  /// density is lambda_v / p.
  static NetworkConfig from_transmitter_density(double mu_l, double lambda_v, double alpha,
                                                int m, double beta = 1.0, double p = 0.5);

  double mu_l() const { return mu_l_; }
  double lambda_l() const { return lambda_l_; }
  double lambda_n() const { return lambda_n_; }
  double p() const { return p_; }
  double lambda_v() const { return lambda_v_; }
  double lambda_r() const { return lambda_r_; }
  double alpha() const { return alpha_; }
  int m() const { return m_; }
  double beta() const { return beta_; }

  /// Mean number of perpendicular feet per km along the rho axis (2 pi lambda_l).
  double line_rate() const { return 2.0 * kPi * lambda_l_; }

  NetworkConfig with_beta(double beta) const;
  NetworkConfig with_m(int m) const;

  std::string describe() const;

 private:
  double mu_l_ = 0.0;
  double lambda_l_ = 0.0;
  double lambda_n_ = 0.0;
  double p_ = 1.0;
  double lambda_v_ = 0.0;
  double lambda_r_ = 0.0;
  double alpha_ = 4.0;
  int m_ = 1;
  double beta_ = 1.0;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace plpcov
