#include "plpcov/config.hpp"

#include <cmath>
#include <sstream>

namespace plpcov {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) throw ParameterError(std::string(name) + " must be finite");
}

}  // namespace

NetworkConfig NetworkConfig::make(double mu_l, double lambda_n, double p, double alpha, int m,
                                  double beta) {
  require_finite(mu_l, "mu_l");
  require_finite(lambda_n, "lambda_n");
  require_finite(p, "p");
  require_finite(alpha, "alpha");
  require_finite(beta, "beta");
  if (mu_l < 0.0) throw ParameterError("mu_l must be >= 0");
  if (lambda_n < 0.0) throw ParameterError("lambda_n must be >= 0");
  if (p < 0.0 || p > 1.0) throw ParameterError("p must lie in [0, 1]");
  if (!(alpha > 2.0)) throw ParameterError("alpha must be > 2");
  if (m < 1 || m > kMaxNakagamiM) throw ParameterError("m must be an integer in [1, 16]");
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");

  NetworkConfig c;
  c.mu_l_ = mu_l;
  c.lambda_l_ = mu_l / (2.0 * kPi);
  c.lambda_n_ = lambda_n;
  c.p_ = p;
  c.lambda_v_ = p * lambda_n;
  c.lambda_r_ = lambda_n - c.lambda_v_;
  c.alpha_ = alpha;
  c.m_ = m;
  c.beta_ = beta;
  return c;
}

NetworkConfig NetworkConfig::from_transmitter_density(double mu_l, double lambda_v, double alpha,
                                                      int m, double beta, double p) {
  require_finite(lambda_v, "lambda_v");
  if (!(p > 0.0)) throw ParameterError("p must be > 0 when deriving lambda_n from lambda_v");
  auto c = make(mu_l, lambda_v / p, p, alpha, m, beta);
  // keep lambda_v bit-exact with what the caller asked for
  c.lambda_v_ = lambda_v;
  c.lambda_r_ = c.lambda_n_ - lambda_v;
  return c;
}

NetworkConfig NetworkConfig::with_beta(double beta) const {
  require_finite(beta, "beta");
  if (!(beta >= 0.0)) throw ParameterError("beta must be >= 0");
  auto c = *this;
  c.beta_ = beta;
  return c;
}

NetworkConfig NetworkConfig::with_m(int m) const {
  if (m < 1 || m > kMaxNakagamiM) throw ParameterError("m must be an integer in [1, 16]");
  auto c = *this;
  c.m_ = m;
  return c;
}

std::string NetworkConfig::describe() const {
  std::ostringstream os;
  os << "mu_l=" << mu_l_ << " lambda_v=" << lambda_v_ << " alpha=" << alpha_ << " m=" << m_
     << " beta=" << beta_;
  return os.str();
}

}  // namespace plpcov
