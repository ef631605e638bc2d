#include "plpcov/rng.hpp"

#include <cmath>
#include <random>

namespace plpcov {

Rng::Rng(std::uint64_t seed, std::uint64_t stream)
    : state_(mix(seed + 0x9E3779B97F4A7C15ULL) ^ mix(~stream * 0xD1B54A32D192ED03ULL)) {}

double Rng::exponential(double rate) { return -std::log(uniform_pos()) / rate; }

double Rng::gamma(double shape, double scale) {
  if (shape == std::floor(shape) && shape <= 4.0) {
    // sum of unit exponentials; exact for the integer Nakagami shapes we use most
    double acc = 0.0;
    for (int i = 0; i < static_cast<int>(shape); ++i) acc -= std::log(uniform_pos());
    return acc * scale;
  }
  std::gamma_distribution<double> dist(shape, scale);
  return dist(*this);
}

std::uint64_t Rng::poisson(double mean) {
  if (!(mean > 0.0)) return 0;
  std::poisson_distribution<std::uint64_t> dist(mean);
  return dist(*this);
}

}  // namespace plpcov
