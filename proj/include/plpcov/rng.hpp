#pragma once

#include <cstdint>
#include <limits>

namespace plpcov {

/// Counter-based random stream. The state is a pure function of
/// (seed, stream), so trial i of a run always sees the same numbers no matter
/// which thread executes it. Output is SplitMix64 over that state.
///
/// Satisfies UniformRandomBitGenerator, so <random> distributions work on it.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double a, double b) { return a + (b - a) * uniform(); }
  /// Uniform on (0, 1]; safe for log().
  double uniform_pos() { return 1.0 - uniform(); }

  double exponential(double rate);
  /// Gamma with integer or real shape and given scale.
  double gamma(double shape, double scale);
  std::uint64_t poisson(double mean);

  /// Derived independent stream; used to split sub-experiments.
  Rng split(std::uint64_t tag) const { return Rng(state_ ^ mix(tag + 0x632BE59BD9B4E019ULL), tag); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

}  // namespace plpcov
