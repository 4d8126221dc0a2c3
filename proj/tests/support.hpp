#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ohmic::test {

inline double rel_err(double got, double want) {
  return want == 0.0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
}

// Fixed-seed uniform source for the property tests.
class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }

  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }

  template <typename T, std::size_t N>
  T pick(const T (&xs)[N]) {
    return xs[std::uniform_int_distribution<std::size_t>(0, N - 1)(engine_)];
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ohmic::test
