#pragma once

// Monte Carlo check of the Cramer-Rao bound for the sigma_x protocol.
//
// Each shot measures sigma_x on the dephased probe at cos(omega_0 t) = 1, so
// P(+1) = (1 + e^{-gamma}) / 2. An estimate of omega_c is obtained from the
// +1 count of one trial by inverting p -> gamma -> omega_c.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <vector>

#include "ohmic/environment.hpp"
#include "ohmic/errors.hpp"
#include "ohmic/metrology.hpp"
#include "ohmic/parallel.hpp"

namespace ohmic {

struct RamseyConfig {
  OhmicSpectrum spec{1.0, 1.0, 1.0};
  double temperature = 0.0;
  double measure_time = 1.0;
  std::uint64_t shots = 10000;
  std::size_t trials = 200;
  std::uint64_t seed = 42;

  void validate() const {
    if (!(temperature >= 0.0)) throw DomainError("RamseyConfig: temperature must be >= 0");
    if (!(measure_time > 0.0)) throw DomainError("RamseyConfig: measure_time must be > 0");
    if (shots < 1) throw DomainError("RamseyConfig: shots must be >= 1");
    if (trials < 2) throw DomainError("RamseyConfig: trials must be >= 2");
    if (static_cast<double>(shots) * static_cast<double>(trials) > 1e9) {
      throw DomainError("RamseyConfig: shots * trials exceeds 1e9");
    }
  }

  double true_gamma(const QuadratureConfig& quad = {}) const {
    return gamma_dimensionful(spec, measure_time, temperature, quad);
  }
};

struct RamseyReport {
  std::vector<double> estimates;
  double mean = 0.0;
  double empirical_variance = 0.0;  // unbiased sample variance of the estimates
  double mse = 0.0;                 // mean squared error about the true omega_c
  double crb = 0.0;                 // 1 / (shots * F_q)
  double ratio = 0.0;               // empirical_variance / crb
  std::size_t failures = 0;
  bool valid = false;
};

enum class MleFailure { None, CoherenceNonPositive, OutOfBracket };

struct MleOutcome {
  std::optional<double> estimate;
  MleFailure failure = MleFailure::None;
};

/// Stream seed for one trial: splitmix64 of (seed, trial).
inline std::uint64_t trial_stream_seed(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (trial + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// +1 counts per trial; trial i draws from std::mt19937_64 seeded with
/// trial_stream_seed(seed, i).
inline std::vector<std::uint64_t> simulate_shots(const RamseyConfig& cfg,
                                                 const QuadratureConfig& quad = {}) {
  cfg.validate();
  const double p_plus = 0.5 * (1.0 + std::exp(-cfg.true_gamma(quad)));
  return parallel_map(cfg.trials, [&](std::size_t i) {
    std::mt19937_64 engine(trial_stream_seed(cfg.seed, i));
    std::binomial_distribution<std::uint64_t> draw(cfg.shots, p_plus);
    return draw(engine);
  });
}

/// Inverts gamma(omega_c; t, T) on [omega_c/100, 100 omega_c] around the true
/// cutoff, after checking that gamma is strictly monotone there.
class OmegaCInverter {
 public:
  explicit OmegaCInverter(const RamseyConfig& cfg, const QuadratureConfig& quad = {},
                          int check_points = 65)
      : cfg_(cfg), quad_(quad) {
    lo_ = cfg.spec.omega_c / 100.0;
    hi_ = cfg.spec.omega_c * 100.0;
    double prev = gamma_at(lo_);
    gamma_lo_ = prev;
    int direction = 0;
    for (int i = 1; i < check_points; ++i) {
      const double w = lo_ * std::pow(hi_ / lo_, static_cast<double>(i) / (check_points - 1));
      const double g = gamma_at(w);
      const int dir = g > prev ? 1 : (g < prev ? -1 : 0);
      if (dir == 0 || (direction != 0 && dir != direction)) {
        std::ostringstream msg;
        msg << "OmegaCInverter: gamma(omega_c) not monotone on [" << lo_ << ", " << hi_
            << "] for eta=" << cfg.spec.eta << ", s=" << cfg.spec.s
            << ", t=" << cfg.measure_time << ", T=" << cfg.temperature;
        throw AmbiguityError(msg.str());
      }
      direction = dir;
      prev = g;
    }
    gamma_hi_ = prev;
    increasing_ = direction > 0;
  }

  double gamma_at(double omega_c) const {
    const OhmicSpectrum spec(cfg_.spec.eta, cfg_.spec.s, omega_c);
    return gamma_dimensionful(spec, cfg_.measure_time, cfg_.temperature, quad_);
  }

  std::optional<double> invert(double gamma_hat) const {
    const double g_min = std::min(gamma_lo_, gamma_hi_);
    const double g_max = std::max(gamma_lo_, gamma_hi_);
    if (!(gamma_hat >= g_min && gamma_hat <= g_max)) return std::nullopt;
    double a = lo_;
    double b = hi_;
    for (int iter = 0; iter < 200 && b / a - 1.0 > 1e-14; ++iter) {
      const double mid = std::sqrt(a * b);
      const bool below = gamma_at(mid) < gamma_hat;
      if (below == increasing_) {
        a = mid;
      } else {
        b = mid;
      }
    }
    return std::sqrt(a * b);
  }

 private:
  RamseyConfig cfg_;
  QuadratureConfig quad_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  double gamma_lo_ = 0.0;
  double gamma_hi_ = 0.0;
  bool increasing_ = true;
};

namespace detail {

inline MleOutcome mle_with(const OmegaCInverter& inverter, std::uint64_t count,
                           std::uint64_t shots) {
  if (count > shots) throw DomainError("mle_omega_c: count exceeds shots");
  const double p_hat = static_cast<double>(count) / static_cast<double>(shots);
  const double coherence = 2.0 * p_hat - 1.0;
  if (!(coherence > 0.0)) return {std::nullopt, MleFailure::CoherenceNonPositive};
  const auto est = inverter.invert(-std::log(coherence));
  if (!est) return {std::nullopt, MleFailure::OutOfBracket};
  return {est, MleFailure::None};
}

}  // namespace detail

inline MleOutcome mle_omega_c(std::uint64_t count, std::uint64_t shots,
                              const RamseyConfig& cfg, const QuadratureConfig& quad = {}) {
  return detail::mle_with(OmegaCInverter(cfg, quad), count, shots);
}

inline RamseyReport crb_report(const RamseyConfig& cfg, const QuadratureConfig& quad = {}) {
  cfg.validate();
  const auto counts = simulate_shots(cfg, quad);
  const OmegaCInverter inverter(cfg, quad);

  RamseyReport rep;
  for (const auto count : counts) {
    const auto outcome = detail::mle_with(inverter, count, cfg.shots);
    if (outcome.estimate) {
      rep.estimates.push_back(*outcome.estimate);
    } else {
      ++rep.failures;
    }
  }

  const double omega_c = cfg.spec.omega_c;
  const ScaledPoint point(omega_c * cfg.measure_time, cfg.temperature / omega_c);
  const double gamma = gamma_scaled(cfg.spec.eta, cfg.spec.s, point, EvalMethod::Auto, quad);
  const double d = gamma_shift_combination(cfg.spec.eta, cfg.spec.s, point, EvalMethod::Auto, quad);
  rep.crb = 1.0 / (static_cast<double>(cfg.shots) * qfi(gamma, d, omega_c));

  const std::size_t n = rep.estimates.size();
  if (n >= 2) {
    double sum = 0.0;
    for (double e : rep.estimates) sum += e;
    rep.mean = sum / n;
    double ss = 0.0;
    double sq_err = 0.0;
    for (double e : rep.estimates) {
      ss += (e - rep.mean) * (e - rep.mean);
      sq_err += (e - omega_c) * (e - omega_c);
    }
    rep.empirical_variance = ss / (n - 1);
    rep.mse = sq_err / n;
    rep.ratio = rep.empirical_variance / rep.crb;
  }
  rep.valid = n >= 2 && 5 * rep.failures <= cfg.trials;
  return rep;
}

}  // namespace ohmic
