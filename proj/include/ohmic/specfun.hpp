#pragma once

// Real special functions: Gamma, principal-branch Lambert W, coth.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

#include "ohmic/errors.hpp"

namespace ohmic {

namespace detail {

// Lanczos approximation, g = 7, nine coefficients.
inline constexpr double kLanczosG = 7.0;
inline constexpr std::array<double, 9> kLanczosCoeffs = {
    0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
    771.32342877765313,      -176.61502916214059,   12.507343278686905,
    -0.13857109526572012,    9.9843695780195716e-6, 1.5056327351493116e-7};

inline constexpr double kPoleGuard = 1e-12;

inline double lanczos_gamma(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double series = kLanczosCoeffs[0];
  for (std::size_t i = 1; i < kLanczosCoeffs.size(); ++i) {
    series += kLanczosCoeffs[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  // t^(z+1/2) e^-t split in two halves to delay overflow near x ~ 171.
  const double half = std::pow(t, 0.5 * (z + 0.5));
  return std::sqrt(2.0 * std::numbers::pi) * half * (half * std::exp(-t)) *
         series;
}

}  // namespace detail

/// Gamma function on the real line. Throws DomainError within 1e-12 of a
/// nonpositive integer.
inline double gamma_fn(double x) {
  if (!std::isfinite(x)) {
    throw DomainError("gamma_fn: non-finite argument");
  }
  const double nearest = std::round(x);
  if (nearest <= 0.0 && std::abs(x - nearest) < detail::kPoleGuard) {
    std::ostringstream msg;
    msg << "gamma_fn: pole at " << nearest << " (argument " << x << ")";
    throw DomainError(msg.str());
  }
  if (x < 0.5) {
    // Reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x).
    return std::numbers::pi /
           (std::sin(std::numbers::pi * x) * detail::lanczos_gamma(1.0 - x));
  }
  return detail::lanczos_gamma(x);
}

/// Principal branch W0 of the Lambert W function, x >= -1/e.
inline double lambert_w0(double x) {
  constexpr double kInvE = 1.0 / std::numbers::e;
  if (std::isnan(x)) {
    throw DomainError("lambert_w0: NaN argument");
  }
  if (x < -kInvE) {
    if (x < -kInvE - 1e-14) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "lambert_w0: argument " << x << " below branch point -1/e";
      throw DomainError(msg.str());
    }
    x = -kInvE;
  }
  if (x == 0.0) return 0.0;

  double w;
  if (x < -0.32) {
    // Branch-point expansion in p = sqrt(2(e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 +
                                                  p * (-43.0 / 540.0 +
                                                       p * (769.0 / 17280.0)))));
    if (p < 1e-3) return w;
  } else if (x < 3.0) {
    w = std::log1p(x);
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  // Halley iteration on f(w) = w e^w - x.
  for (int iter = 0; iter < 64; ++iter) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

/// coth(x) for x > 0 without overflow or cancellation.
inline double coth_stable(double x) {
  if (!(x > 0.0)) {
    throw DomainError("coth_stable: argument must be positive");
  }
  if (x < 1e-6) {
    return 1.0 / x + x / 3.0 - x * x * x / 45.0;
  }
  if (x > 20.0) return 1.0;
  return 1.0 / std::tanh(x);
}

}  // namespace ohmic
