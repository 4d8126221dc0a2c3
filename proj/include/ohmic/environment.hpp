#pragma once

// Ohmic-family environments and the qubit decoherence factor
//
//   gamma = eta * Int_0^inf x^(s-2) e^(-x) (1 - cos(x tau)) coth(x / (2 theta)) dx
//
// in scaled variables tau = omega_c t and theta = T / omega_c (hbar = k_B = 1).
// All engines work in (tau, theta); omega_c only enters through the
// dimensionful wrappers at the bottom of this header.

#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>
#include <string_view>
#include <vector>

#include "ohmic/errors.hpp"
#include "ohmic/quadrature.hpp"
#include "ohmic/specfun.hpp"

namespace ohmic {

struct OhmicSpectrum {
  double eta;
  double s;
  double omega_c;

  OhmicSpectrum(double eta_, double s_, double omega_c_)
      : eta(eta_), s(s_), omega_c(omega_c_) {
    if (!(eta > 0.0) || !(s > 0.0) || !(omega_c > 0.0) || !std::isfinite(eta) ||
        !std::isfinite(s) || !std::isfinite(omega_c)) {
      std::ostringstream msg;
      msg << "OhmicSpectrum: eta, s, omega_c must be positive and finite (got "
          << eta << ", " << s << ", " << omega_c << ")";
      throw DomainError(msg.str());
    }
  }
};

struct ScaledPoint {
  double tau;
  double theta;

  ScaledPoint(double tau_, double theta_) : tau(tau_), theta(theta_) {
    if (!(tau >= 0.0) || !(theta >= 0.0) || !std::isfinite(tau) ||
        !std::isfinite(theta)) {
      std::ostringstream msg;
      msg << "ScaledPoint: tau and theta must be finite and >= 0 (got " << tau
          << ", " << theta << ")";
      throw DomainError(msg.str());
    }
  }
};

enum class EvalMethod {
  Auto,
  ClosedFormZeroT,
  Quadrature,
  HighTemperature,
  ShortTime,
  ThermalSeries,
};

inline std::string_view to_string(EvalMethod m) {
  switch (m) {
    case EvalMethod::Auto: return "auto";
    case EvalMethod::ClosedFormZeroT: return "closed_form_zero_t";
    case EvalMethod::Quadrature: return "quadrature";
    case EvalMethod::HighTemperature: return "high_temperature";
    case EvalMethod::ShortTime: return "short_time";
    case EvalMethod::ThermalSeries: return "thermal_series";
  }
  return "unknown";
}

/// J(omega) = eta omega^s omega_c^(1-s) e^(-omega/omega_c).
inline double spectral_density(const OhmicSpectrum& spec, double omega) {
  if (!(omega >= 0.0)) {
    throw DomainError("spectral_density: omega must be >= 0");
  }
  if (omega == 0.0) return 0.0;
  return spec.eta * std::pow(omega, spec.s) * std::pow(spec.omega_c, 1.0 - spec.s) *
         std::exp(-omega / spec.omega_c);
}

namespace kernel {

using cplx = std::complex<double>;

// (1 - e^-z) / z, entire.
inline cplx one_minus_exp_over(cplx z) {
  if (std::abs(z) < 0.1) {
    // sum_{n>=0} (-z)^n / (n+1)!
    constexpr int kTerms = 14;
    cplx acc = 0.0;
    double inv_fact = 1.0;
    std::array<double, kTerms> coeff{};
    for (int n = 0; n < kTerms; ++n) {
      inv_fact /= static_cast<double>(n + 1);
      coeff[n] = inv_fact;
    }
    for (int n = kTerms - 1; n >= 0; --n) acc = acc * (-z) + coeff[n];
    return acc;
  }
  return (1.0 - std::exp(-z)) / z;
}

/// G(s, u) = Int_0^inf x^(s-2) e^-x (1 - cos(x u)) dx for s > -1.
///
/// Equals Gamma(s-1) [1 - Re (1 + i u)^(1-s)]. The poles of Gamma(s-1) at
/// s = 1 and s = 0 cancel against the bracket; both are removed analytically
/// by factoring (1 - e^-z)/z out of the bracket, so no guard band is needed.
inline double zero_t(double s, double u) {
  if (!(s > -1.0)) {
    throw DomainError("kernel::zero_t: requires s > -1");
  }
  if (u == 0.0) return 0.0;
  const double log_mod = u < 1e150 ? 0.5 * std::log1p(u * u) : std::log(u);
  const cplx log_w(log_mod, std::atan(u));  // log(1 + i u)
  if (s >= 0.5) {
    return gamma_fn(s) * std::real(log_w * one_minus_exp_over((s - 1.0) * log_w));
  }
  return gamma_fn(s + 1.0) / (s - 1.0) *
         std::real(cplx(1.0, u) * log_w * one_minus_exp_over(s * log_w));
}

/// Sum over k >= 0 of c_k a_k^(1-s) G(s, tau / a_k) with a_k = 1 + k / theta,
/// c_0 = 1, c_k = 2: the expansion coth(x/2theta) = 1 + 2 sum_k e^(-k x/theta)
/// integrated term by term. The first kDirect terms are summed exactly; the
/// remainder by Euler-Maclaurin, using
///   d^n/da^n [a^(1-s) G(s, tau/a)] = (-1)^n a^(1-s-n) G(s+n, tau/a)
///   Int_A^inf a^(1-s) G(s, tau/a) da = A^(2-s) G(s-1, tau/A).
inline double thermal_series(double s, double tau, double theta) {
  if (tau == 0.0) return 0.0;
  constexpr int kDirect = 32;
  auto term = [&](double a, int n) {
    return std::pow(a, 1.0 - s - n) * zero_t(s + n, tau / a);
  };
  double sum = zero_t(s, tau);
  for (int k = 1; k < kDirect; ++k) sum += 2.0 * term(1.0 + k / theta, 0);

  const double a_k = 1.0 + kDirect / theta;
  const double t2 = theta * theta;
  double tail = 2.0 * theta * std::pow(a_k, 2.0 - s) * zero_t(s - 1.0, tau / a_k);
  tail += term(a_k, 0);
  tail += term(a_k, 1) / (6.0 * theta);
  tail -= term(a_k, 3) / (360.0 * theta * t2);
  tail += term(a_k, 5) / (15120.0 * theta * t2 * t2);
  tail -= term(a_k, 7) / (604800.0 * theta * t2 * t2 * t2);
  return sum + tail;
}

}  // namespace kernel

namespace detail {

inline void check_params(double eta, double s, double tau, std::string_view who) {
  if (!(eta > 0.0) || !(s > 0.0) || !(tau >= 0.0) || !std::isfinite(eta) ||
      !std::isfinite(s) || !std::isfinite(tau)) {
    std::ostringstream msg;
    msg << who << ": requires eta > 0, s > 0, tau >= 0 (got " << eta << ", " << s
        << ", " << tau << ")";
    throw DomainError(msg.str());
  }
}

// Bernoulli numbers B_0, B_2, ..., B_24.
inline constexpr std::array<double, 13> kBernoulliEven = {
    1.0,
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0};

// Integral of the integrand over [0, x_min] from its power series. The
// integrand is x^(s-2-delta) P(x) with P = e^-x (1 - cos x tau) [x coth(x/2theta)]
// and delta = 1 at finite temperature, 0 at theta = 0. Requires x_min tau <= 0.1
// and x_min <= theta so every factor's series converges fast.
inline double endpoint_series(double s, double tau, double theta, double x_min) {
  constexpr int kDeg = 26;
  // Coefficients of each factor in the scaled variable v = x / x_min.
  std::array<double, kDeg + 1> exp_c{};
  std::array<double, kDeg + 1> cos_c{};
  std::array<double, kDeg + 1> coth_c{};

  double fact = 1.0;
  double pow_x = 1.0;
  for (int j = 0; j <= kDeg; ++j) {
    if (j > 0) {
      fact *= j;
      pow_x *= x_min;
    }
    exp_c[j] = ((j % 2 == 0) ? 1.0 : -1.0) * pow_x / fact;
  }
  // 1 - cos(x tau) = sum_{m>=1} (-1)^(m+1) (tau x)^(2m) / (2m)!
  const double phase = tau * x_min;
  double phase_pow = 1.0;
  fact = 1.0;
  for (int j = 1; j <= kDeg; ++j) {
    phase_pow *= phase;
    fact *= j;
    if (j % 2 == 0) cos_c[j] = (((j / 2) % 2 == 1) ? 1.0 : -1.0) * phase_pow / fact;
  }
  int delta = 0;
  if (theta > 0.0) {
    // x coth(x / 2theta) = 2 theta sum_n B_2n / (2n)! (x / theta)^(2n)
    delta = 1;
    const double ratio = x_min / theta;
    double ratio_pow = 1.0;
    fact = 1.0;
    for (int j = 0; j <= kDeg; ++j) {
      if (j > 0) {
        fact *= j;
        ratio_pow *= ratio;
      }
      if (j % 2 == 0) coth_c[j] = 2.0 * theta * kBernoulliEven[j / 2] * ratio_pow / fact;
    }
  } else {
    coth_c[0] = 1.0;
  }

  std::array<double, kDeg + 1> tmp{};
  for (int i = 0; i <= kDeg; ++i)
    for (int j = 0; i + j <= kDeg; ++j) tmp[i + j] += exp_c[i] * cos_c[j];
  std::array<double, kDeg + 1> poly{};
  for (int i = 0; i <= kDeg; ++i)
    for (int j = 0; i + j <= kDeg; ++j) poly[i + j] += tmp[i] * coth_c[j];

  // Int_0^x_min x^(s-2-delta+n) dx = x_min^(s-1-delta) x_min^n / (s-1-delta+n)
  double total = 0.0;
  for (int n = 2; n <= kDeg; ++n) total += poly[n] / (s - 1.0 - delta + n);
  return std::pow(x_min, s - 1.0 - delta) * total;
}

}  // namespace detail

/// Zero-temperature closed form, valid for every s > 0:
/// (eta/2) ln(1 + tau^2) at s = 1, else
/// eta Gamma(s-1) {1 - cos[(s-1) arctan tau] / (1 + tau^2)^((s-1)/2)}.
inline double gamma_zero_t_closed(double eta, double s, double tau) {
  detail::check_params(eta, s, tau, "gamma_zero_t_closed");
  return eta * kernel::zero_t(s, tau);
}

/// Short-time zero-temperature form (eta/2) Gamma(s+1) tau^2.
inline double gamma_short_time(double eta, double s, double tau) {
  detail::check_params(eta, s, tau, "gamma_short_time");
  return 0.5 * eta * gamma_fn(s + 1.0) * tau * tau;
}

/// Short-time high-temperature form eta Gamma(s) theta tau^2.
inline double gamma_short_time_high_t(double eta, double s, double tau, double theta) {
  detail::check_params(eta, s, tau, "gamma_short_time_high_t");
  return eta * gamma_fn(s) * theta * tau * tau;
}

inline constexpr double kHighTemperatureMinS = 0.05;

/// High-temperature form: coth(x/2theta) replaced by 2theta/x, i.e.
/// gamma(s, theta) = 2 theta gamma(s-1, 0).
inline double gamma_high_t(double eta, double s, double tau, double theta) {
  detail::check_params(eta, s, tau, "gamma_high_t");
  if (s < kHighTemperatureMinS) {
    std::ostringstream msg;
    msg << "gamma_high_t: s = " << s << " below supported floor "
        << kHighTemperatureMinS;
    throw DomainError(msg.str());
  }
  if (!(theta >= 0.0)) throw DomainError("gamma_high_t: theta must be >= 0");
  return 2.0 * theta * eta * kernel::zero_t(s - 1.0, tau);
}

/// Exact finite-temperature value from the thermal series.
inline double gamma_thermal_series(double eta, double s, double tau, double theta) {
  detail::check_params(eta, s, tau, "gamma_thermal_series");
  if (!(theta > 0.0) || !std::isfinite(theta)) {
    throw DomainError("gamma_thermal_series: theta must be positive and finite");
  }
  return eta * kernel::thermal_series(s, tau, theta);
}

/// Direct adaptive quadrature of the decoherence integral.
inline QuadratureResult gamma_quadrature(double eta, double s, const ScaledPoint& p,
                                         const QuadratureConfig& quad = {}) {
  detail::check_params(eta, s, p.tau, "gamma_quadrature");
  quad.validate();
  const double tau = p.tau;
  const double theta = p.theta;
  if (tau == 0.0) return {};

  double x_min = std::min(1e-3, 0.1 / std::max(tau, 1.0));
  if (theta > 0.0) x_min = std::min(x_min, theta);
  const double x_max = 40.0 + 2.0 * std::log1p(theta) + 2.0 * std::max(0.0, s - 2.0);

  const double head = detail::endpoint_series(s, tau, theta, x_min);

  std::vector<double> breaks{x_min};
  const double osc_width = tau > 1.0 ? std::numbers::pi / (2.0 * tau)
                                     : std::numeric_limits<double>::infinity();
  while (breaks.back() < x_max) {
    const double x = breaks.back();
    const double natural = x < 1.0 ? x : 1.0;  // geometric below 1, unit above
    breaks.push_back(std::min(x_max, x + std::min(natural, osc_width)));
  }

  auto integrand = [&](double x) {
    const double half = std::sin(0.5 * x * tau);
    double v = std::pow(x, s - 2.0) * std::exp(-x) * 2.0 * half * half;
    if (theta > 0.0) v *= coth_stable(x / (2.0 * theta));
    return v;
  };
  const auto body = integrate_panels(integrand, breaks, quad);
  return {eta * (head + body.value), eta * body.error, body.panels};
}

/// Decoherence factor in scaled variables.
///
/// Auto dispatches to the zero-temperature closed form at theta = 0 and to the
/// thermal series otherwise. Quadrature is kept as the independent route.
inline double gamma_scaled(double eta, double s, const ScaledPoint& p,
                           EvalMethod method = EvalMethod::Auto,
                           const QuadratureConfig& quad = {}) {
  switch (method) {
    case EvalMethod::Auto:
      if (p.theta == 0.0) return gamma_zero_t_closed(eta, s, p.tau);
      return gamma_thermal_series(eta, s, p.tau, p.theta);
    case EvalMethod::ClosedFormZeroT:
      if (p.theta != 0.0) {
        throw UsageError("gamma_scaled: ClosedFormZeroT requires theta = 0");
      }
      return gamma_zero_t_closed(eta, s, p.tau);
    case EvalMethod::ThermalSeries:
      if (p.theta == 0.0) return gamma_zero_t_closed(eta, s, p.tau);
      return gamma_thermal_series(eta, s, p.tau, p.theta);
    case EvalMethod::Quadrature:
      return gamma_quadrature(eta, s, p, quad).value;
    case EvalMethod::HighTemperature:
      if (p.theta < 1.0) {
        throw UsageError("gamma_scaled: HighTemperature requires theta >= 1");
      }
      return gamma_high_t(eta, s, p.tau, p.theta);
    case EvalMethod::ShortTime:
      if (p.theta == 0.0) return gamma_short_time(eta, s, p.tau);
      if (p.theta >= 1.0) return gamma_short_time_high_t(eta, s, p.tau, p.theta);
      throw UsageError("gamma_scaled: ShortTime requires theta = 0 or theta >= 1");
  }
  throw UsageError("gamma_scaled: unknown method");
}

/// (1-s) gamma(s) + gamma(s+1), which equals omega_c d(gamma)/d(omega_c) at
/// fixed t and T.
inline double gamma_shift_combination(double eta, double s, const ScaledPoint& p,
                                      EvalMethod method = EvalMethod::Auto,
                                      const QuadratureConfig& quad = {}) {
  return (1.0 - s) * gamma_scaled(eta, s, p, method, quad) +
         gamma_scaled(eta, s + 1.0, p, method, quad);
}

/// gamma at physical time t and temperature T.
inline double gamma_dimensionful(const OhmicSpectrum& spec, double t, double T,
                                 const QuadratureConfig& quad = {},
                                 EvalMethod method = EvalMethod::Auto) {
  if (!(t >= 0.0) || !(T >= 0.0)) {
    throw DomainError("gamma_dimensionful: t and T must be >= 0");
  }
  return gamma_scaled(spec.eta, spec.s, ScaledPoint(spec.omega_c * t, T / spec.omega_c),
                      method, quad);
}

}  // namespace ohmic
