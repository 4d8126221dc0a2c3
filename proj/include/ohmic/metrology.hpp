#pragma once

// Probe states and Fisher information for estimating omega_c.
//
// Derivatives with respect to omega_c are passed in scaled form,
// d = omega_c * d(gamma)/d(omega_c), which is what the s-shift identity
// produces. The dimensionless QSNR is then d^2 / (e^{2 gamma} - 1).

#include <array>
#include <cmath>
#include <complex>

#include "ohmic/environment.hpp"
#include "ohmic/errors.hpp"

namespace ohmic {

struct ProbeConfig {
  double omega_0 = 0.0;  // level splitting; 0 means rotating frame

  explicit ProbeConfig(double omega_0_ = 0.0) : omega_0(omega_0_) {
    if (!(omega_0 >= 0.0)) throw DomainError("ProbeConfig: omega_0 must be >= 0");
  }
};

/// Dephased equal superposition: populations 1/2, coherence e^{-gamma} e^{i phase}.
struct CoherenceState {
  double gamma = 0.0;
  double phase = 0.0;

  double coherence() const { return std::exp(-gamma); }

  // Matrix in the basis {|1>, |0>}, row-major.
  std::array<std::complex<double>, 4> density_matrix() const {
    const auto off = 0.5 * std::polar(coherence(), phase);
    return {std::complex<double>(0.5, 0.0), off, std::conj(off),
            std::complex<double>(0.5, 0.0)};
  }

  // Eigenvalues (1 +- e^{-gamma}) / 2, ascending.
  std::array<double, 2> eigenvalues() const {
    const double c = coherence();
    return {0.5 * (1.0 - c), 0.5 * (1.0 + c)};
  }
};

inline CoherenceState probe_state(double gamma, const ProbeConfig& probe, double t) {
  if (!(gamma >= 0.0)) throw DomainError("probe_state: gamma must be >= 0");
  if (!(t >= 0.0)) throw DomainError("probe_state: t must be >= 0");
  return CoherenceState{gamma, probe.omega_0 * t};
}

inline double expectation_sigma_x(const CoherenceState& state) {
  return state.coherence() * std::cos(state.phase);
}

/// Quantum Fisher information for omega_c, (d gamma / d omega_c)^2 / (e^{2gamma} - 1),
/// from the scaled derivative omega_c * d gamma / d omega_c.
inline double qfi(double gamma, double scaled_derivative, double omega_c) {
  if (!(gamma >= 0.0)) throw DomainError("qfi: gamma must be >= 0");
  if (!(omega_c > 0.0)) throw DomainError("qfi: omega_c must be positive");
  if (gamma == 0.0) {
    if (std::abs(scaled_derivative) < 1e-300) return 0.0;
    throw SingularLimitError("qfi: gamma = 0 with nonzero derivative");
  }
  const double d = scaled_derivative / omega_c;
  return d * d / std::expm1(2.0 * gamma);
}

/// omega_c^2 times the classical Fisher information of a sigma_x measurement.
inline double classical_fisher_sigma_x(double gamma, double scaled_derivative,
                                       double phase) {
  if (!(gamma >= 0.0)) throw DomainError("classical_fisher_sigma_x: gamma must be >= 0");
  const double c = std::cos(phase);
  const double signal2 = std::exp(-2.0 * gamma) * c * c;
  // 1 - e^{-2gamma} cos^2 = -expm1(-2gamma) + e^{-2gamma} sin^2, no cancellation.
  const double sn = std::sin(phase);
  const double variance = -std::expm1(-2.0 * gamma) + std::exp(-2.0 * gamma) * sn * sn;
  if (!(variance > 0.0)) {
    throw SingularLimitError("classical_fisher_sigma_x: zero variance of sigma_x");
  }
  return scaled_derivative * scaled_derivative * signal2 / variance;
}

/// Dimensionless QSNR Q = omega_c^2 F_q at a scaled point.
inline double qsnr(double eta, double s, const ScaledPoint& p,
                   EvalMethod method = EvalMethod::Auto,
                   const QuadratureConfig& quad = {}) {
  if (p.tau == 0.0) return 0.0;
  const double gamma = gamma_scaled(eta, s, p, method, quad);
  if (gamma == 0.0) return 0.0;
  const double d = (1.0 - s) * gamma + gamma_scaled(eta, s + 1.0, p, method, quad);
  return d * d / std::expm1(2.0 * gamma);
}

/// Q evaluated at physical (t, T) for a given spectrum.
inline double qsnr_dimensionful(const OhmicSpectrum& spec, double t, double T,
                                EvalMethod method = EvalMethod::Auto,
                                const QuadratureConfig& quad = {}) {
  if (!(t >= 0.0) || !(T >= 0.0)) {
    throw DomainError("qsnr_dimensionful: t and T must be >= 0");
  }
  const double gamma = gamma_dimensionful(spec, t, T, quad, method);
  if (gamma == 0.0) return 0.0;
  const OhmicSpectrum shifted(spec.eta, spec.s + 1.0, spec.omega_c);
  const double d =
      (1.0 - spec.s) * gamma + gamma_dimensionful(shifted, t, T, quad, method);
  return spec.omega_c * spec.omega_c * qfi(gamma, d, spec.omega_c);
}

enum class ShortTimeRegime { ZeroT, HighT };

/// Short-time QSNR as a function of gamma alone: 4 gamma^2 / (e^{2gamma} - 1)
/// at zero temperature and a quarter of that at high temperature.
inline double qsnr_of_gamma_short_time(double gamma, ShortTimeRegime regime) {
  if (!(gamma >= 0.0)) throw DomainError("qsnr_of_gamma_short_time: gamma must be >= 0");
  if (gamma == 0.0) return 0.0;
  const double base = gamma * gamma / std::expm1(2.0 * gamma);
  return regime == ShortTimeRegime::ZeroT ? 4.0 * base : base;
}

}  // namespace ohmic
