#pragma once

// Optimal measurement time, analytic short-time optima, and the
// high-temperature enhancement analysis.

#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "ohmic/environment.hpp"
#include "ohmic/errors.hpp"
#include "ohmic/metrology.hpp"
#include "ohmic/specfun.hpp"

namespace ohmic {

struct OptimumResult {
  double tau_opt = 0.0;
  double q_opt = 0.0;
  double gamma_opt = 0.0;
  EvalMethod method = EvalMethod::Auto;
  bool short_time_regime = false;  // tau_opt < kShortTimeTau
};

struct EnhancementResult {
  double r = 0.0;
  double q_sat = 0.0;
  double q_opt_zero_t = 0.0;
};

inline constexpr double kShortTimeTau = 0.1;

/// Root of gamma e^{2gamma} - e^{2gamma} + 1 = 0, i.e. 1 + W0(-2 e^-2) / 2.
inline double gamma_opt_analytic() {
  return 1.0 + 0.5 * lambert_w0(-2.0 * std::exp(-2.0));
}

/// Zero-temperature upper bound 4 g^2 / (e^{2g} - 1) at g = gamma_opt_analytic().
inline double q_max() {
  return qsnr_of_gamma_short_time(gamma_opt_analytic(), ShortTimeRegime::ZeroT);
}

/// High-temperature saturation value, q_max() / 4.
inline double q_sat() {
  return qsnr_of_gamma_short_time(gamma_opt_analytic(), ShortTimeRegime::HighT);
}

/// Closed-form optimal scaled time in the short-time regime. Zero temperature:
/// sqrt(2 g / (eta Gamma(s+1))); high temperature: sqrt(g / (eta Gamma(s) theta)).
/// Pass gamma_opt = 0.8 to reproduce the rounded constants 1.6 and 0.8.
inline double tau_opt_short_time(double eta, double s, ShortTimeRegime regime,
                                 double theta = 0.0,
                                 double gamma_opt = gamma_opt_analytic()) {
  if (!(s > 0.0)) throw DomainError("tau_opt_short_time: s must be positive");
  if (!(eta > 0.0)) throw DomainError("tau_opt_short_time: eta must be positive");
  if (regime == ShortTimeRegime::ZeroT) {
    return std::sqrt(2.0 * gamma_opt / (eta * gamma_fn(s + 1.0)));
  }
  if (!(theta > 0.0)) {
    throw DomainError("tau_opt_short_time: high-temperature form needs theta > 0");
  }
  return std::sqrt(gamma_opt / (eta * gamma_fn(s) * theta));
}

struct ScanOptions {
  double tau_min = 1e-6;
  double tau_max = 1e6;
  int points_per_decade = 64;
  double refine_rel_tol = 1e-6;
  // Stop once Q over two consecutive decades stays below this fraction of
  // the running maximum.
  double cutoff_fraction = 1e-6;
};

namespace detail {

template <typename Q>
double golden_section_max_log(Q& q_of_tau, double lo, double hi, double rel_tol) {
  // Maximise over u = ln tau.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = std::log(lo);
  double b = std::log(hi);
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = q_of_tau(std::exp(c));
  double fd = q_of_tau(std::exp(d));
  while (b - a > rel_tol) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = q_of_tau(std::exp(c));
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = q_of_tau(std::exp(d));
    }
  }
  return std::exp(0.5 * (a + b));
}

}  // namespace detail

/// Global maximum of Q(tau): log-dense scan, then golden-section refinement
/// inside the bracket of the best scan point.
inline OptimumResult find_optimum(double eta, double s, double theta,
                                  const QuadratureConfig& quad = {},
                                  EvalMethod method = EvalMethod::Auto,
                                  const ScanOptions& opts = {}) {
  if (!(eta > 0.0) || !(s > 0.0) || !(theta >= 0.0)) {
    std::ostringstream msg;
    msg << "find_optimum: requires eta > 0, s > 0, theta >= 0 (got " << eta << ", "
        << s << ", " << theta << ")";
    throw DomainError(msg.str());
  }
  auto q_of_tau = [&](double tau) {
    return qsnr(eta, s, ScaledPoint(tau, theta), method, quad);
  };

  // Strong effective coupling pushes the optimum below the default window;
  // start two decades under the short-time prediction in that case.
  double tau_min = opts.tau_min;
  double predicted = tau_opt_short_time(eta, s, ShortTimeRegime::ZeroT);
  if (theta > 0.0) {
    predicted = std::min(predicted, tau_opt_short_time(eta, s, ShortTimeRegime::HighT, theta));
  }
  if (predicted > 0.0 && std::isfinite(predicted)) tau_min = std::min(tau_min, 1e-2 * predicted);

  const double decades = std::log10(opts.tau_max / tau_min);
  const int n = static_cast<int>(std::ceil(decades * opts.points_per_decade));
  const double step = std::log(opts.tau_max / tau_min) / n;

  std::vector<double> taus;
  std::vector<double> qs;
  taus.reserve(n + 1);
  qs.reserve(n + 1);
  double best_q = 0.0;
  int best = -1;
  double decade_max = 0.0;
  int quiet_decades = 0;
  for (int i = 0; i <= n; ++i) {
    const double tau = tau_min * std::exp(step * i);
    const double q = q_of_tau(tau);
    taus.push_back(tau);
    qs.push_back(q);
    if (q > best_q) {
      best_q = q;
      best = i;
    }
    decade_max = std::max(decade_max, q);
    if (i > 0 && i % opts.points_per_decade == 0) {
      quiet_decades = (best_q > 0.0 && decade_max < opts.cutoff_fraction * best_q)
                          ? quiet_decades + 1
                          : 0;
      decade_max = 0.0;
      if (quiet_decades >= 2) break;
    }
  }
  if (best < 0 || !(best_q > 0.0)) {
    std::ostringstream msg;
    msg << "find_optimum: Q vanishes on the whole scan (eta=" << eta << ", s=" << s
        << ", theta=" << theta << ")";
    throw NoOptimumError(msg.str());
  }

  const double lo = taus[best > 0 ? best - 1 : 0];
  const double hi = taus[std::min<std::size_t>(best + 1, taus.size() - 1)];
  OptimumResult out;
  out.tau_opt = taus[best];
  out.q_opt = best_q;
  if (hi > lo) {
    const double tau = detail::golden_section_max_log(q_of_tau, lo, hi, opts.refine_rel_tol);
    const double q = q_of_tau(tau);
    if (q >= best_q) {
      out.tau_opt = tau;
      out.q_opt = q;
    }
  }
  out.gamma_opt = gamma_scaled(eta, s, ScaledPoint(out.tau_opt, theta), method, quad);
  out.method = method != EvalMethod::Auto
                   ? method
                   : (theta == 0.0 ? EvalMethod::ClosedFormZeroT : EvalMethod::ThermalSeries);
  out.short_time_regime = out.tau_opt < kShortTimeTau;
  return out;
}

/// R = q_sat / Q_opt(theta = 0).
inline EnhancementResult enhancement_factor(double eta, double s,
                                            const QuadratureConfig& quad = {}) {
  EnhancementResult out;
  out.q_sat = q_sat();
  out.q_opt_zero_t = find_optimum(eta, s, 0.0, quad).q_opt;
  out.r = out.q_sat / out.q_opt_zero_t;
  return out;
}

inline constexpr double kCriticalEtaLo = 1e-3;
inline constexpr double kCriticalEtaHi = 2.0;

/// Coupling eta_c where R(eta_c, s) = 1, by bisection in ln eta over [1e-3, 2].
inline double critical_eta(double s, const QuadratureConfig& quad = {},
                           double rel_tol = 1e-3) {
  if (!(s > kHighTemperatureMinS)) {
    throw DomainError("critical_eta: requires s > 0.05");
  }
  auto excess = [&](double eta) { return enhancement_factor(eta, s, quad).r - 1.0; };
  double lo = kCriticalEtaLo;
  double hi = kCriticalEtaHi;
  const double f_lo = excess(lo);
  const double f_hi = excess(hi);
  if (!(f_lo > 0.0 && f_hi < 0.0)) {
    std::ostringstream msg;
    msg << "critical_eta: no sign change of R - 1 on [" << lo << ", " << hi
        << "] for s = " << s << " (R = " << f_lo + 1.0 << ", " << f_hi + 1.0 << ")";
    throw BracketError(msg.str(), f_lo + 1.0, f_hi + 1.0);
  }
  while (hi / lo - 1.0 > rel_tol) {
    const double mid = std::sqrt(lo * hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::sqrt(lo * hi);
}

}  // namespace ohmic
