#pragma once

// Adaptive panel quadrature with the 7-point Gauss / 15-point Kronrod pair.

#include <array>
#include <cmath>
#include <algorithm>
#include <cstddef>
#include <functional>
#include <queue>
#include <span>
#include <sstream>
#include <vector>

#include "ohmic/errors.hpp"

namespace ohmic {

struct QuadratureConfig {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  // Upper bound on the number of panels after refinement. Oscillatory
  // integrands need about 2*x_max*tau/pi initial panels.
  std::size_t max_panels = std::size_t{1} << 17;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) {
      throw DomainError("QuadratureConfig: rel_tol must lie in (0, 1e-2]");
    }
    if (!(abs_tol > 0.0)) {
      throw DomainError("QuadratureConfig: abs_tol must be positive");
    }
    if (max_panels < 16) {
      throw DomainError("QuadratureConfig: max_panels must be >= 16");
    }
  }
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t panels = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the nodes at odd indices of kKronrodNodes (and the centre).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;

  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel gauss_kronrod_15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (std::size_t i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(centre - dx) + f(centre + dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  return Panel{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Integrates f over [breakpoints.front(), breakpoints.back()], starting from
/// one GK15 panel per breakpoint interval and bisecting the panel with the
/// largest error estimate until the total estimate meets the tolerance.
template <typename F>
QuadratureResult integrate_panels(F&& f, std::span<const double> breakpoints,
                                  const QuadratureConfig& cfg) {
  cfg.validate();
  if (breakpoints.size() < 2) return {};
  if (breakpoints.size() - 1 > cfg.max_panels) {
    std::ostringstream msg;
    msg << "integrate_panels: " << breakpoints.size() - 1
        << " initial panels exceed max_panels = " << cfg.max_panels;
    throw ConvergenceError(msg.str(), INFINITY);
  }

  std::vector<detail::Panel> storage;
  storage.reserve(2 * breakpoints.size());
  double total = 0.0;
  double total_err = 0.0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    auto p = detail::gauss_kronrod_15(f, breakpoints[i], breakpoints[i + 1]);
    total += p.value;
    total_err += p.error;
    storage.push_back(p);
  }
  std::priority_queue<detail::Panel> queue(std::less<detail::Panel>{},
                                           std::move(storage));
  std::size_t panels = queue.size();

  auto tolerance = [&] { return std::max(cfg.abs_tol, cfg.rel_tol * std::abs(total)); };
  while (total_err > tolerance()) {
    if (panels >= cfg.max_panels) {
      std::ostringstream msg;
      msg.precision(3);
      msg << "integrate_panels: no convergence within " << cfg.max_panels
          << " panels (error estimate " << total_err << ", value " << total << ")";
      throw ConvergenceError(msg.str(), total_err);
    }
    const detail::Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    const auto left = detail::gauss_kronrod_15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod_15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  // Re-sum to shed the drift of the running updates.
  double value = 0.0;
  double error = 0.0;
  while (!queue.empty()) {
    value += queue.top().value;
    error += queue.top().error;
    queue.pop();
  }
  return {value, error, panels};
}

}  // namespace ohmic
