#pragma once

// Command layer behind the ohmic-probe executable: grids, tabular datasets,
// CSV/JSON writers and the figure panel definitions.

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ohmic/environment.hpp"
#include "ohmic/errors.hpp"
#include "ohmic/metrology.hpp"
#include "ohmic/optimize.hpp"
#include "ohmic/parallel.hpp"
#include "ohmic/ramsey.hpp"

namespace ohmic::cli {

using json = nlohmann::json;

enum class Spacing { Linear, Log };

struct Grid {
  double min = 0.0;
  double max = 1.0;
  int points = 2;
  Spacing spacing = Spacing::Linear;

  void validate(std::string_view what = "grid") const {
    std::ostringstream msg;
    if (!(min < max)) {
      msg << what << ": min must be < max";
    } else if (points < 2) {
      msg << what << ": points must be >= 2";
    } else if (spacing == Spacing::Log && !(min > 0.0)) {
      msg << what << ": log spacing requires min > 0";
    } else {
      return;
    }
    throw UsageError(msg.str());
  }

  std::vector<double> values() const {
    validate();
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) {
      const double f = static_cast<double>(i) / (points - 1);
      out[i] = spacing == Spacing::Log ? min * std::pow(max / min, f)
                                       : min + (max - min) * f;
    }
    out.front() = min;
    out.back() = max;
    return out;
  }
};

enum class SweepParam { Eta, S, Theta, Tau };

inline SweepParam parse_sweep_param(std::string_view name) {
  if (name == "eta") return SweepParam::Eta;
  if (name == "s") return SweepParam::S;
  if (name == "theta") return SweepParam::Theta;
  if (name == "tau") return SweepParam::Tau;
  throw UsageError("unknown sweep parameter '" + std::string(name) +
                   "' (expected eta, s, theta or tau)");
}

struct SweepSpec {
  SweepParam vary = SweepParam::Eta;
  Grid grid;
  double eta = 0.1;
  double s = 1.0;
  double theta = 0.0;
};

struct Row {
  std::vector<double> values;
  std::string error;  // empty when the row evaluated cleanly
};

struct Dataset {
  std::string name;
  std::vector<std::pair<std::string, std::string>> meta;
  std::vector<std::string> columns;
  std::vector<Row> rows;

  bool has_errors() const {
    for (const auto& r : rows)
      if (!r.error.empty()) return true;
    return false;
  }

  void append(const Dataset& other) {
    for (const auto& r : other.rows) rows.push_back(r);
  }
};

inline std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

template <typename T>
std::string meta_value(T v) {
  if constexpr (std::is_arithmetic_v<T>) {
    return format_number(static_cast<double>(v));
  } else {
    return std::string(v);
  }
}

inline std::string to_csv(const Dataset& ds) {
  std::ostringstream out;
  if (!ds.name.empty()) out << "# dataset: " << ds.name << "\n";
  for (const auto& [k, v] : ds.meta) out << "# " << k << ": " << v << "\n";
  for (const auto& c : ds.columns) out << c << ",";
  out << "error\n";
  for (const auto& row : ds.rows) {
    for (double v : row.values) out << format_number(v) << ",";
    std::string err = row.error;
    for (char& ch : err)
      if (ch == ',' || ch == '\n' || ch == '\r') ch = ';';
    out << err << "\n";
  }
  return out.str();
}

/// Parses the output of to_csv (metadata, columns and rows).
inline Dataset parse_csv(std::string_view text) {
  Dataset ds;
  std::istringstream in{std::string(text)};
  std::string line;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto colon = line.find(": ");
      if (colon == std::string::npos) continue;
      std::string key = line.substr(2, colon - 2);
      std::string value = line.substr(colon + 2);
      if (key == "dataset") {
        ds.name = value;
      } else {
        ds.meta.emplace_back(std::move(key), std::move(value));
      }
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (!header_seen) {
      header_seen = true;
      if (!cells.empty() && cells.back() == "error") cells.pop_back();
      ds.columns = cells;
      continue;
    }
    if (cells.size() != ds.columns.size() + 1) {
      throw UsageError("parse_csv: row width does not match header");
    }
    Row row;
    for (std::size_t i = 0; i < ds.columns.size(); ++i) row.values.push_back(std::stod(cells[i]));
    row.error = cells.back();
    ds.rows.push_back(std::move(row));
  }
  return ds;
}

inline json number_json(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

inline json to_json(const Dataset& ds) {
  json meta = json::object();
  for (const auto& [k, v] : ds.meta) meta[k] = v;
  json rows = json::array();
  for (const auto& row : ds.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < ds.columns.size(); ++i) r[ds.columns[i]] = number_json(row.values[i]);
    r["error"] = row.error.empty() ? json(nullptr) : json(row.error);
    rows.push_back(std::move(r));
  }
  return json{{"dataset", ds.name}, {"meta", meta}, {"columns", ds.columns}, {"rows", rows}};
}

inline json to_json(const OptimumResult& r) {
  return json{{"tau_opt", number_json(r.tau_opt)},
              {"q_opt", number_json(r.q_opt)},
              {"gamma_opt", number_json(r.gamma_opt)},
              {"method", std::string(to_string(r.method))},
              {"short_time_regime", r.short_time_regime}};
}

inline json to_json(const RamseyReport& r) {
  json est = json::array();
  for (double e : r.estimates) est.push_back(e);
  return json{{"estimates", est},
              {"mean", number_json(r.mean)},
              {"empirical_variance", number_json(r.empirical_variance)},
              {"mse", number_json(r.mse)},
              {"crb", number_json(r.crb)},
              {"ratio", number_json(r.ratio)},
              {"failures", r.failures},
              {"valid", r.valid}};
}

namespace detail {

// Evaluates fn per item in parallel; ohmic errors become row-level error text.
template <typename Item, typename Fn>
std::vector<Row> evaluate_rows(const std::vector<Item>& items, std::size_t width, Fn fn) {
  return parallel_map(items.size(), [&](std::size_t i) {
    Row row;
    try {
      row.values = fn(items[i]);
    } catch (const std::exception& e) {
      row.values.assign(width, std::numeric_limits<double>::quiet_NaN());
      row.error = e.what();
    }
    return row;
  });
}

struct CurveItem {
  double eta, s, theta, tau;
};

struct OptimumItem {
  double eta, s, theta;
};

inline const std::vector<std::string> kCurveColumns = {"eta", "s", "theta", "tau", "q", "gamma"};
inline const std::vector<std::string> kOptimumColumns = {
    "eta", "s", "theta", "tau_opt", "q_opt", "gamma_opt", "short_time_regime"};

inline std::vector<Row> curve_rows(const std::vector<CurveItem>& items,
                                   const QuadratureConfig& quad) {
  return evaluate_rows(items, kCurveColumns.size(), [&](const CurveItem& it) {
    const ScaledPoint p(it.tau, it.theta);
    return std::vector<double>{it.eta, it.s, it.theta, it.tau,
                               qsnr(it.eta, it.s, p, EvalMethod::Auto, quad),
                               gamma_scaled(it.eta, it.s, p, EvalMethod::Auto, quad)};
  });
}

inline std::vector<Row> optimum_rows(const std::vector<OptimumItem>& items,
                                     const QuadratureConfig& quad) {
  return evaluate_rows(items, kOptimumColumns.size(), [&](const OptimumItem& it) {
    const auto r = find_optimum(it.eta, it.s, it.theta, quad);
    return std::vector<double>{it.eta,    it.s,        it.theta,
                               r.tau_opt, r.q_opt,     r.gamma_opt,
                               r.short_time_regime ? 1.0 : 0.0};
  });
}

inline std::vector<CurveItem> curve_items(const std::vector<double>& etas,
                                          const std::vector<double>& ss,
                                          const std::vector<double>& thetas,
                                          const std::vector<double>& taus) {
  std::vector<CurveItem> items;
  for (double e : etas)
    for (double s : ss)
      for (double th : thetas)
        for (double t : taus) items.push_back({e, s, th, t});
  return items;
}

inline std::vector<OptimumItem> optimum_items(const std::vector<double>& etas,
                                              const std::vector<double>& ss,
                                              const std::vector<double>& thetas) {
  std::vector<OptimumItem> items;
  for (double e : etas)
    for (double s : ss)
      for (double th : thetas) items.push_back({e, s, th});
  return items;
}

}  // namespace detail

/// Rows (tau, Q, gamma) along a tau grid; fixed parameters repeated per row.
inline Dataset cmd_curve(double eta, double s, double theta, const Grid& tau_grid,
                         const QuadratureConfig& quad = {}) {
  tau_grid.validate("tau grid");
  if (tau_grid.min < 0.0) throw UsageError("tau grid: tau must be >= 0");
  Dataset ds;
  ds.name = "curve";
  ds.meta = {{"eta", meta_value(eta)}, {"s", meta_value(s)}, {"theta", meta_value(theta)}};
  ds.columns = detail::kCurveColumns;
  ds.rows = detail::curve_rows(detail::curve_items({eta}, {s}, {theta}, tau_grid.values()), quad);
  return ds;
}

/// Same curve driven by physical (omega_c, T) and a grid of times t.
inline Dataset cmd_curve_dimensionful(const OhmicSpectrum& spec, double temperature,
                                      const Grid& time_grid,
                                      const QuadratureConfig& quad = {}) {
  time_grid.validate("time grid");
  if (time_grid.min < 0.0) throw UsageError("time grid: t must be >= 0");
  if (!(temperature >= 0.0)) throw UsageError("temperature must be >= 0");
  Dataset ds;
  ds.name = "curve_dimensionful";
  ds.meta = {{"eta", meta_value(spec.eta)},
             {"s", meta_value(spec.s)},
             {"omega_c", meta_value(spec.omega_c)},
             {"temperature", meta_value(temperature)}};
  ds.columns = {"t", "tau", "theta", "q", "gamma"};
  const auto ts = time_grid.values();
  ds.rows = detail::evaluate_rows(ts, ds.columns.size(), [&](double t) {
    return std::vector<double>{t, spec.omega_c * t, temperature / spec.omega_c,
                               qsnr_dimensionful(spec, t, temperature, EvalMethod::Auto, quad),
                               gamma_dimensionful(spec, t, temperature, quad)};
  });
  return ds;
}

inline OptimumResult cmd_optimum(double eta, double s, double theta,
                                 const QuadratureConfig& quad = {}) {
  return find_optimum(eta, s, theta, quad);
}

inline Dataset cmd_sweep(const SweepSpec& spec, const QuadratureConfig& quad = {}) {
  spec.grid.validate("sweep grid");
  const auto xs = spec.grid.values();
  Dataset ds;
  ds.name = "sweep";
  const char* names[] = {"eta", "s", "theta", "tau"};
  ds.meta = {{"vary", names[static_cast<int>(spec.vary)]},
             {"eta", meta_value(spec.eta)},
             {"s", meta_value(spec.s)},
             {"theta", meta_value(spec.theta)}};
  std::vector<double> etas{spec.eta}, ss{spec.s}, thetas{spec.theta};
  switch (spec.vary) {
    case SweepParam::Tau:
      ds.columns = detail::kCurveColumns;
      ds.rows = detail::curve_rows(detail::curve_items(etas, ss, thetas, xs), quad);
      return ds;
    case SweepParam::Eta: etas = xs; break;
    case SweepParam::S: ss = xs; break;
    case SweepParam::Theta: thetas = xs; break;
  }
  ds.columns = detail::kOptimumColumns;
  ds.rows = detail::optimum_rows(detail::optimum_items(etas, ss, thetas), quad);
  return ds;
}

inline Dataset cmd_enhancement(const std::vector<double>& ss, const Grid& eta_grid,
                               const QuadratureConfig& quad = {}) {
  eta_grid.validate("eta grid");
  Dataset ds;
  ds.name = "enhancement";
  ds.meta = {{"q_sat", meta_value(q_sat())}};
  ds.columns = {"s", "eta", "r", "q_sat", "q_opt_zero_t"};
  std::vector<std::pair<double, double>> items;
  for (double s : ss)
    for (double e : eta_grid.values()) items.emplace_back(s, e);
  ds.rows = detail::evaluate_rows(items, ds.columns.size(), [&](const auto& it) {
    const auto r = enhancement_factor(it.second, it.first, quad);
    return std::vector<double>{it.first, it.second, r.r, r.q_sat, r.q_opt_zero_t};
  });
  return ds;
}

inline Dataset cmd_critical_eta(const Grid& s_grid, const QuadratureConfig& quad = {}) {
  s_grid.validate("s grid");
  Dataset ds;
  ds.name = "critical_eta";
  ds.meta = {{"bracket", "[" + meta_value(kCriticalEtaLo) + ", " + meta_value(kCriticalEtaHi) + "]"},
             {"rel_tol", "1e-3"}};
  ds.columns = {"s", "eta_c"};
  ds.rows = detail::evaluate_rows(s_grid.values(), ds.columns.size(), [&](double s) {
    return std::vector<double>{s, critical_eta(s, quad)};
  });
  return ds;
}

inline RamseyReport cmd_ramsey(const RamseyConfig& cfg, const QuadratureConfig& quad = {}) {
  return crb_report(cfg, quad);
}

// ---------------------------------------------------------------------------
// Figure panels

struct FigurePanel {
  std::string id;
  std::string description;
  std::function<Dataset(const QuadratureConfig&)> build;
};

namespace detail {

inline Dataset curve_panel(const std::string& id, const std::string& desc,
                           const std::vector<double>& etas, const std::vector<double>& ss,
                           const std::vector<double>& thetas, const Grid& taus,
                           const QuadratureConfig& quad) {
  Dataset ds;
  ds.name = "figure " + id;
  ds.meta = {{"panel", desc}, {"tau_grid", meta_value(taus.min) + ".." + meta_value(taus.max) + " log x" + std::to_string(taus.points)}};
  ds.columns = kCurveColumns;
  ds.rows = curve_rows(curve_items(etas, ss, thetas, taus.values()), quad);
  return ds;
}

inline Dataset optimum_panel(const std::string& id, const std::string& desc,
                             const std::vector<double>& etas, const std::vector<double>& ss,
                             const std::vector<double>& thetas, const QuadratureConfig& quad) {
  Dataset ds;
  ds.name = "figure " + id;
  ds.meta = {{"panel", desc}};
  ds.columns = kOptimumColumns;
  ds.rows = optimum_rows(optimum_items(etas, ss, thetas), quad);
  return ds;
}

}  // namespace detail

inline const std::vector<FigurePanel>& figure_panels() {
  using detail::curve_panel;
  using detail::optimum_panel;
  static const std::vector<FigurePanel> panels = [] {
    const Grid tau_small_eta{1e-2, 1e3, 201, Spacing::Log};
    const Grid tau_large_eta{1e-3, 10.0, 161, Spacing::Log};
    const Grid tau_thermal{1e-3, 1e2, 201, Spacing::Log};
    const auto eta_axis = Grid{1e-2, 1e3, 51, Spacing::Log}.values();
    const auto s_axis = Grid{0.1, 10.0, 100, Spacing::Linear}.values();
    const auto theta_axis = Grid{1e-2, 1e5, 57, Spacing::Log}.values();

    std::vector<FigurePanel> p;
    auto add = [&](std::string id, std::string desc, auto build) {
      p.push_back({id, desc, [id, desc, build](const QuadratureConfig& q) {
                     return build(id, desc, q);
                   }});
    };
    add("1a", "Q vs tau, s=1, theta=0, eta in {0.1 0.5 1}",
        [=](auto id, auto d, auto& q) { return curve_panel(id, d, {0.1, 0.5, 1.0}, {1.0}, {0.0}, tau_small_eta, q); });
    add("1b", "Q vs tau, s=1, theta=0, eta in {200 300 400}",
        [=](auto id, auto d, auto& q) { return curve_panel(id, d, {200.0, 300.0, 400.0}, {1.0}, {0.0}, tau_large_eta, q); });
    add("2a", "q_opt vs eta, theta=0, s in {0.5 1 2}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, eta_axis, {0.5, 1.0, 2.0}, {0.0}, q); });
    add("2b", "tau_opt vs eta, theta=0, s in {0.5 1 2}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, eta_axis, {0.5, 1.0, 2.0}, {0.0}, q); });
    add("3", "q_opt vs s, theta=0, eta in {0.01 0.1 1}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, {0.01, 0.1, 1.0}, s_axis, {0.0}, q); });
    add("4a", "Q vs tau, eta=0.1, s=1, theta in {0 1 10 100}",
        [=](auto id, auto d, auto& q) { return curve_panel(id, d, {0.1}, {1.0}, {0.0, 1.0, 10.0, 100.0}, tau_thermal, q); });
    add("4b", "Q vs tau, eta=0.1, s=1, theta in {200 300 400}",
        [=](auto id, auto d, auto& q) { return curve_panel(id, d, {0.1}, {1.0}, {200.0, 300.0, 400.0}, tau_thermal, q); });
    add("5a", "q_opt vs theta, eta=0.1, s in {0.5 1 2}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, {0.1}, {0.5, 1.0, 2.0}, theta_axis, q); });
    add("5b", "q_opt vs theta, s=1, eta in {0.05 0.2 0.5}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, {0.05, 0.2, 0.5}, {1.0}, theta_axis, q); });
    add("5c", "tau_opt vs theta, eta=0.1, s in {0.5 1 2}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, {0.1}, {0.5, 1.0, 2.0}, theta_axis, q); });
    add("5d", "tau_opt vs theta, s=1, eta in {0.05 0.2 0.5}",
        [=](auto id, auto d, auto& q) { return optimum_panel(id, d, {0.05, 0.2, 0.5}, {1.0}, theta_axis, q); });
    add("6a", "R vs eta, s in {0.5 1 2}", [](auto id, auto d, auto& q) {
      Dataset ds = cmd_enhancement({0.5, 1.0, 2.0}, Grid{1e-2, 1.0, 41, Spacing::Log}, q);
      ds.name = "figure " + id;
      ds.meta.insert(ds.meta.begin(), {"panel", d});
      return ds;
    });
    add("6b", "eta_c vs s", [](auto id, auto d, auto& q) {
      Dataset ds = cmd_critical_eta(Grid{0.3, 3.0, 28, Spacing::Linear}, q);
      ds.name = "figure " + id;
      ds.meta.insert(ds.meta.begin(), {"panel", d});
      return ds;
    });
    return p;
  }();
  return panels;
}

inline std::vector<std::string> figure_ids() {
  std::vector<std::string> ids;
  for (const auto& p : figure_panels()) ids.push_back(p.id);
  return ids;
}

inline Dataset cmd_figure(std::string_view id, const QuadratureConfig& quad = {}) {
  for (const auto& p : figure_panels()) {
    if (p.id == id) return p.build(quad);
  }
  std::string valid;
  for (const auto& known : figure_ids()) valid += (valid.empty() ? "" : ", ") + known;
  throw UsageError("unknown figure id '" + std::string(id) + "' (valid: " + valid + ")");
}

}  // namespace ohmic::cli
