// ohmic-probe: curves, optima, sweeps, enhancement analysis and Ramsey
// simulations for a qubit probe of an Ohmic-family bath.
//
// Exit codes: 0 success, 1 usage error, 2 numerical failure (including any
// row-level error in an emitted dataset).

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "ohmic/commands.hpp"

namespace {

using namespace ohmic;
using namespace ohmic::cli;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct Common {
  std::string format = "csv";
  std::string output;
  double quad_rel_tol = 1e-9;
  double quad_abs_tol = 1e-12;

  QuadratureConfig quad() const {
    QuadratureConfig q;
    q.rel_tol = quad_rel_tol;
    q.abs_tol = quad_abs_tol;
    q.validate();
    return q;
  }
};

void add_common(CLI::App* cmd, Common& c, const std::string& default_format) {
  c.format = default_format;
  cmd->add_option("--format", c.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--output", c.output, "Write to this file instead of stdout");
  cmd->add_option("--quad-rel-tol", c.quad_rel_tol, "Quadrature relative tolerance")
      ->capture_default_str();
  cmd->add_option("--quad-abs-tol", c.quad_abs_tol, "Quadrature absolute tolerance")
      ->capture_default_str();
}

void emit(const Common& c, const std::string& text) {
  if (c.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.output);
  if (!out) throw UsageError("cannot open output file '" + c.output + "'");
  out << text;
}

int emit_dataset(const Common& c, const Dataset& ds) {
  emit(c, c.format == "json" ? to_json(ds).dump(2) + "\n" : to_csv(ds));
  if (ds.has_errors()) {
    std::cerr << "ohmic-probe: one or more rows failed (see error column)\n";
    return kExitNumerical;
  }
  return 0;
}

Spacing spacing_of(bool log) { return log ? Spacing::Log : Spacing::Linear; }

std::uint64_t as_count(double v, const char* flag) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e18) {
    throw UsageError(std::string(flag) + ": expected a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cutoff-frequency estimation with a dephasing qubit probe"};
  app.name("ohmic-probe");
  app.require_subcommand(1);

  double eta = 0.1, s = 1.0, theta = 0.0;
  double tau_min = 0.0, tau_max = 10.0;
  int points = 101;
  bool log = false;
  std::optional<double> omega_c, time, temperature;

  // curve
  Common curve_c;
  auto* curve = app.add_subcommand("curve", "Q(tau) and gamma(tau) along a time grid");
  curve->add_option("--eta", eta)->capture_default_str();
  curve->add_option("--s", s)->capture_default_str();
  curve->add_option("--theta", theta)->capture_default_str();
  curve->add_option("--tau-min", tau_min)->capture_default_str();
  curve->add_option("--tau-max", tau_max)->capture_default_str();
  curve->add_option("--points", points)->capture_default_str();
  curve->add_flag("--log", log, "Logarithmic grid spacing");
  curve->add_option("--omega-c", omega_c, "Dimensionful mode: cutoff frequency");
  curve->add_option("--temperature", temperature,
                    "Dimensionful mode: temperature (grid then runs over t = tau/omega_c)");
  add_common(curve, curve_c, "csv");

  // optimum
  Common opt_c;
  auto* optimum = app.add_subcommand("optimum", "Optimal measurement time and QSNR");
  optimum->add_option("--eta", eta)->capture_default_str();
  optimum->add_option("--s", s)->capture_default_str();
  optimum->add_option("--theta", theta)->capture_default_str();
  optimum->add_option("--omega-c", omega_c, "Dimensionful mode: cutoff frequency");
  optimum->add_option("--temperature", temperature, "Dimensionful mode: temperature");
  add_common(optimum, opt_c, "json");

  // sweep
  Common sweep_c;
  std::string vary = "eta";
  double grid_min = 0.01, grid_max = 1.0;
  auto* sweep = app.add_subcommand("sweep", "Optima (or a Q curve) along one parameter");
  sweep->add_option("--vary", vary, "eta, s, theta or tau")->capture_default_str();
  sweep->add_option("--min", grid_min)->capture_default_str();
  sweep->add_option("--max", grid_max)->capture_default_str();
  sweep->add_option("--points", points)->capture_default_str();
  sweep->add_flag("--log", log);
  sweep->add_option("--eta", eta)->capture_default_str();
  sweep->add_option("--s", s)->capture_default_str();
  sweep->add_option("--theta", theta)->capture_default_str();
  add_common(sweep, sweep_c, "csv");

  // enhancement
  Common enh_c;
  double eta_min = 0.01, eta_max = 1.0;
  auto* enhancement = app.add_subcommand("enhancement", "High-temperature enhancement R(eta)");
  enhancement->add_option("--s", s)->capture_default_str();
  enhancement->add_option("--eta-min", eta_min)->capture_default_str();
  enhancement->add_option("--eta-max", eta_max)->capture_default_str();
  enhancement->add_option("--points", points)->capture_default_str();
  enhancement->add_flag("--log", log);
  add_common(enhancement, enh_c, "csv");

  // critical-eta
  Common crit_c;
  double s_min = 0.3, s_max = 3.0;
  auto* critical = app.add_subcommand("critical-eta", "Critical coupling eta_c(s) where R = 1");
  critical->add_option("--s-min", s_min)->capture_default_str();
  critical->add_option("--s-max", s_max)->capture_default_str();
  critical->add_option("--points", points)->capture_default_str();
  critical->add_flag("--log", log);
  add_common(critical, crit_c, "csv");

  // ramsey
  Common ram_c;
  double shots = 1e4, trials = 200, seed = 42;
  std::optional<double> tau;
  auto* ramsey = app.add_subcommand("ramsey", "Monte Carlo estimate of omega_c vs the CRB");
  ramsey->add_option("--eta", eta);
  ramsey->add_option("--s", s);
  ramsey->add_option("--theta", theta);
  ramsey->add_option("--tau", tau, "Scaled measurement time (default: tau_opt)");
  ramsey->add_option("--omega-c", omega_c, "True cutoff frequency (default 1)");
  ramsey->add_option("--time", time, "Measurement time (default: t_opt)");
  ramsey->add_option("--temperature", temperature, "Temperature (default: theta * omega_c)");
  ramsey->add_option("--shots", shots)->capture_default_str();
  ramsey->add_option("--trials", trials)->capture_default_str();
  ramsey->add_option("--seed", seed)->capture_default_str();
  add_common(ramsey, ram_c, "json");

  // figure
  Common fig_c;
  std::string figure_id;
  auto* figure = app.add_subcommand("figure", "Dataset behind one figure panel");
  figure->add_option("id", figure_id, "Panel id")->required();
  add_common(figure, fig_c, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  // The ramsey defaults differ from the other subcommands.
  if (ramsey->parsed()) {
    if (ramsey->count("--eta") == 0) eta = 1.0;
  }

  try {
    if (curve->parsed()) {
      const Grid grid{tau_min, tau_max, points, spacing_of(log)};
      if (omega_c || temperature) {
        const OhmicSpectrum spec(eta, s, omega_c.value_or(1.0));
        const double T = temperature.value_or(theta * spec.omega_c);
        const Grid t_grid{grid.min / spec.omega_c, grid.max / spec.omega_c, points,
                          grid.spacing};
        return emit_dataset(curve_c, cmd_curve_dimensionful(spec, T, t_grid, curve_c.quad()));
      }
      return emit_dataset(curve_c, cmd_curve(eta, s, theta, grid, curve_c.quad()));
    }

    if (optimum->parsed()) {
      const double w = omega_c.value_or(1.0);
      if (temperature) theta = *temperature / w;
      const auto r = cmd_optimum(eta, s, theta, opt_c.quad());
      json j = to_json(r);
      j["eta"] = eta;
      j["s"] = s;
      j["theta"] = theta;
      if (omega_c) {
        j["omega_c"] = w;
        j["t_opt"] = r.tau_opt / w;
      }
      if (opt_c.format == "json") {
        emit(opt_c, j.dump(2) + "\n");
        return 0;
      }
      Dataset ds;
      ds.name = "optimum";
      ds.meta = {{"method", std::string(to_string(r.method))}};
      ds.columns = {"eta", "s", "theta", "tau_opt", "q_opt", "gamma_opt", "short_time_regime"};
      ds.rows.push_back({{eta, s, theta, r.tau_opt, r.q_opt, r.gamma_opt,
                          r.short_time_regime ? 1.0 : 0.0},
                         ""});
      return emit_dataset(opt_c, ds);
    }

    if (sweep->parsed()) {
      SweepSpec spec;
      spec.vary = parse_sweep_param(vary);
      spec.grid = Grid{grid_min, grid_max, points, spacing_of(log)};
      spec.eta = eta;
      spec.s = s;
      spec.theta = theta;
      return emit_dataset(sweep_c, cmd_sweep(spec, sweep_c.quad()));
    }

    if (enhancement->parsed()) {
      const Grid grid{eta_min, eta_max, points, spacing_of(log)};
      return emit_dataset(enh_c, cmd_enhancement({s}, grid, enh_c.quad()));
    }

    if (critical->parsed()) {
      const Grid grid{s_min, s_max, points, spacing_of(log)};
      return emit_dataset(crit_c, cmd_critical_eta(grid, crit_c.quad()));
    }

    if (ramsey->parsed()) {
      const auto quad = ram_c.quad();
      RamseyConfig cfg;
      cfg.spec = OhmicSpectrum(eta, s, omega_c.value_or(1.0));
      const double w = cfg.spec.omega_c;
      cfg.temperature = temperature.value_or(theta * w);
      if (time) {
        cfg.measure_time = *time;
      } else if (tau) {
        cfg.measure_time = *tau / w;
      } else {
        cfg.measure_time = find_optimum(eta, s, cfg.temperature / w, quad).tau_opt / w;
      }
      cfg.shots = as_count(shots, "--shots");
      cfg.trials = as_count(trials, "--trials");
      cfg.seed = as_count(seed, "--seed");
      try {
        cfg.validate();
      } catch (const DomainError& e) {
        throw UsageError(e.what());
      }
      const auto rep = cmd_ramsey(cfg, quad);
      json j = to_json(rep);
      j["omega_c"] = w;
      j["measure_time"] = cfg.measure_time;
      j["temperature"] = cfg.temperature;
      j["shots"] = cfg.shots;
      j["trials"] = cfg.trials;
      j["seed"] = cfg.seed;
      if (ram_c.format == "json") {
        emit(ram_c, j.dump(2) + "\n");
      } else {
        Dataset ds;
        ds.name = "ramsey";
        ds.meta = {{"omega_c", meta_value(w)},
                   {"measure_time", meta_value(cfg.measure_time)},
                   {"temperature", meta_value(cfg.temperature)},
                   {"shots", std::to_string(cfg.shots)},
                   {"trials", std::to_string(cfg.trials)},
                   {"seed", std::to_string(cfg.seed)}};
        ds.columns = {"mean", "empirical_variance", "mse", "crb", "ratio", "failures", "valid"};
        ds.rows.push_back({{rep.mean, rep.empirical_variance, rep.mse, rep.crb, rep.ratio,
                            static_cast<double>(rep.failures), rep.valid ? 1.0 : 0.0},
                           ""});
        emit(ram_c, to_csv(ds));
      }
      if (!rep.valid) {
        std::cerr << "ohmic-probe: report invalid (" << rep.failures << " of " << cfg.trials
                  << " trials failed)\n";
        return kExitNumerical;
      }
      return 0;
    }

    if (figure->parsed()) {
      return emit_dataset(fig_c, cmd_figure(figure_id, fig_c.quad()));
    }
  } catch (const UsageError& e) {
    std::cerr << "ohmic-probe: usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainError& e) {
    // Raised here only by argument validation of user-supplied values.
    std::cerr << "ohmic-probe: invalid argument: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "ohmic-probe: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
