// SPDX-License-Identifier: Apache-2.0
#include "windquad/cli.hpp"

#include <CLI11.hpp>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "windquad/config.hpp"
#include "windquad/errors.hpp"
#include "windquad/io.hpp"
#include "windquad/ocp.hpp"
#include "windquad/simulate.hpp"

namespace windquad {

namespace {

struct CommonOptions {
  std::string config_path;
  std::string wind_switch;  // "", "on", "off"
  int grid = 0;             // 0 = keep config value
  double tol = 0.0;         // 0 = keep config value
  std::string out_dir;
  bool seedless = false;  // reserved; runs are fully deterministic already
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "configuration file path");
  cmd->add_option("--wind", opt.wind_switch, "enable or disable wind")
      ->check(CLI::IsMember({"on", "off"}));
  cmd->add_option("--grid", opt.grid, "collocation intervals");
  cmd->add_option("--tol", opt.tol, "solver equality/inequality tolerance");
  cmd->add_option("--out", opt.out_dir, "output directory");
  cmd->add_flag("--seedless", opt.seedless,
                "reserved no-op; output is deterministic by default");
}

RunConfig resolve_config(const CommonOptions& opt) {
  RunConfig cfg = opt.config_path.empty()
                      ? default_config()
                      : load_config(opt.config_path, &std::cerr);
  if (opt.wind_switch == "on") cfg.wind_enabled = true;
  if (opt.wind_switch == "off") cfg.wind_enabled = false;
  if (opt.grid != 0) cfg.grid_intervals = opt.grid;
  if (opt.tol != 0.0) {
    cfg.solver.eq_tol = opt.tol;
    cfg.solver.ineq_tol = opt.tol;
  }
  if (!opt.out_dir.empty()) cfg.outputs.directory = opt.out_dir;
  validate_config(cfg);
  return cfg;
}

std::filesystem::path ensure_out_dir(const RunConfig& cfg) {
  std::error_code ec;
  std::filesystem::create_directories(cfg.outputs.directory, ec);
  if (ec)
    throw IoError("cannot create output directory: " +
                  cfg.outputs.directory.string());
  return cfg.outputs.directory;
}

SolveResult solve_mission(const RunConfig& cfg) {
  const CollocationGrid grid =
      CollocationGrid::make(cfg.mission, cfg.grid_intervals);
  TranscribedOcp ocp;
  try {
    ocp = transcribe(cfg.mission, grid, cfg.vehicle, active_wind(cfg));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  SolverSettings settings = cfg.solver;
  settings.log = &std::cerr;
  const SolveResult sr =
      solve_transcribed(ocp, initial_guess(cfg.mission, grid), settings);
  if (sr.status != SolveStatus::kConverged) {
    throw SolverError(std::string("solver stopped with status ") +
                      to_string(sr.status));
  }
  return sr;
}

std::string solve_summary(const RunConfig& cfg, const SolveResult& sr,
                          double energy) {
  std::ostringstream os;
  os << "# windquad plan report\n";
  os << "solver.status = " << to_string(sr.status) << "\n";
  os << "solver.outer_iterations = " << sr.history.size() << "\n";
  os << "solver.inner_iterations = " << sr.kkt.iterations << "\n";
  os << "solver.kkt.stationarity = " << format_number(sr.kkt.stationarity) << "\n";
  os << "solver.kkt.eq_violation = " << format_number(sr.kkt.eq_violation) << "\n";
  os << "solver.kkt.ineq_violation = " << format_number(sr.kkt.ineq_violation)
     << "\n";
  os << "objective_J = " << format_number(sr.objective) << "\n";
  os << "energy_J = " << format_number(energy) << "\n";
  os << "grid.n_intervals = " << cfg.grid_intervals << "\n";
  os << "wind.enabled = " << (cfg.wind_enabled ? "true" : "false") << "\n";
  return os.str();
}

int cmd_plan(const CommonOptions& opt) {
  const RunConfig cfg = resolve_config(opt);
  const auto out = ensure_out_dir(cfg);
  const SolveResult sr = solve_mission(cfg);
  const auto trace = power_battery_trace(sr.trajectory, cfg.vehicle.efficiency,
                                         cfg.vehicle.motor, cfg.vehicle.battery);
  const double energy =
      trajectory_energy(sr.trajectory, cfg.vehicle.efficiency, cfg.vehicle.motor);
  write_trajectory_csv(sr.trajectory, trace, out / "plan_trajectory.csv");
  write_text_file_atomic(solve_summary(cfg, sr, energy), out / "plan_report.txt");
  std::cout << "plan: energy " << format_number(energy) << " J, trajectory in "
            << (out / "plan_trajectory.csv").string() << "\n";
  return 0;
}

int cmd_simulate(const CommonOptions& opt) {
  const RunConfig cfg = resolve_config(opt);
  const auto out = ensure_out_dir(cfg);

  const DisturbanceFn wind_fn =
      cfg.wind_enabled
          ? DisturbanceFn([w = cfg.wind](double t) { return wind_disturbance(t, w); })
          : DisturbanceFn([](double) { return Eigen::Vector3d::Zero(); });
  const double dt_ctrl = 0.01;
  const ControlLaw law = [&cfg, dt_ctrl](double t, const State& s) {
    return baseline_controller(t, s, cfg.mission, cfg.baseline, cfg.vehicle.quad,
                               cfg.vehicle.limits, dt_ctrl);
  };
  const Rollout rollout =
      rk4_rollout(cfg.mission.start, law, wind_fn, cfg.vehicle.quad,
                  cfg.vehicle.limits, cfg.mission.t0, cfg.mission.tf, dt_ctrl);
  const auto trace =
      power_battery_trace(rollout.trajectory, cfg.vehicle.efficiency,
                          cfg.vehicle.motor, cfg.vehicle.battery);
  write_trajectory_csv(rollout.trajectory, trace,
                       out / "baseline_trajectory.csv");
  const double energy = trajectory_energy(
      rollout.trajectory, cfg.vehicle.efficiency, cfg.vehicle.motor);
  std::cout << "simulate: baseline energy " << format_number(energy)
            << " J, trajectory in "
            << (out / "baseline_trajectory.csv").string() << "\n";
  return 0;
}

int cmd_compare(const CommonOptions& opt) {
  const RunConfig cfg = resolve_config(opt);
  const auto out = ensure_out_dir(cfg);
  const CollocationGrid grid =
      CollocationGrid::make(cfg.mission, cfg.grid_intervals);
  SolverSettings settings = cfg.solver;
  settings.log = &std::cerr;
  EnergyReport report;
  try {
    report = compare_energy(cfg.mission, cfg.vehicle, active_wind(cfg), grid,
                            settings, cfg.baseline);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  const auto opt_trace =
      power_battery_trace(report.optimal_trajectory, cfg.vehicle.efficiency,
                          cfg.vehicle.motor, cfg.vehicle.battery);
  const auto base_trace =
      power_battery_trace(report.baseline_trajectory, cfg.vehicle.efficiency,
                          cfg.vehicle.motor, cfg.vehicle.battery);
  write_trajectory_csv(report.optimal_trajectory, opt_trace,
                       out / "optimal_trajectory.csv");
  write_trajectory_csv(report.baseline_trajectory, base_trace,
                       out / "baseline_trajectory.csv");
  write_energy_report(report, out / "energy_report.txt");
  std::cout << "compare: optimal " << format_number(report.e_optimal_J)
            << " J vs baseline " << format_number(report.e_baseline_J)
            << " J (savings " << format_number(report.savings_pct) << "%)\n";
  return 0;
}

int cmd_wind_preview(const CommonOptions& opt) {
  const RunConfig cfg = resolve_config(opt);
  const auto out = ensure_out_dir(cfg);
  write_wind_preview_csv(cfg.wind, cfg.mission.t0, cfg.mission.tf,
                         cfg.outputs.sample_rate_hz, out / "wind_preview.csv");
  std::cout << "wind-preview: samples in "
            << (out / "wind_preview.csv").string() << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"minimum-energy quadrotor trajectory planning under wind"};
  app.require_subcommand(1);

  CommonOptions opt;
  CLI::App* plan = app.add_subcommand(
      "plan", "solve the optimal control problem and write the trajectory");
  CLI::App* simulate =
      app.add_subcommand("simulate", "roll out the baseline tracking controller");
  CLI::App* compare = app.add_subcommand(
      "compare", "plan, simulate, and report the energy comparison");
  CLI::App* wind_preview =
      app.add_subcommand("wind-preview", "sample the wind model to CSV");
  for (CLI::App* cmd : {plan, simulate, compare, wind_preview})
    add_common(cmd, opt);

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.push_back("windquad");
  for (const auto& a : args) argv_storage.push_back(a);
  std::vector<const char*> argv;
  for (const auto& a : argv_storage) argv.push_back(a.c_str());

  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (plan->parsed()) return cmd_plan(opt);
    if (simulate->parsed()) return cmd_simulate(opt);
    if (compare->parsed()) return cmd_compare(opt);
    if (wind_preview->parsed()) return cmd_wind_preview(opt);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SolverError& e) {
    std::cerr << "solver error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace windquad
