// SPDX-License-Identifier: Apache-2.0
#include "windquad/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "windquad/errors.hpp"

namespace windquad {

std::string format_number(double v) {
  // Shortest round-trip representation: locale-independent and exact.
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

const char* const kTrajectoryCsvHeader =
    "t,x,xdot,y,ydot,z,zdot,phi,phidot,theta,thetadot,psi,psidot,"
    "w1,w2,w3,w4,alpha1,alpha2,alpha3,alpha4,"
    "P_total_W,E_cum_J,i_bat_A,v_bat_V,soc_pct";

void write_text_file_atomic(const std::string& contents,
                            const std::filesystem::path& path) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + tmp.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw IoError("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot move " + tmp.string() + " to " + path.string());
  }
}

void write_trajectory_csv(const Trajectory& traj, const PowerBatteryTrace& trace,
                          const std::filesystem::path& path) {
  if (trace.battery.size() != traj.size() ||
      size_t(trace.power_W.size()) != traj.size() ||
      size_t(trace.energy_cum_J.size()) != traj.size()) {
    throw std::invalid_argument("trajectory and trace lengths disagree");
  }
  std::ostringstream os;
  os << kTrajectoryCsvHeader << '\n';
  for (size_t k = 0; k < traj.size(); ++k) {
    os << format_number(traj[k].t);
    for (int i = 0; i < 16; ++i) os << ',' << format_number(traj[k].state[i]);
    for (int i = 0; i < 4; ++i) os << ',' << format_number(traj[k].control[i]);
    os << ',' << format_number(trace.power_W[k]);
    os << ',' << format_number(trace.energy_cum_J[k]);
    os << ',' << format_number(trace.battery[k].current);
    os << ',' << format_number(trace.battery[k].state.terminal_voltage);
    os << ',' << format_number(trace.battery[k].state.soc);
    os << '\n';
  }
  write_text_file_atomic(os.str(), path);
}

void write_wind_preview_csv(const WindModelParams& wind, double t0, double tf,
                            double sample_rate_hz,
                            const std::filesystem::path& path) {
  if (!(sample_rate_hz > 0.0))
    throw std::invalid_argument("sample_rate_hz must be positive");
  if (!(tf > t0)) throw std::invalid_argument("tf must exceed t0");
  std::ostringstream os;
  os << "t,v_x_mps,v_y_mps,v_z_mps\n";
  const long n = std::lround((tf - t0) * sample_rate_hz);
  for (long k = 0; k <= n; ++k) {
    const double t = t0 + double(k) / sample_rate_hz;
    const Eigen::Vector3d v = wind_vector(t, wind);
    os << format_number(t) << ',' << format_number(v[0]) << ','
       << format_number(v[1]) << ',' << format_number(v[2]) << '\n';
  }
  write_text_file_atomic(os.str(), path);
}

std::string energy_report_text(const EnergyReport& r) {
  std::ostringstream os;
  os << "# windquad energy comparison report\n";
  os << "# savings_percent is measured relative to the larger (baseline) energy.\n";
  os << "# The baseline tracker is pure feedback: it receives no wind feedforward.\n";
  os << "wind.enabled = " << (r.wind_enabled ? "true" : "false") << "\n";
  os << "optimal.energy_J = " << format_number(r.e_optimal_J) << "\n";
  os << "baseline.energy_J = " << format_number(r.e_baseline_J) << "\n";
  os << "savings_percent = " << format_number(r.savings_pct) << "\n";
  os << "optimal.final_position_error_m = ["
     << format_number(r.optimal_final_position_error[0]) << ", "
     << format_number(r.optimal_final_position_error[1]) << ", "
     << format_number(r.optimal_final_position_error[2]) << "]\n";
  os << "optimal.final_state_error_max = "
     << format_number(r.optimal_final_state_error) << "\n";
  os << "baseline.final_position_error_m = ["
     << format_number(r.baseline_final_position_error[0]) << ", "
     << format_number(r.baseline_final_position_error[1]) << ", "
     << format_number(r.baseline_final_position_error[2]) << "]\n";
  os << "baseline.final_state_error_max = "
     << format_number(r.baseline_final_state_error) << "\n";
  os << "baseline.final_error_threshold_m = "
     << format_number(r.baseline_error_threshold_m) << "\n";
  os << "baseline.final_error_exceeded = "
     << (r.baseline_error_exceeded ? "true" : "false") << "\n";
  os << "baseline.rotor_saturations = " << r.baseline_saturations << "\n";
  os << "optimal.soc_final_pct = " << format_number(r.optimal_soc_final_pct)
     << "\n";
  os << "baseline.soc_final_pct = " << format_number(r.baseline_soc_final_pct)
     << "\n";
  os << "solver.status = " << to_string(r.solver_status) << "\n";
  os << "solver.outer_iterations = " << r.solver_outer_iterations << "\n";
  os << "solver.inner_iterations = " << r.solver_kkt.iterations << "\n";
  os << "solver.kkt.stationarity = " << format_number(r.solver_kkt.stationarity)
     << "\n";
  os << "solver.kkt.eq_violation = " << format_number(r.solver_kkt.eq_violation)
     << "\n";
  os << "solver.kkt.ineq_violation = "
     << format_number(r.solver_kkt.ineq_violation) << "\n";
  return os.str();
}

void write_energy_report(const EnergyReport& report,
                         const std::filesystem::path& path) {
  write_text_file_atomic(energy_report_text(report), path);
}

}  // namespace windquad
