// SPDX-License-Identifier: Apache-2.0
#include "windquad/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "windquad/io.hpp"

namespace windquad {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  double value = 0.0;
  const char* begin = t.data();
  const char* end = t.data() + t.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end)
    throw ConfigError("config key '" + path + "': not a number: '" + t + "'");
  return value;
}

bool parse_bool(const std::string& text, const std::string& path) {
  const std::string t = trim(text);
  if (t == "true" || t == "on" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "off" || t == "0" || t == "no") return false;
  throw ConfigError("config key '" + path + "': not a boolean: '" + t + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.push_back("");
  return out;
}

// Bracketed list "[a, b, c]"; rows separated by ';' give a matrix.
std::vector<std::vector<double>> parse_matrix(const std::string& text,
                                              const std::string& path) {
  std::string t = trim(text);
  if (t.size() < 2 || t.front() != '[' || t.back() != ']')
    throw ConfigError("config key '" + path + "': expected a bracketed list");
  t = t.substr(1, t.size() - 2);
  std::vector<std::vector<double>> rows;
  for (const std::string& row : split(t, ';')) {
    std::vector<double> values;
    for (const std::string& cell : split(row, ',')) {
      if (trim(cell).empty()) continue;
      values.push_back(parse_double(cell, path));
    }
    rows.push_back(std::move(values));
  }
  if (rows.empty()) rows.push_back({});
  return rows;
}

std::vector<double> parse_list(const std::string& text, const std::string& path,
                               size_t expected) {
  const auto rows = parse_matrix(text, path);
  if (rows.size() != 1 || rows[0].size() != expected)
    throw ConfigError("config key '" + path + "': expected a list of " +
                      std::to_string(expected) + " numbers");
  return rows[0];
}

class KeyValues {
 public:
  KeyValues(const std::string& text, const std::string& origin) {
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int line_no = 0;
    while (std::getline(stream, line)) {
      ++line_no;
      const std::string t = trim(line);
      if (t.empty() || t[0] == '#' || t[0] == ';') continue;
      if (t.front() == '[') {
        if (t.back() != ']')
          throw ConfigError(origin + ":" + std::to_string(line_no) +
                            ": malformed section header");
        section = trim(t.substr(1, t.size() - 2));
        continue;
      }
      const auto eq = t.find('=');
      if (eq == std::string::npos)
        throw ConfigError(origin + ":" + std::to_string(line_no) +
                          ": expected 'key = value'");
      std::string key = trim(t.substr(0, eq));
      if (key.empty())
        throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
      const std::string path = section.empty() ? key : section + "." + key;
      kv_[path] = trim(t.substr(eq + 1));
    }
  }

  bool has(const std::string& path) const { return kv_.count(path) > 0; }

  template <class T, class Parser>
  void apply(const std::string& path, T& target, const Parser& parser) {
    const auto it = kv_.find(path);
    if (it == kv_.end()) return;
    used_.insert(path);
    target = parser(it->second, path);
    if (log_) {
      (*log_) << "config: " << path << " = " << it->second << " (override)\n";
    }
  }

  void number(const std::string& path, double& target) {
    apply(path, target, parse_double);
  }
  void integer(const std::string& path, int& target) {
    apply(path, target, [](const std::string& s, const std::string& p) {
      const double v = parse_double(s, p);
      if (v != std::floor(v))
        throw ConfigError("config key '" + p + "': expected an integer");
      return int(v);
    });
  }
  void boolean(const std::string& path, bool& target) {
    apply(path, target, parse_bool);
  }
  void text(const std::string& path, std::string& target) {
    apply(path, target,
          [](const std::string& s, const std::string&) { return trim(s); });
  }
  void triple(const std::string& path, std::array<double, 3>& target) {
    apply(path, target, [](const std::string& s, const std::string& p) {
      const auto v = parse_list(s, p, 3);
      return std::array<double, 3>{v[0], v[1], v[2]};
    });
  }
  void matrix(const std::string& path, Eigen::MatrixXd& target) {
    apply(path, target, [](const std::string& s, const std::string& p) {
      const auto rows = parse_matrix(s, p);
      const size_t cols = rows[0].size();
      for (const auto& r : rows)
        if (r.size() != cols)
          throw ConfigError("config key '" + p + "': ragged matrix rows");
      Eigen::MatrixXd m(rows.size(), cols);
      for (size_t i = 0; i < rows.size(); ++i)
        for (size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
      return m;
    });
  }

  void set_log(std::ostream* log) { log_ = log; }

  void reject_unknown() const {
    std::vector<std::string> unknown;
    for (const auto& [path, value] : kv_) {
      if (!used_.count(path)) unknown.push_back(path);
    }
    if (!unknown.empty()) {
      std::string msg = "unknown config key(s):";
      for (const auto& k : unknown) msg += " '" + k + "'";
      throw ConfigError(msg);
    }
  }

 private:
  std::map<std::string, std::string> kv_;
  std::set<std::string> used_;
  std::ostream* log_ = nullptr;
};

void load_wind_axis(KeyValues& kv, const std::string& section,
                    WindAxisParams& axis) {
  kv.number(section + ".v0", axis.mean);
  std::array<double, 3> amp{axis.harmonics[0].amplitude,
                            axis.harmonics[1].amplitude,
                            axis.harmonics[2].amplitude};
  std::array<double, 3> freq{axis.harmonics[0].frequency,
                             axis.harmonics[1].frequency,
                             axis.harmonics[2].frequency};
  kv.triple(section + ".amplitudes", amp);
  kv.triple(section + ".frequencies", freq);
  for (int k = 0; k < 3; ++k) {
    axis.harmonics[k].amplitude = amp[k];
    axis.harmonics[k].frequency = freq[k];
  }
  kv.number(section + ".v_gmax", axis.gust_peak);
  kv.number(section + ".t_g", axis.gust_period);
}

}  // namespace

RunConfig default_config() {
  RunConfig c;

  c.vehicle.quad.mass = 1.3;
  c.vehicle.quad.arm_length = 0.175;
  c.vehicle.quad.inertia_x = 0.081;
  c.vehicle.quad.inertia_y = 0.081;
  c.vehicle.quad.inertia_z = 0.142;
  c.vehicle.quad.rotor_inertia = 4.1904e-5;
  c.vehicle.quad.thrust_coeff = 3.8305e-6;
  c.vehicle.quad.drag_coeff = 2.2518e-8;
  c.vehicle.quad.gravity = 9.81;

  // The milli-scale datasheet value 0.0104e-3 N m/A yields kiloampere hover
  // currents; the ampere-scale default keeps the battery trace physical. Any
  // positive value can be configured.
  c.vehicle.motor.resistance = 0.2;
  c.vehicle.motor.torque_constant = 0.0104;
  c.vehicle.motor.speed_constant = 96.342;
  c.vehicle.motor.rotor_inertia = c.vehicle.quad.rotor_inertia;
  c.vehicle.motor.drag_coeff = c.vehicle.quad.drag_coeff;

  c.vehicle.battery.capacity = 1.55;
  c.vehicle.battery.resistance = 0.02;
  c.vehicle.battery.full_voltage = 1.24;
  c.vehicle.battery.bias_voltage = 2.92e-3;
  c.vehicle.battery.exp_voltage = 0.156;
  c.vehicle.battery.exp_capacity = 2.35;

  c.vehicle.efficiency = EfficiencySpec{};

  c.vehicle.limits = Limits::derive(1200.0, 4000.0, 0.5, M_PI / 2.0,
                                    c.vehicle.quad.thrust_coeff);

  const double wh = hover_speed(c.vehicle.quad);
  c.mission.start = State::Zero();
  c.mission.goal = State::Zero();
  c.mission.goal[idx::kX] = 6.0;
  c.mission.goal[idx::kY] = 7.0;
  c.mission.goal[idx::kZ] = 8.0;
  for (int j = 0; j < 4; ++j) {
    c.mission.start[idx::kW1 + j] = wh;
    c.mission.goal[idx::kW1 + j] = wh;
  }
  c.mission.t0 = 0.0;
  c.mission.tf = 10.0;

  c.wind_enabled = true;
  c.wind.x = WindAxisParams{1.0,
                            {{{0.5, 0.10}, {0.7, 0.25}, {1.0, 0.30}}},
                            0.2,
                            10.0};
  c.wind.y = WindAxisParams{0.5,
                            {{{0.6, -0.05}, {1.0, -0.10}, {1.5, -0.30}}},
                            0.2,
                            10.0};
  c.wind.accel_gain = 1.0;

  c.grid_intervals = 100;
  c.solver = SolverSettings{};
  c.baseline = BaselineGains{};
  c.outputs = OutputSettings{};
  return c;
}

RunConfig load_config_text(const std::string& text, std::ostream* override_log,
                           const std::string& origin) {
  KeyValues kv(text, origin);
  kv.set_log(override_log);
  RunConfig c = default_config();

  kv.number("vehicle.m", c.vehicle.quad.mass);
  kv.number("vehicle.l", c.vehicle.quad.arm_length);
  kv.number("vehicle.ix", c.vehicle.quad.inertia_x);
  kv.number("vehicle.iy", c.vehicle.quad.inertia_y);
  kv.number("vehicle.iz", c.vehicle.quad.inertia_z);
  kv.number("vehicle.ir", c.vehicle.quad.rotor_inertia);
  kv.number("vehicle.kappa_b", c.vehicle.quad.thrust_coeff);
  kv.number("vehicle.kappa", c.vehicle.quad.drag_coeff);
  kv.number("vehicle.g", c.vehicle.quad.gravity);
  c.vehicle.motor.rotor_inertia = c.vehicle.quad.rotor_inertia;
  c.vehicle.motor.drag_coeff = c.vehicle.quad.drag_coeff;

  kv.number("motor.r", c.vehicle.motor.resistance);
  kv.number("motor.kt", c.vehicle.motor.torque_constant);
  kv.number("motor.kv", c.vehicle.motor.speed_constant);

  kv.number("battery.q_bat", c.vehicle.battery.capacity);
  kv.number("battery.r_bat", c.vehicle.battery.resistance);
  kv.number("battery.e0", c.vehicle.battery.full_voltage);
  kv.number("battery.k", c.vehicle.battery.bias_voltage);
  kv.number("battery.c1", c.vehicle.battery.exp_voltage);
  kv.number("battery.c2", c.vehicle.battery.exp_capacity);

  std::string mode = c.vehicle.efficiency.mode == EfficiencyMode::kConstant
                         ? "constant"
                         : "polynomial";
  kv.text("efficiency.mode", mode);
  if (mode == "constant") {
    c.vehicle.efficiency.mode = EfficiencyMode::kConstant;
  } else if (mode == "polynomial") {
    c.vehicle.efficiency.mode = EfficiencyMode::kPolynomial;
  } else {
    throw ConfigError("config key 'efficiency.mode': expected constant or polynomial");
  }
  kv.number("efficiency.constant", c.vehicle.efficiency.constant_value);
  kv.number("efficiency.clamp_floor", c.vehicle.efficiency.clamp_floor);
  kv.matrix("efficiency.poly_coeffs", c.vehicle.efficiency.poly_coeffs);

  double omega_max = c.vehicle.limits.omega_max;
  double alpha_max = c.vehicle.limits.alpha_max;
  double angle_max = c.vehicle.limits.angle_max;
  double u_max = c.vehicle.limits.torque_max;
  kv.number("limits.omega_max", omega_max);
  kv.number("limits.alpha_max", alpha_max);
  kv.number("limits.angle_max", angle_max);
  kv.number("limits.u_max", u_max);
  try {
    c.vehicle.limits = Limits::derive(omega_max, alpha_max, u_max, angle_max,
                                      c.vehicle.quad.thrust_coeff);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'limits': ") + e.what());
  }

  kv.number("mission.t0", c.mission.t0);
  kv.number("mission.tf", c.mission.tf);
  std::array<double, 3> p0{c.mission.start[idx::kX], c.mission.start[idx::kY],
                           c.mission.start[idx::kZ]};
  std::array<double, 3> pf{c.mission.goal[idx::kX], c.mission.goal[idx::kY],
                           c.mission.goal[idx::kZ]};
  double yaw0 = c.mission.start[idx::kPsi];
  double yawf = c.mission.goal[idx::kPsi];
  kv.triple("mission.x0.position", p0);
  kv.triple("mission.xf.position", pf);
  kv.number("mission.x0.yaw", yaw0);
  kv.number("mission.xf.yaw", yawf);
  c.mission.start[idx::kX] = p0[0];
  c.mission.start[idx::kY] = p0[1];
  c.mission.start[idx::kZ] = p0[2];
  c.mission.goal[idx::kX] = pf[0];
  c.mission.goal[idx::kY] = pf[1];
  c.mission.goal[idx::kZ] = pf[2];
  c.mission.start[idx::kPsi] = yaw0;
  c.mission.goal[idx::kPsi] = yawf;
  // Boundary rotor speeds sit at the exact hover speed of the configured
  // vehicle (hover-to-hover missions).
  const double wh = hover_speed(c.vehicle.quad);
  for (int j = 0; j < 4; ++j) {
    c.mission.start[idx::kW1 + j] = wh;
    c.mission.goal[idx::kW1 + j] = wh;
  }

  kv.boolean("wind.enabled", c.wind_enabled);
  kv.number("wind.gain", c.wind.accel_gain);
  load_wind_axis(kv, "wind.x", c.wind.x);
  load_wind_axis(kv, "wind.y", c.wind.y);

  kv.integer("grid.n_intervals", c.grid_intervals);

  kv.number("solver.eq_tol", c.solver.eq_tol);
  kv.number("solver.ineq_tol", c.solver.ineq_tol);
  kv.integer("solver.max_outer", c.solver.max_outer);
  kv.integer("solver.max_inner", c.solver.max_inner);
  kv.number("solver.penalty_init", c.solver.penalty_init);
  kv.number("solver.penalty_growth", c.solver.penalty_growth);
  kv.number("solver.step_tol", c.solver.step_tol);

  kv.number("baseline.kp_pos", c.baseline.kp_pos);
  kv.number("baseline.kd_pos", c.baseline.kd_pos);
  kv.number("baseline.kp_att", c.baseline.kp_att);
  kv.number("baseline.kd_att", c.baseline.kd_att);

  std::string out_dir = c.outputs.directory.string();
  kv.text("outputs.dir", out_dir);
  c.outputs.directory = out_dir;
  kv.number("outputs.sample_rate_hz", c.outputs.sample_rate_hz);

  kv.reject_unknown();
  validate_config(c);
  return c;
}

RunConfig load_config(const std::filesystem::path& path,
                      std::ostream* override_log) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_config_text(buffer.str(), override_log, path.string());
}

void validate_config(const RunConfig& c) {
  auto positive = [](double v, const char* path) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw ConfigError(std::string("config key '") + path +
                        "' must be strictly positive");
  };

  positive(c.vehicle.quad.mass, "vehicle.m");
  positive(c.vehicle.quad.arm_length, "vehicle.l");
  positive(c.vehicle.quad.inertia_x, "vehicle.ix");
  positive(c.vehicle.quad.inertia_y, "vehicle.iy");
  positive(c.vehicle.quad.inertia_z, "vehicle.iz");
  positive(c.vehicle.quad.rotor_inertia, "vehicle.ir");
  positive(c.vehicle.quad.thrust_coeff, "vehicle.kappa_b");
  positive(c.vehicle.quad.drag_coeff, "vehicle.kappa");
  positive(c.vehicle.quad.gravity, "vehicle.g");
  try {
    validate(c.vehicle.quad);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'vehicle': ") + e.what());
  }

  positive(c.vehicle.motor.resistance, "motor.r");
  positive(c.vehicle.motor.torque_constant, "motor.kt");
  positive(c.vehicle.motor.speed_constant, "motor.kv");

  positive(c.vehicle.battery.capacity, "battery.q_bat");
  if (c.vehicle.battery.resistance < 0.0)
    throw ConfigError("config key 'battery.r_bat' must be nonnegative");

  if (c.vehicle.efficiency.mode == EfficiencyMode::kConstant) {
    const double v = c.vehicle.efficiency.constant_value;
    if (!(v > 0.0 && v <= 1.0))
      throw ConfigError("config key 'efficiency.constant' must lie in (0, 1]");
  }
  positive(c.vehicle.efficiency.clamp_floor, "efficiency.clamp_floor");

  positive(c.vehicle.limits.omega_max, "limits.omega_max");
  positive(c.vehicle.limits.alpha_max, "limits.alpha_max");
  positive(c.vehicle.limits.angle_max, "limits.angle_max");
  positive(c.vehicle.limits.torque_max, "limits.u_max");
  const double expected_tmax = 4.0 * c.vehicle.quad.thrust_coeff *
                               c.vehicle.limits.omega_max *
                               c.vehicle.limits.omega_max;
  if (c.vehicle.limits.thrust_max != expected_tmax)
    throw ConfigError("limits.thrust_max is derived and inconsistent");

  if (!(c.mission.tf > c.mission.t0))
    throw ConfigError("config key 'mission.tf' must exceed 'mission.t0'");
  try {
    validate_state(c.mission.start, c.vehicle.limits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'mission.x0': ") + e.what());
  }
  try {
    validate_state(c.mission.goal, c.vehicle.limits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config section 'mission.xf': ") + e.what());
  }

  for (const auto* axis : {&c.wind.x, &c.wind.y}) {
    const char* path = axis == &c.wind.x ? "wind.x.t_g" : "wind.y.t_g";
    if (!(axis->gust_period > 0.0))
      throw ConfigError(std::string("config key '") + path + "' must be positive");
    for (const auto& h : axis->harmonics) {
      if (!std::isfinite(h.amplitude) || !std::isfinite(h.frequency))
        throw ConfigError("wind harmonics must be finite");
    }
  }

  if (c.grid_intervals < 2)
    throw ConfigError("config key 'grid.n_intervals' must be at least 2");

  positive(c.solver.eq_tol, "solver.eq_tol");
  positive(c.solver.ineq_tol, "solver.ineq_tol");
  positive(c.solver.step_tol, "solver.step_tol");
  positive(c.solver.penalty_init, "solver.penalty_init");
  if (!(c.solver.penalty_growth > 1.0))
    throw ConfigError("config key 'solver.penalty_growth' must exceed 1");
  if (c.solver.max_outer < 1 || c.solver.max_inner < 1)
    throw ConfigError("config keys 'solver.max_outer'/'solver.max_inner' must be positive");

  positive(c.baseline.kp_pos, "baseline.kp_pos");
  positive(c.baseline.kd_pos, "baseline.kd_pos");
  positive(c.baseline.kp_att, "baseline.kp_att");
  positive(c.baseline.kd_att, "baseline.kd_att");
  if (c.baseline.kp_att < 25.0 * c.baseline.kp_pos)
    throw ConfigError(
        "config key 'baseline.kp_att' must be at least 25x 'baseline.kp_pos' "
        "to keep the cascade separated");

  positive(c.outputs.sample_rate_hz, "outputs.sample_rate_hz");
}

std::optional<WindModelParams> active_wind(const RunConfig& cfg) {
  if (!cfg.wind_enabled) return std::nullopt;
  return cfg.wind;
}

namespace {

std::string fmt_list(std::initializer_list<double> values) {
  std::string out = "[";
  bool first = true;
  for (double v : values) {
    if (!first) out += ", ";
    out += format_number(v);
    first = false;
  }
  return out + "]";
}

void write_wind_axis(std::ostream& os, const char* name,
                     const WindAxisParams& axis) {
  os << "[wind." << name << "]\n";
  os << "v0 = " << format_number(axis.mean) << "\n";
  os << "frequencies = "
     << fmt_list({axis.harmonics[0].frequency, axis.harmonics[1].frequency,
                  axis.harmonics[2].frequency})
     << "\n";
  os << "amplitudes = "
     << fmt_list({axis.harmonics[0].amplitude, axis.harmonics[1].amplitude,
                  axis.harmonics[2].amplitude})
     << "\n";
  os << "v_gmax = " << format_number(axis.gust_peak) << "\n";
  os << "t_g = " << format_number(axis.gust_period) << "\n\n";
}

}  // namespace

std::string config_to_text(const RunConfig& c) {
  std::ostringstream os;
  os << "# windquad run configuration\n\n";
  os << "[vehicle]\n";
  os << "m = " << format_number(c.vehicle.quad.mass) << "\n";
  os << "l = " << format_number(c.vehicle.quad.arm_length) << "\n";
  os << "ix = " << format_number(c.vehicle.quad.inertia_x) << "\n";
  os << "iy = " << format_number(c.vehicle.quad.inertia_y) << "\n";
  os << "iz = " << format_number(c.vehicle.quad.inertia_z) << "\n";
  os << "ir = " << format_number(c.vehicle.quad.rotor_inertia) << "\n";
  os << "kappa_b = " << format_number(c.vehicle.quad.thrust_coeff) << "\n";
  os << "kappa = " << format_number(c.vehicle.quad.drag_coeff) << "\n";
  os << "g = " << format_number(c.vehicle.quad.gravity) << "\n\n";

  os << "[motor]\n";
  os << "r = " << format_number(c.vehicle.motor.resistance) << "\n";
  os << "kt = " << format_number(c.vehicle.motor.torque_constant) << "\n";
  os << "kv = " << format_number(c.vehicle.motor.speed_constant) << "\n\n";

  os << "[battery]\n";
  os << "q_bat = " << format_number(c.vehicle.battery.capacity) << "\n";
  os << "r_bat = " << format_number(c.vehicle.battery.resistance) << "\n";
  os << "e0 = " << format_number(c.vehicle.battery.full_voltage) << "\n";
  os << "k = " << format_number(c.vehicle.battery.bias_voltage) << "\n";
  os << "c1 = " << format_number(c.vehicle.battery.exp_voltage) << "\n";
  os << "c2 = " << format_number(c.vehicle.battery.exp_capacity) << "\n\n";

  os << "[efficiency]\n";
  os << "mode = "
     << (c.vehicle.efficiency.mode == EfficiencyMode::kConstant ? "constant"
                                                                : "polynomial")
     << "\n";
  os << "constant = " << format_number(c.vehicle.efficiency.constant_value)
     << "\n";
  os << "clamp_floor = " << format_number(c.vehicle.efficiency.clamp_floor)
     << "\n";
  if (c.vehicle.efficiency.poly_coeffs.size() > 0) {
    os << "poly_coeffs = [";
    for (Eigen::Index i = 0; i < c.vehicle.efficiency.poly_coeffs.rows(); ++i) {
      if (i > 0) os << "; ";
      for (Eigen::Index j = 0; j < c.vehicle.efficiency.poly_coeffs.cols(); ++j) {
        if (j > 0) os << ", ";
        os << format_number(c.vehicle.efficiency.poly_coeffs(i, j));
      }
    }
    os << "]\n";
  }
  os << "\n";

  os << "[limits]\n";
  os << "omega_max = " << format_number(c.vehicle.limits.omega_max) << "\n";
  os << "alpha_max = " << format_number(c.vehicle.limits.alpha_max) << "\n";
  os << "angle_max = " << format_number(c.vehicle.limits.angle_max) << "\n";
  os << "u_max = " << format_number(c.vehicle.limits.torque_max) << "\n\n";

  os << "[mission]\n";
  os << "t0 = " << format_number(c.mission.t0) << "\n";
  os << "tf = " << format_number(c.mission.tf) << "\n";
  os << "x0.position = "
     << fmt_list({c.mission.start[idx::kX], c.mission.start[idx::kY],
                  c.mission.start[idx::kZ]})
     << "\n";
  os << "x0.yaw = " << format_number(c.mission.start[idx::kPsi]) << "\n";
  os << "xf.position = "
     << fmt_list({c.mission.goal[idx::kX], c.mission.goal[idx::kY],
                  c.mission.goal[idx::kZ]})
     << "\n";
  os << "xf.yaw = " << format_number(c.mission.goal[idx::kPsi]) << "\n\n";

  os << "[wind]\n";
  os << "enabled = " << (c.wind_enabled ? "true" : "false") << "\n";
  os << "gain = " << format_number(c.wind.accel_gain) << "\n\n";
  write_wind_axis(os, "x", c.wind.x);
  write_wind_axis(os, "y", c.wind.y);

  os << "[grid]\n";
  os << "n_intervals = " << c.grid_intervals << "\n\n";

  os << "[solver]\n";
  os << "eq_tol = " << format_number(c.solver.eq_tol) << "\n";
  os << "ineq_tol = " << format_number(c.solver.ineq_tol) << "\n";
  os << "max_outer = " << c.solver.max_outer << "\n";
  os << "max_inner = " << c.solver.max_inner << "\n";
  os << "penalty_init = " << format_number(c.solver.penalty_init) << "\n";
  os << "penalty_growth = " << format_number(c.solver.penalty_growth) << "\n";
  os << "step_tol = " << format_number(c.solver.step_tol) << "\n\n";

  os << "[baseline]\n";
  os << "kp_pos = " << format_number(c.baseline.kp_pos) << "\n";
  os << "kd_pos = " << format_number(c.baseline.kd_pos) << "\n";
  os << "kp_att = " << format_number(c.baseline.kp_att) << "\n";
  os << "kd_att = " << format_number(c.baseline.kd_att) << "\n\n";

  os << "[outputs]\n";
  os << "dir = " << c.outputs.directory.string() << "\n";
  os << "sample_rate_hz = " << format_number(c.outputs.sample_rate_hz) << "\n";
  return os.str();
}

void save_config(const RunConfig& cfg, const std::filesystem::path& path) {
  write_text_file_atomic(config_to_text(cfg), path);
}

}  // namespace windquad
