// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>

#include "windquad/errors.hpp"
#include "windquad/ocp.hpp"
#include "windquad/simulate.hpp"

namespace windquad {

struct OutputSettings {
  std::filesystem::path directory = "out";
  double sample_rate_hz = 100.0;
};

struct RunConfig {
  VehicleConfig vehicle;
  MissionSpec mission;
  bool wind_enabled = true;
  WindModelParams wind;
  int grid_intervals = 100;
  SolverSettings solver;
  BaselineGains baseline;
  OutputSettings outputs;
};

/// Built-in defaults: a DJI Phantom 2-class vehicle, its motor/battery
/// coefficients, the two-axis harmonic+gust wind profile, and the stock
/// 10-second climb mission from the origin to (6, 7, 8) m between hover
/// states.
RunConfig default_config();

/// Parses the INI-style key-value file (see README for the full key list) and
/// merges it over default_config(). Unknown keys are rejected; every override
/// is logged to `override_log` when given. Throws ConfigError naming the
/// offending key path.
RunConfig load_config(const std::filesystem::path& path,
                      std::ostream* override_log = nullptr);

/// Same, from an already-read document. `origin` only decorates messages.
RunConfig load_config_text(const std::string& text,
                           std::ostream* override_log = nullptr,
                           const std::string& origin = "<inline>");

/// Writes a file that load_config reads back to a field-for-field equal
/// RunConfig (numbers serialized with round-trip precision).
void save_config(const RunConfig& cfg, const std::filesystem::path& path);
std::string config_to_text(const RunConfig& cfg);

/// Re-checks every invariant; throws ConfigError naming the key path.
void validate_config(const RunConfig& cfg);

std::optional<WindModelParams> active_wind(const RunConfig& cfg);

}  // namespace windquad
