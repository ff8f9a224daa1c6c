// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>

#include "windquad/power_energy.hpp"
#include "windquad/simulate.hpp"
#include "windquad/trajectory.hpp"
#include "windquad/wind_field.hpp"

namespace windquad {

/// Locale-independent decimal formatting, 12 significant digits.
std::string format_number(double v);

extern const char* const kTrajectoryCsvHeader;

/// One row per sample: t, the 16 state components, the 4 controls, total
/// power, cumulative energy, pack current, terminal voltage, and state of
/// charge (26 columns). Written to a temp file and renamed on success.
void write_trajectory_csv(const Trajectory& traj, const PowerBatteryTrace& trace,
                          const std::filesystem::path& path);

/// t, v_x_mps, v_y_mps, v_z_mps sampled at the given rate over [t0, tf].
void write_wind_preview_csv(const WindModelParams& wind, double t0, double tf,
                            double sample_rate_hz,
                            const std::filesystem::path& path);

std::string energy_report_text(const EnergyReport& report);
void write_energy_report(const EnergyReport& report,
                         const std::filesystem::path& path);

/// Write-to-temp, rename-on-success; throws IoError with the path on failure.
void write_text_file_atomic(const std::string& contents,
                            const std::filesystem::path& path);

}  // namespace windquad
