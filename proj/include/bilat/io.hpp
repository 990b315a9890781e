#pragma once

// CSV and JSON exporters. CSV files carry a header row and floats printed
// with 17 significant digits; JSON documents keep alphabetically ordered
// keys, so identical runs produce byte-identical files.

#include <nlohmann/json.hpp>
#include <optional>
#include <string>

#include "bilat/effort.hpp"
#include "bilat/hyperbolic.hpp"
#include "bilat/kernel_field.hpp"
#include "bilat/simulate.hpp"

namespace bilat {

std::string format_double(double v);  // %.17g

void write_text_file(const std::string& path, const std::string& content);

/// Rows x, xi, K over the hourglass nodes (row-major in x then xi).
void write_kernel_csv(const std::string& path, const HourglassField& field);

/// Columns xi, <name>... for a set of boundary gains on one grid.
void write_gains_csv(const std::string& path,
                     const std::vector<std::pair<std::string, const GainFunction*>>& gains);

nlohmann::json kernel_json(const HourglassField& field, KernelProvenance provenance);

/// Long-format rows t, x, field, value; steps thinned by `stride` (the final
/// step is always written).
void write_trajectory_csv(const std::string& path, const Trajectory& traj, int stride = 1);

nlohmann::json trajectory_summary_json(const Trajectory& traj, const std::string& config_text,
                                       const TargetCheck* check = nullptr);

/// Columns delta, J1_literal, J1_shifted, J2.
void write_effort_csv(const std::string& path, const EffortCurve& curve);
EffortCurve load_effort_curve(const std::string& path);

nlohmann::json effort_json(const EffortCurve& curve);

std::string provenance_name(KernelProvenance p);

}  // namespace bilat
