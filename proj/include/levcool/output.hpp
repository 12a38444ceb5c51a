#pragma once

#include <string>
#include <vector>

#include "levcool/optics.hpp"
#include "levcool/sweep.hpp"

namespace levcool {

// Header: axis keys, n_1x, n_2x, n_1z, n_2z, stable, margin,
// dark_residual_x, dark_residual_z, error. Absent values are blank.
std::string emit_csv(const std::vector<RunRecord>& records, const std::vector<std::string>& axis_names);

// Line plot for one axis, one heatmap panel per populated phonon column for two.
std::string emit_svg(const std::vector<RunRecord>& records, const std::vector<SweepAxis>& axes);

std::string emit_force_csv(const std::vector<ForceScanRow>& rows);
std::string emit_force_svg(const std::vector<ForceScanRow>& rows);

// Throws IoError naming the path on failure.
void write_file(const std::string& path, const std::string& contents);

}  // namespace levcool
