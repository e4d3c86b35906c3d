#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "crkfr/harness.hpp"

namespace crkfr {

/// Header `x,var_0,...,var_{n-1}`, one row per solution point in mesh order.
/// Values use the shortest round-trip representation.
void write_solution_csv(std::ostream& out, const RunResult& result);
void write_solution_csv(const std::string& path, const RunResult& result);

/// {steps, dt_min, dt_max, wall_seconds, conservation_drift,
///  min_constraint_values, ...}
std::string diagnostics_json(const RunResult& result);
void write_diagnostics_json(const std::string& path, const RunResult& result);

/// Columns n_elements,h,error,order,N.
void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows, int degree);

/// Writes the CSV and JSON named by the config into its out_dir (created if
/// needed); returns the two paths.
std::pair<std::string, std::string> write_outputs(const RunResult& result, const std::string& out_dir);

}  // namespace crkfr
