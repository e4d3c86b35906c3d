#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "crkfr/config.hpp"
#include "crkfr/scenarios.hpp"
#include "crkfr/solver.hpp"

namespace crkfr {

struct StepRecord {
  double t = 0.0;  // time after the step
  double dt = 0.0;
  int retries = 0;
  double max_alpha = 0.0;
  double min_flux_theta = 1.0;
  double min_element_theta = 1.0;
  double min_dissipation_weight = 1.0;
  int newton_iterations_max = 0;
  std::vector<double> min_constraints;
};

struct RunResult {
  RunConfig config;
  EquationPtr system;
  Grid1D grid;
  SolutionPoints points;
  Field solution;
  double t = 0.0;
  std::vector<StepRecord> steps;
  double wall_seconds = 0.0;
  State initial_total{};
  State final_total{};
  /// max_k |final_total_k - initial_total_k|
  double conservation_drift = 0.0;
  std::vector<std::string> constraint_names;
  /// Minimum over the initial data and every step, per constraint.
  std::vector<double> min_constraint_values;

  double dt_min() const;
  double dt_max() const;
  std::vector<double> node_x() const;
};

struct RunOptions {
  /// Called after every accepted step.
  std::function<void(const Solver&, const StepDiagnostics&)> on_step;
};

/// Solver set up from a config (equation, mesh, tableau, boundaries).
Solver make_solver(const RunConfig& config);
Solver make_solver(const RunConfig& config, EquationPtr system);

/// Time loop to t_final; the last step is clipped to land on t_final.
/// Dispatches to two_pass_driver when guess_strategy asks for it.
RunResult run(const RunConfig& config, const RunOptions& options = {});

/// Solves the source-free problem in lockstep and seeds every implicit solve
/// of the full problem with the thresholded homogeneous solution of the
/// same step.
RunResult two_pass_driver(const RunConfig& config, const RunOptions& options = {});

/// N = 0 run of the same scheme on `cells` cells. Unconstrained systems run
/// with the limiter off; systems with admissibility constraints use the
/// pure low-order mode, which is positivity preserving.
RunResult reference_fv_solve(const RunConfig& config, int cells);

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Norms of u_h - exact for component `var`, integrated element-wise with
/// N + 2 Gauss points.
ErrorNorms error_norms(const Field& u, const Grid1D& grid, const SolutionPoints& points,
                       const std::function<State(double)>& exact, int var = 0);

struct ConvergenceRow {
  int n_elements = 0;
  double h = 0.0;
  double error = 0.0;
  /// log2(previous error / error); NaN on the first row or when exact.
  double order = std::numeric_limits<double>::quiet_NaN();
  bool exact = false;
};

/// L2 error of variable 0 against the scenario's exact solution on each
/// mesh (each a refinement by 2 of the previous one).
std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes);

/// Value of the piecewise polynomial at x.
State evaluate(const Field& u, const Grid1D& grid, const SolutionPoints& points, double x);

/// Midpoint-rule L1 distance of component `var` between a run and a
/// piecewise-constant reference, summed over the reference cells.
double l1_distance_to_reference(const RunResult& run, const RunResult& reference, int var = 0);

/// Rightmost x where component `var` crosses `level`, linearly
/// interpolated between neighbouring solution points; NaN if none.
double crossing_location(const RunResult& run, int var, double level);

}  // namespace crkfr
