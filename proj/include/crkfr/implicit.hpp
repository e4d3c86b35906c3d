#pragma once

#include "crkfr/state.hpp"

namespace crkfr {

class EquationSystem;

/// Knobs of the pointwise implicit stage solver.
struct ImplicitConfig {
  int max_iterations = 50;
  double residual_tolerance = 1e-10;
  double damping = 1.0;
  /// A Newton update below step_tolerance * max(1, |u|) also counts as
  /// converged. For very stiff sources (gamma * |ds/du| ~ 1e9 and up) the
  /// absolute residual cannot get below round-off times that factor.
  double step_tolerance = 1e-13;
  /// Halvings of a Newton update that would leave the admissible set.
  int max_backtracks = 10;

  bool operator==(const ImplicitConfig&) const = default;
};

struct StageSolveResult {
  State u{};
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

/// One implicit solve u = rhs + gamma * s(t, x, u) at a single point.
struct StageSolveRequest {
  State rhs{};
  double t = 0.0;
  double x = 0.0;
  double gamma = 0.0;
  State guess{};
  /// Stage value preceding the one being solved (u^n for the first stage).
  State previous{};
};

/// Damped Newton on R(u) = u - rhs - gamma s(t, x, u) with Jacobian
/// I - gamma ds/du. Never throws; callers inspect `converged`.
StageSolveResult solve_stage(const EquationSystem& system, const StageSolveRequest& req,
                             const ImplicitConfig& config);

/// Infinity norm of u - rhs - gamma s(t, x, u).
double stage_residual(const EquationSystem& system, const StageSolveRequest& req, const State& u);

/// Arrhenius rate A exp(-T_A / T).
double arrhenius_rate(double temperature, double pre_exponential, double activation_temperature);

/// Reactant density solving rho_y + gamma K(T_prev) rho_y = rhs with the
/// rate frozen at the previous stage temperature.
double reactive_euler_stage(double rhs_rho_y, double previous_temperature, double gamma,
                            double pre_exponential, double activation_temperature);

/// Thresholded guess from a homogeneous solution value: 1 above beta, else 0.
double homogeneous_initial_guess(double homogeneous_value, double beta);

/// Multiplier on the Rusanov dissipation of the reactant component.
double dissipation_weight(double mean_temperature, double dt, double pre_exponential,
                          double activation_temperature);

}  // namespace crkfr
