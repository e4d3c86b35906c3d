#include "crkfr/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crkfr/equations.hpp"

namespace crkfr {

namespace {

// Solves M x = b in place for the leading n x n block; false if singular.
bool solve_dense(Jacobian M, State b, int n, State& x) {
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(M[r][col]) > std::abs(M[piv][col])) piv = r;
    if (!(std::abs(M[piv][col]) > 0.0) || !std::isfinite(M[piv][col])) return false;
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = M[r][col] / M[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) M[r][c] -= f * M[col][c];
      b[r] -= f * b[col];
    }
  }
  x = State{};
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) s -= M[r][c] * x[c];
    x[r] = s / M[r][r];
  }
  return true;
}

State residual_vector(const EquationSystem& system, const StageSolveRequest& req, const State& u) {
  const State s = system.source(req.t, req.x, u);
  State r{};
  for (int i = 0; i < system.n_vars(); ++i) r[i] = u[i] - req.rhs[i] - req.gamma * s[i];
  return r;
}

}  // namespace

double stage_residual(const EquationSystem& system, const StageSolveRequest& req, const State& u) {
  return max_abs(residual_vector(system, req, u));
}

StageSolveResult solve_stage(const EquationSystem& system, const StageSolveRequest& req,
                             const ImplicitConfig& config) {
  StageSolveResult res;
  const int n = system.n_vars();
  if (req.gamma == 0.0) {
    res.u = req.rhs;
    res.converged = true;
    return res;
  }

  State u = all_finite(req.guess) ? req.guess : req.rhs;
  State r;
  try {
    r = residual_vector(system, req, u);
  } catch (const AdmissibilityError&) {
    u = req.rhs;
    try {
      r = residual_vector(system, req, u);
    } catch (const AdmissibilityError&) {
      res.u = u;
      res.residual = std::numeric_limits<double>::infinity();
      return res;
    }
  }
  res.residual = max_abs(r);

  for (int it = 0; it < config.max_iterations; ++it) {
    if (res.residual <= config.residual_tolerance) {
      res.converged = true;
      break;
    }
    Jacobian M;
    try {
      M = system.source_jacobian(req.t, req.x, u);
    } catch (const AdmissibilityError&) {
      break;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) M[i][j] = (i == j ? 1.0 : 0.0) - req.gamma * M[i][j];
    State delta;
    if (!solve_dense(M, r, n, delta)) break;

    auto evaluate = [&](double scale, bool need_admissible, State& trial, State& r_trial) {
      for (int i = 0; i < n; ++i) trial[i] = u[i] - scale * delta[i];
      if (need_admissible && !system.admissible(trial)) return false;
      try {
        r_trial = residual_vector(system, req, trial);
      } catch (const AdmissibilityError&) {
        return false;
      }
      return all_finite(r_trial);
    };
    State trial{};
    State r_trial{};
    bool accepted = false;
    double scale = config.damping;
    for (int bt = 0; bt <= config.max_backtracks && !accepted; ++bt, scale *= 0.5)
      accepted = evaluate(scale, true, trial, r_trial);
    // Unlimited inner stages can have their root outside the admissible
    // set; then the damped step is taken as long as the source is defined.
    if (!accepted) accepted = evaluate(config.damping, false, trial, r_trial);
    if (!accepted) break;

    ++res.iterations;
    // Convergence by step size only counts for the full Newton update, so a
    // heavily backtracked step cannot masquerade as convergence.
    double step = 0.0, size = 1.0;
    for (int i = 0; i < n; ++i) {
      step = std::max(step, std::abs(delta[i]));
      size = std::max(size, std::abs(trial[i]));
    }
    u = trial;
    r = r_trial;
    res.residual = max_abs(r);
    if (res.residual <= config.residual_tolerance || step <= config.step_tolerance * size) {
      res.converged = true;
      break;
    }
  }
  res.u = u;
  return res;
}

double arrhenius_rate(double temperature, double pre_exponential, double activation_temperature) {
  return pre_exponential * std::exp(-activation_temperature / temperature);
}

double reactive_euler_stage(double rhs_rho_y, double previous_temperature, double gamma, double pre_exponential,
                            double activation_temperature) {
  if (gamma == 0.0) return rhs_rho_y;
  const double K = arrhenius_rate(previous_temperature, pre_exponential, activation_temperature);
  return rhs_rho_y / (1.0 + gamma * K);
}

double homogeneous_initial_guess(double homogeneous_value, double beta) {
  return homogeneous_value > beta ? 1.0 : 0.0;
}

double dissipation_weight(double mean_temperature, double dt, double pre_exponential,
                          double activation_temperature) {
  const double dk = dt * arrhenius_rate(mean_temperature, pre_exponential, activation_temperature);
  return dk < 1.0 ? 1.0 - dk : 0.0;
}

}  // namespace crkfr
