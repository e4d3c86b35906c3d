#pragma once

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "crkfr/implicit.hpp"
#include "crkfr/state.hpp"

namespace crkfr {

/// One positivity-type constraint P_k(u) > 0 of the admissible set.
///
/// Constraints are ordered: P_k only has to make sense when every P_j with
/// j < k holds (pressure needs positive density, for instance).
struct AdmissibilityConstraint {
  std::string name;
  std::function<double(const State&)> evaluate;
  bool concave = true;
  /// Boundary value admitted (P >= 0). Used for the reactant density, which
  /// is exactly zero in burnt gas.
  bool allow_zero = false;
  /// Lower bound guaranteed along segments between admissible states.
  std::function<double(const State&, const State&)> epsilon_pair;

  bool satisfied(const State& u) const {
    const double p = evaluate(u);
    return allow_zero ? p >= 0.0 : p > 0.0;
  }
};

/// Pluggable physics for u_t + f(u)_x + B(u) u_x = s(t, x, u).
class EquationSystem {
 public:
  virtual ~EquationSystem() = default;

  virtual std::string name() const = 0;
  virtual int n_vars() const = 0;
  virtual std::vector<std::string> variable_names() const;

  virtual State flux(const State& u) const = 0;

  virtual bool has_nonconservative() const { return false; }
  /// B(u) v
  virtual State ncons_matvec(const State& u, const State& v) const;

  virtual bool has_source() const { return false; }
  virtual State source(double t, double x, const State& u) const;
  /// ds/du; the default is a central finite difference.
  virtual Jacobian source_jacobian(double t, double x, const State& u) const;

  /// Spectral radius bound of f'(u) + B(u). Throws AdmissibilityError when
  /// u is outside the admissible set.
  virtual double max_speed(const State& u) const = 0;

  const std::vector<AdmissibilityConstraint>& constraints() const { return constraints_; }
  bool admissible(const State& u) const;

  /// Scalar fed to the smoothness indicator.
  virtual double indicator_variable(const State& u) const { return u[0]; }

  virtual State prim_to_cons(const State& prim) const { return prim; }
  virtual State cons_to_prim(const State& u) const { return u; }

  /// Solves u = rhs + gamma s(t, x, u) at one solution point.
  virtual StageSolveResult solve_source_stage(const StageSolveRequest& req,
                                              const ImplicitConfig& config) const;

  /// Per-variable multipliers of the Rusanov dissipation at an interface,
  /// given the element means on both sides.
  virtual State dissipation_weights(const State& mean_left, const State& mean_right, double dt) const;

  /// Initial guess for implicit solves derived from a homogeneous solution
  /// value (no hook: the value itself).
  virtual bool has_homogeneous_guess() const { return false; }
  virtual State homogeneous_guess(const State& homogeneous) const { return homogeneous; }

 protected:
  std::vector<AdmissibilityConstraint> constraints_;
};

using EquationPtr = std::shared_ptr<const EquationSystem>;

/// u_t + a u_x = -K u
class LinearAdvectionStiff final : public EquationSystem {
 public:
  LinearAdvectionStiff(double velocity, double rate);
  std::string name() const override { return "linear_advection_stiff"; }
  int n_vars() const override { return 1; }
  State flux(const State& u) const override;
  bool has_source() const override { return rate_ != 0.0; }
  State source(double t, double x, const State& u) const override;
  Jacobian source_jacobian(double t, double x, const State& u) const override;
  double max_speed(const State& u) const override;
  double velocity() const { return a_; }
  double rate() const { return rate_; }

 private:
  double a_;
  double rate_;
};

/// Jin-Xin relaxation of Burgers' equation: (u, v) with flux (v, a^2 u) and
/// source (0, -(v - u^2/2) / eps).
class JinXin final : public EquationSystem {
 public:
  JinXin(double a, double epsilon);
  std::string name() const override { return "jin_xin"; }
  int n_vars() const override { return 2; }
  std::vector<std::string> variable_names() const override { return {"u", "v"}; }
  State flux(const State& u) const override;
  bool has_source() const override { return true; }
  State source(double t, double x, const State& u) const override;
  Jacobian source_jacobian(double t, double x, const State& u) const override;
  double max_speed(const State& u) const override;
  static double equilibrium_flux(double u) { return 0.5 * u * u; }
  double epsilon() const { return eps_; }

 private:
  double a_;
  double eps_;
};

/// u_t + (u^m / m)_x = nu (1 - u)(u - beta) u
class BurgersStiff final : public EquationSystem {
 public:
  BurgersStiff(int exponent, double nu, double beta);
  std::string name() const override { return "burgers_stiff"; }
  int n_vars() const override { return 1; }
  State flux(const State& u) const override;
  bool has_source() const override { return nu_ != 0.0; }
  State source(double t, double x, const State& u) const override;
  Jacobian source_jacobian(double t, double x, const State& u) const override;
  double max_speed(const State& u) const override;
  bool has_homogeneous_guess() const override { return true; }
  State homogeneous_guess(const State& homogeneous) const override;
  double beta() const { return beta_; }

 private:
  int m_;
  double nu_;
  double beta_;
};

/// Variable-coefficient advection cast as (u1, u2)_t + B(u) u_x = 0 with
/// B(u) v = (u2 v1, 0).
class VarAdvectionNC final : public EquationSystem {
 public:
  VarAdvectionNC() = default;
  std::string name() const override { return "var_advection"; }
  int n_vars() const override { return 2; }
  std::vector<std::string> variable_names() const override { return {"v", "a"}; }
  State flux(const State& u) const override;
  bool has_nonconservative() const override { return true; }
  State ncons_matvec(const State& u, const State& v) const override;
  double max_speed(const State& u) const override;
};

struct ReactiveEulerParams {
  double gamma = 1.4;
  double heat_release = 25.0;
  double pre_exponential = 164180.0;
  double activation_temperature = 25.0;
  /// Reactant stage solve with the rate frozen at the previous stage.
  bool linearized_stage = true;
  bool dissipation_reduction = true;
};

/// 1-D reactive Euler, u = (rho, rho v, E, rho Y), T = p / rho.
class ReactiveEuler1D final : public EquationSystem {
 public:
  explicit ReactiveEuler1D(ReactiveEulerParams params = {});
  std::string name() const override { return "reactive_euler"; }
  int n_vars() const override { return 4; }
  std::vector<std::string> variable_names() const override { return {"rho", "rho_v", "E", "rho_Y"}; }
  State flux(const State& u) const override;
  bool has_source() const override { return true; }
  State source(double t, double x, const State& u) const override;
  Jacobian source_jacobian(double t, double x, const State& u) const override;
  double max_speed(const State& u) const override;
  double indicator_variable(const State& u) const override;
  /// prim = (rho, v, p, Y)
  State prim_to_cons(const State& prim) const override;
  State cons_to_prim(const State& u) const override;
  StageSolveResult solve_source_stage(const StageSolveRequest& req,
                                      const ImplicitConfig& config) const override;
  State dissipation_weights(const State& mean_left, const State& mean_right, double dt) const override;

  double pressure(const State& u) const;
  double temperature(const State& u) const { return pressure(u) / u[0]; }
  double rate(double temperature) const;
  const ReactiveEulerParams& params() const { return p_; }

 private:
  ReactiveEulerParams p_;
};

struct TenMomentParams {
  double stiffness = 1e5;
  double quiver_amplitude = 1.0 / 40.0;
  double quiver_width = 20.0;
  double quiver_center = 2.0;
  /// lambda = |v1| + sqrt(speed_factor * p11 / rho)
  double speed_factor = 3.0;
};

/// 1-D ten-moment Gaussian closure, u = (rho, rho v1, rho v2, E11, E12, E22)
/// with a Gaussian quiver-energy source.
class TenMoment1D final : public EquationSystem {
 public:
  explicit TenMoment1D(TenMomentParams params = {});
  std::string name() const override { return "ten_moment"; }
  int n_vars() const override { return 6; }
  std::vector<std::string> variable_names() const override {
    return {"rho", "rho_v1", "rho_v2", "E11", "E12", "E22"};
  }
  State flux(const State& u) const override;
  bool has_source() const override { return params_.stiffness != 0.0; }
  State source(double t, double x, const State& u) const override;
  Jacobian source_jacobian(double t, double x, const State& u) const override;
  double max_speed(const State& u) const override;
  double indicator_variable(const State& u) const override;
  /// prim = (rho, v1, v2, P11, P12, P22)
  State prim_to_cons(const State& prim) const override;
  State cons_to_prim(const State& u) const override;

  double quiver_gradient(double x) const;

 private:
  TenMomentParams params_;
};

/// Builds a system by name; unknown parameter names are rejected.
EquationPtr make_equation(std::string_view name, const std::map<std::string, double>& params);

std::vector<std::string> equation_names();

}  // namespace crkfr
