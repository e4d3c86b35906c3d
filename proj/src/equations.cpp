#include "crkfr/equations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace crkfr {

namespace {

AdmissibilityConstraint concave_constraint(std::string name, std::function<double(const State&)> fn,
                                           bool allow_zero = false) {
  AdmissibilityConstraint c;
  c.name = std::move(name);
  c.concave = true;
  c.allow_zero = allow_zero;
  auto eval = fn;
  c.evaluate = std::move(fn);
  c.epsilon_pair = [eval](const State& a, const State&) { return eval(a) / 10.0; };
  return c;
}

}  // namespace

// ---------------------------------------------------------------------------
// EquationSystem defaults

std::vector<std::string> EquationSystem::variable_names() const {
  std::vector<std::string> names;
  for (int i = 0; i < n_vars(); ++i) names.push_back("var_" + std::to_string(i));
  return names;
}

State EquationSystem::ncons_matvec(const State&, const State&) const { return State{}; }

State EquationSystem::source(double, double, const State&) const { return State{}; }

Jacobian EquationSystem::source_jacobian(double t, double x, const State& u) const {
  Jacobian J{};
  const int n = n_vars();
  const double sqrt_eps = std::sqrt(std::numeric_limits<double>::epsilon());
  for (int j = 0; j < n; ++j) {
    const double h = sqrt_eps * std::max(1.0, std::abs(u[j]));
    State up = u, um = u;
    up[j] += h;
    um[j] -= h;
    const State sp = source(t, x, up);
    const State sm = source(t, x, um);
    for (int i = 0; i < n; ++i) J[i][j] = (sp[i] - sm[i]) / (2.0 * h);
  }
  return J;
}

bool EquationSystem::admissible(const State& u) const {
  if (!all_finite(u)) return false;
  for (const auto& c : constraints_)
    if (!c.satisfied(u)) return false;
  return true;
}

StageSolveResult EquationSystem::solve_source_stage(const StageSolveRequest& req,
                                                    const ImplicitConfig& config) const {
  return solve_stage(*this, req, config);
}

State EquationSystem::dissipation_weights(const State&, const State&, double) const {
  State w;
  w.fill(1.0);
  return w;
}

// ---------------------------------------------------------------------------
// LinearAdvectionStiff

LinearAdvectionStiff::LinearAdvectionStiff(double velocity, double rate) : a_(velocity), rate_(rate) {}

State LinearAdvectionStiff::flux(const State& u) const { return {a_ * u[0]}; }

State LinearAdvectionStiff::source(double, double, const State& u) const { return {-rate_ * u[0]}; }

Jacobian LinearAdvectionStiff::source_jacobian(double, double, const State&) const {
  Jacobian J{};
  J[0][0] = -rate_;
  return J;
}

double LinearAdvectionStiff::max_speed(const State&) const { return std::abs(a_); }

// ---------------------------------------------------------------------------
// JinXin

JinXin::JinXin(double a, double epsilon) : a_(a), eps_(epsilon) {
  if (!(a > 0.0)) throw ConfigError("jin_xin: a must be positive");
  if (!(epsilon > 0.0)) throw ConfigError("jin_xin: epsilon must be positive");
}

State JinXin::flux(const State& u) const { return {u[1], a_ * a_ * u[0]}; }

State JinXin::source(double, double, const State& u) const {
  return {0.0, -(u[1] - equilibrium_flux(u[0])) / eps_};
}

Jacobian JinXin::source_jacobian(double, double, const State& u) const {
  Jacobian J{};
  J[1][0] = u[0] / eps_;
  J[1][1] = -1.0 / eps_;
  return J;
}

double JinXin::max_speed(const State&) const { return a_; }

// ---------------------------------------------------------------------------
// BurgersStiff

BurgersStiff::BurgersStiff(int exponent, double nu, double beta) : m_(exponent), nu_(nu), beta_(beta) {
  if (exponent < 2) throw ConfigError("burgers_stiff: exponent must be >= 2");
}

State BurgersStiff::flux(const State& u) const { return {std::pow(u[0], m_) / m_}; }

State BurgersStiff::source(double, double, const State& u) const {
  const double v = u[0];
  return {nu_ * (1.0 - v) * (v - beta_) * v};
}

Jacobian BurgersStiff::source_jacobian(double, double, const State& u) const {
  const double v = u[0];
  Jacobian J{};
  J[0][0] = nu_ * (-(v - beta_) * v + (1.0 - v) * v + (1.0 - v) * (v - beta_));
  return J;
}

double BurgersStiff::max_speed(const State& u) const { return std::pow(std::abs(u[0]), m_ - 1); }

State BurgersStiff::homogeneous_guess(const State& homogeneous) const {
  return {homogeneous_initial_guess(homogeneous[0], beta_)};
}

// ---------------------------------------------------------------------------
// VarAdvectionNC

State VarAdvectionNC::flux(const State&) const { return State{}; }

State VarAdvectionNC::ncons_matvec(const State& u, const State& v) const { return {u[1] * v[0], 0.0}; }

double VarAdvectionNC::max_speed(const State& u) const { return std::abs(u[1]); }

// ---------------------------------------------------------------------------
// ReactiveEuler1D

ReactiveEuler1D::ReactiveEuler1D(ReactiveEulerParams params) : p_(params) {
  if (!(p_.gamma > 1.0)) throw ConfigError("reactive_euler: gamma must exceed 1");
  constraints_.push_back(concave_constraint("density", [](const State& u) { return u[0]; }));
  constraints_.push_back(
      concave_constraint("reactant_density", [](const State& u) { return u[3]; }, true));
  const double g1 = p_.gamma - 1.0, q0 = p_.heat_release;
  constraints_.push_back(concave_constraint("pressure", [g1, q0](const State& u) {
    return g1 * (u[2] - 0.5 * u[1] * u[1] / u[0] - q0 * u[3]);
  }));
}

double ReactiveEuler1D::pressure(const State& u) const {
  return (p_.gamma - 1.0) * (u[2] - 0.5 * u[1] * u[1] / u[0] - p_.heat_release * u[3]);
}

double ReactiveEuler1D::rate(double temperature) const {
  return arrhenius_rate(temperature, p_.pre_exponential, p_.activation_temperature);
}

State ReactiveEuler1D::flux(const State& u) const {
  const double v = u[1] / u[0];
  const double p = pressure(u);
  return {u[1], p + u[1] * v, (u[2] + p) * v, u[3] * v};
}

State ReactiveEuler1D::source(double, double, const State& u) const {
  if (!(u[0] > 0.0)) throw AdmissibilityError("reactive_euler source: non-positive density");
  const double p = pressure(u);
  if (!(p > 0.0)) throw AdmissibilityError("reactive_euler source: non-positive pressure");
  return {0.0, 0.0, 0.0, -rate(p / u[0]) * u[3]};
}

Jacobian ReactiveEuler1D::source_jacobian(double t, double x, const State& u) const {
  (void)source(t, x, u);  // admissibility checks
  const double g1 = p_.gamma - 1.0;
  const double rho = u[0], m = u[1];
  const double p = pressure(u);
  const double T = p / rho;
  const double K = rate(T);
  const double dKdT = K * p_.activation_temperature / (T * T);
  const State dp = {g1 * 0.5 * m * m / (rho * rho), -g1 * m / rho, g1, -g1 * p_.heat_release};
  Jacobian J{};
  for (int j = 0; j < 4; ++j) {
    double dT = dp[j] / rho;
    if (j == 0) dT -= p / (rho * rho);
    J[3][j] = -u[3] * dKdT * dT;
  }
  J[3][3] -= K;
  return J;
}

double ReactiveEuler1D::max_speed(const State& u) const {
  const double p = pressure(u);
  if (!(u[0] > 0.0) || !(p > 0.0)) throw AdmissibilityError("reactive_euler: inadmissible state in wave speed");
  return std::abs(u[1] / u[0]) + std::sqrt(p_.gamma * p / u[0]);
}

double ReactiveEuler1D::indicator_variable(const State& u) const { return u[0] * pressure(u); }

State ReactiveEuler1D::prim_to_cons(const State& prim) const {
  const double rho = prim[0], v = prim[1], p = prim[2], Y = prim[3];
  if (!(rho > 0.0) || !(p > 0.0)) throw AdmissibilityError("reactive_euler: non-positive density or pressure");
  return {rho, rho * v, p / (p_.gamma - 1.0) + 0.5 * rho * v * v + p_.heat_release * rho * Y, rho * Y};
}

State ReactiveEuler1D::cons_to_prim(const State& u) const {
  return {u[0], u[1] / u[0], pressure(u), u[3] / u[0]};
}

StageSolveResult ReactiveEuler1D::solve_source_stage(const StageSolveRequest& req,
                                                     const ImplicitConfig& config) const {
  if (!p_.linearized_stage) return solve_stage(*this, req, config);
  StageSolveResult r;
  r.u = req.rhs;
  r.iterations = 1;
  if (req.gamma == 0.0) {
    r.converged = true;
    return r;
  }
  // Inner stages are not limited and may carry a non-positive temperature
  // next to strong discontinuities; the rate then takes its T -> 0+ limit,
  // zero.
  const double T_prev = req.previous[0] > 0.0 ? temperature(req.previous) : 0.0;
  if (T_prev > 0.0)
    r.u[3] = reactive_euler_stage(req.rhs[3], T_prev, req.gamma, p_.pre_exponential, p_.activation_temperature);
  r.converged = all_finite(r.u);
  if (!r.converged) r.residual = std::numeric_limits<double>::infinity();
  return r;
}

State ReactiveEuler1D::dissipation_weights(const State& mean_left, const State& mean_right, double dt) const {
  State w;
  w.fill(1.0);
  if (!p_.dissipation_reduction) return w;
  const State avg = 0.5 * (mean_left + mean_right);
  const double T = temperature(avg);
  if (!(T > 0.0)) return w;
  w[3] = dissipation_weight(T, dt, p_.pre_exponential, p_.activation_temperature);
  return w;
}

// ---------------------------------------------------------------------------
// TenMoment1D

namespace {

struct TenMomentPressure {
  double p11, p12, p22;
};

TenMomentPressure ten_moment_pressure(const State& u) {
  const double rho = u[0];
  return {2.0 * u[3] - u[1] * u[1] / rho, 2.0 * u[4] - u[1] * u[2] / rho, 2.0 * u[5] - u[2] * u[2] / rho};
}

}  // namespace

TenMoment1D::TenMoment1D(TenMomentParams params) : params_(params) {
  constraints_.push_back(concave_constraint("density", [](const State& u) { return u[0]; }));
  constraints_.push_back(concave_constraint("pressure_trace", [](const State& u) {
    const auto p = ten_moment_pressure(u);
    return p.p11 + p.p22;
  }));
  AdmissibilityConstraint det;
  det.name = "pressure_determinant";
  det.concave = false;
  det.evaluate = [](const State& u) {
    const auto p = ten_moment_pressure(u);
    return p.p11 * p.p22 - p.p12 * p.p12;
  };
  auto eval = det.evaluate;
  det.epsilon_pair = [eval](const State& a, const State& b) { return 0.5 * std::min(eval(a), eval(b)); };
  constraints_.push_back(std::move(det));
}

State TenMoment1D::flux(const State& u) const {
  const double rho = u[0];
  const double v1 = u[1] / rho, v2 = u[2] / rho;
  const auto p = ten_moment_pressure(u);
  return {u[1],
          p.p11 + u[1] * v1,
          p.p12 + u[1] * v2,
          (u[3] + p.p11) * v1,
          u[4] * v1 + 0.5 * (p.p11 * v2 + p.p12 * v1),
          u[5] * v1 + p.p12 * v2};
}

double TenMoment1D::quiver_gradient(double x) const {
  const double d = x - params_.quiver_center;
  return -2.0 * params_.quiver_width * d * params_.quiver_amplitude * std::exp(-params_.quiver_width * d * d);
}

State TenMoment1D::source(double, double x, const State& u) const {
  const double kw = params_.stiffness * quiver_gradient(x);
  return {0.0, -0.5 * kw * u[0], 0.0, -0.5 * kw * u[1], -0.25 * kw * u[2], 0.0};
}

Jacobian TenMoment1D::source_jacobian(double, double x, const State&) const {
  const double kw = params_.stiffness * quiver_gradient(x);
  Jacobian J{};
  J[1][0] = -0.5 * kw;
  J[3][1] = -0.5 * kw;
  J[4][2] = -0.25 * kw;
  return J;
}

double TenMoment1D::max_speed(const State& u) const {
  const auto p = ten_moment_pressure(u);
  if (!(u[0] > 0.0) || !(p.p11 > 0.0)) throw AdmissibilityError("ten_moment: inadmissible state in wave speed");
  return std::abs(u[1] / u[0]) + std::sqrt(params_.speed_factor * p.p11 / u[0]);
}

double TenMoment1D::indicator_variable(const State& u) const {
  const auto p = ten_moment_pressure(u);
  return u[0] * (p.p11 + p.p22);
}

State TenMoment1D::prim_to_cons(const State& prim) const {
  const double rho = prim[0], v1 = prim[1], v2 = prim[2];
  if (!(rho > 0.0)) throw AdmissibilityError("ten_moment: non-positive density");
  return {rho,
          rho * v1,
          rho * v2,
          0.5 * prim[3] + 0.5 * rho * v1 * v1,
          0.5 * prim[4] + 0.5 * rho * v1 * v2,
          0.5 * prim[5] + 0.5 * rho * v2 * v2};
}

State TenMoment1D::cons_to_prim(const State& u) const {
  const auto p = ten_moment_pressure(u);
  return {u[0], u[1] / u[0], u[2] / u[0], p.p11, p.p12, p.p22};
}

// ---------------------------------------------------------------------------
// Factory

namespace {

class ParamReader {
 public:
  ParamReader(std::string_view system, const std::map<std::string, double>& params)
      : system_(system), params_(params) {}

  double get(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    return it == params_.end() ? fallback : it->second;
  }

  void finish() const {
    for (const auto& [k, v] : params_)
      if (!used_.count(k))
        throw ConfigError("unknown parameter '" + k + "' for equation '" + std::string(system_) + "'");
  }

 private:
  std::string_view system_;
  const std::map<std::string, double>& params_;
  std::set<std::string> used_;
};

}  // namespace

std::vector<std::string> equation_names() {
  return {"linear_advection_stiff", "jin_xin", "burgers_stiff", "var_advection", "reactive_euler", "ten_moment"};
}

EquationPtr make_equation(std::string_view name, const std::map<std::string, double>& params) {
  ParamReader r(name, params);
  EquationPtr eq;
  if (name == "linear_advection_stiff") {
    const double a = r.get("a", 1.0);
    const double K = r.get("K", 0.0);
    eq = std::make_shared<LinearAdvectionStiff>(a, K);
  } else if (name == "jin_xin") {
    const double a = r.get("a", 3.0);
    const double eps = r.get("epsilon", 1e-1);
    eq = std::make_shared<JinXin>(a, eps);
  } else if (name == "burgers_stiff") {
    const double m = r.get("m", 2.0);
    if (m != std::round(m)) throw ConfigError("burgers_stiff: m must be an integer");
    const double nu = r.get("nu", 1e6);
    const double beta = r.get("beta", 0.9);
    eq = std::make_shared<BurgersStiff>(static_cast<int>(m), nu, beta);
  } else if (name == "var_advection") {
    eq = std::make_shared<VarAdvectionNC>();
  } else if (name == "reactive_euler") {
    ReactiveEulerParams p;
    p.gamma = r.get("gamma", p.gamma);
    p.heat_release = r.get("q0", p.heat_release);
    p.pre_exponential = r.get("A", p.pre_exponential);
    p.activation_temperature = r.get("TA", p.activation_temperature);
    p.linearized_stage = r.get("linearized_stage", 1.0) != 0.0;
    p.dissipation_reduction = r.get("dissipation_reduction", 1.0) != 0.0;
    eq = std::make_shared<ReactiveEuler1D>(p);
  } else if (name == "ten_moment") {
    TenMomentParams p;
    p.stiffness = r.get("K", p.stiffness);
    p.quiver_amplitude = r.get("W_amplitude", p.quiver_amplitude);
    p.quiver_width = r.get("W_width", p.quiver_width);
    p.quiver_center = r.get("W_center", p.quiver_center);
    p.speed_factor = r.get("speed_factor", p.speed_factor);
    eq = std::make_shared<TenMoment1D>(p);
  } else {
    throw ConfigError("unknown equation '" + std::string(name) + "'");
  }
  r.finish();
  return eq;
}

}  // namespace crkfr
