#include "crkfr/scenarios.hpp"

#include <cmath>
#include <numbers>

namespace crkfr {

namespace {

using std::numbers::pi;

Scenario jin_xin() {
  Scenario s;
  s.name = "jin_xin";
  s.description = "Jin-Xin relaxation of Burgers, u0 = 2 + sin(pi (x - 0.7)), periodic on [-1, 1]";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "jin_xin";
  c.equation_params = {{"a", 3.0}, {"epsilon", 1e-1}};
  c.x_lo = -1.0;
  c.x_hi = 1.0;
  c.n_elements = 128;
  c.degree = 3;
  c.t_final = 0.25;
  // The variable v starts on the equilibrium manifold v = u^2 / 2.
  s.initial = [](const EquationSystem&, double x) {
    const double u = 2.0 + std::sin(pi * (x - 0.7));
    return State{u, JinXin::equilibrium_flux(u)};
  };
  return s;
}

Scenario burgers(bool shock) {
  Scenario s;
  s.name = shock ? "burgers_stiff_shock" : "burgers_stiff_rarefaction";
  s.description = shock ? "stiff Burgers-type source, u = 1 left of 0 and 0 right of it"
                        : "stiff Burgers-type source, u = 0 left of 0 and 1 right of it";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "burgers_stiff";
  c.equation_params = {{"m", 2.0}, {"nu", 1e6}, {"beta", 0.9}};
  c.x_lo = -2.0;
  c.x_hi = 4.0;
  c.n_elements = 60;
  c.degree = 3;
  c.t_final = 4.0;
  c.left_bc = BoundaryKind::Dirichlet;
  c.right_bc = BoundaryKind::Dirichlet;
  c.guess_strategy = GuessStrategy::HomogeneousThreshold;
  const double left = shock ? 1.0 : 0.0;
  const double right = 1.0 - left;
  s.initial = [=](const EquationSystem&, double x) { return State{x < 0.0 ? left : right}; };
  s.boundary = [=](const EquationSystem&, double, double x) { return State{x < 0.0 ? left : right}; };
  return s;
}

Scenario var_advection() {
  Scenario s;
  s.name = "var_advection";
  s.description = "u_t + x^-2 u_x = 0 on [0.1, 1], u0 = sin(pi x)";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "var_advection";
  c.x_lo = 0.1;
  c.x_hi = 1.0;
  c.n_elements = 8;
  c.degree = 3;
  c.t_final = 1.0;
  c.left_bc = BoundaryKind::Dirichlet;
  c.right_bc = BoundaryKind::Extrapolation;
  c.limiter.enabled = false;
  // Characteristics of x^-2 satisfy x^3 - 3t = const.
  s.exact = [](const EquationSystem&, double t, double x) {
    return State{std::sin(pi * std::cbrt(x * x * x - 3.0 * t)), 1.0 / (x * x)};
  };
  s.initial = [](const EquationSystem&, double x) { return State{std::sin(pi * x), 1.0 / (x * x)}; };
  s.boundary = s.exact;
  return s;
}

Scenario reactive_riemann() {
  Scenario s;
  s.name = "reactive_euler_riemann";
  s.description = "reactive Euler Riemann problem with stiff Arrhenius source on [-5, 25]";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "reactive_euler";
  c.x_lo = -5.0;
  c.x_hi = 25.0;
  c.n_elements = 100;
  c.degree = 3;
  c.t_final = 1.0;
  c.left_bc = BoundaryKind::Extrapolation;
  c.right_bc = BoundaryKind::Extrapolation;
  s.initial = [](const EquationSystem& sys, double x) {
    return x < 0.0 ? sys.prim_to_cons(State{1.6812, 2.8867, 21.5682, 0.0})
                   : sys.prim_to_cons(State{1.0, 0.0, 1.0, 1.0});
  };
  s.boundary = [init = s.initial](const EquationSystem& sys, double, double x) { return init(sys, x); };
  return s;
}

Scenario ten_moment() {
  Scenario s;
  s.name = "ten_moment_near_vacuum";
  s.description = "ten-moment double rarefaction with stiff Gaussian quiver source on [0, 4]";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "ten_moment";
  c.equation_params = {{"K", 1e5}};
  c.x_lo = 0.0;
  c.x_hi = 4.0;
  c.n_elements = 500;
  c.degree = 3;
  c.t_final = 0.1;
  c.left_bc = BoundaryKind::Extrapolation;
  c.right_bc = BoundaryKind::Extrapolation;
  // The two states meet at the domain centre, where the quiver source peaks.
  s.initial = [](const EquationSystem& sys, double x) {
    const double v = x < 2.0 ? -4.0 : 4.0;
    return sys.prim_to_cons(State{1.0, v, 0.0, 9.0, 7.0, 9.0});
  };
  s.boundary = [init = s.initial](const EquationSystem& sys, double, double x) { return init(sys, x); };
  return s;
}

Scenario linear_advection() {
  Scenario s;
  s.name = "linear_advection_stiff";
  s.description = "u_t + a u_x = -K u, periodic on [0, 1], u0 = sin(2 pi x)";
  RunConfig& c = s.defaults;
  c.scenario = s.name;
  c.equation = "linear_advection_stiff";
  c.equation_params = {{"a", 1.0}, {"K", 1e4}};
  c.x_lo = 0.0;
  c.x_hi = 1.0;
  c.n_elements = 16;
  c.degree = 3;
  c.t_final = 0.1;
  c.limiter.enabled = false;
  s.exact = [](const EquationSystem& sys, double t, double x) {
    const auto& eq = dynamic_cast<const LinearAdvectionStiff&>(sys);
    return State{std::sin(2.0 * pi * (x - eq.velocity() * t)) * std::exp(-eq.rate() * t)};
  };
  s.initial = [](const EquationSystem&, double x) { return State{std::sin(2.0 * pi * x)}; };
  s.boundary = s.exact;
  return s;
}

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> all = {jin_xin(),           burgers(true),      burgers(false),
                                            var_advection(),     reactive_riemann(), ten_moment(),
                                            linear_advection()};
  return all;
}

}  // namespace

const Scenario& scenario_by_name(const std::string& name) {
  for (const auto& s : registry())
    if (s.name == name) return s;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> names;
  for (const auto& s : registry()) names.push_back(s.name);
  return names;
}

}  // namespace crkfr
