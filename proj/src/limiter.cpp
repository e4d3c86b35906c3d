#include "crkfr/limiter.hpp"

#include <algorithm>
#include <cmath>

namespace crkfr {

double indicator_threshold(int degree, const LimiterConfig& config) {
  return config.threshold_scale * std::pow(10.0, -config.threshold_exponent * std::pow(degree + 1.0, 0.25));
}

double smoothness_alpha(std::span<const double> indicator_values, std::span<const double> modal,
                        const LimiterConfig& config) {
  const int n = static_cast<int>(indicator_values.size());
  const int N = n - 1;
  if (N < 1) return 0.0;
  for (double q : indicator_values)
    if (!std::isfinite(q)) return config.alpha_max;

  std::vector<double> m(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int p = 0; p < n; ++p) m[k] += modal[k * n + p] * indicator_values[p];

  double total = 0.0;
  for (int k = 0; k < n; ++k) total += m[k] * m[k];
  const double total_lower = total - m[N] * m[N];
  double energy = total > 0.0 ? m[N] * m[N] / total : 0.0;
  // With N = 1 the second ratio is m_0^2 / m_0^2 = 1 for any data, so only
  // the highest mode is used.
  if (N >= 2 && total_lower > 0.0) energy = std::max(energy, m[N - 1] * m[N - 1] / total_lower);
  if (!std::isfinite(energy)) return config.alpha_max;

  const double T = indicator_threshold(N, config);
  double alpha = 1.0 / (1.0 + std::exp(-(config.sharpness / T) * (energy - T)));
  if (alpha < config.alpha_min) alpha = 0.0;
  return std::min(alpha, config.alpha_max);
}

double indicator_value(const EquationSystem& system, const State& u, const LimiterConfig& config) {
  if (config.indicator_variable == "default") return system.indicator_variable(u);
  if (config.indicator_variable.rfind("var_", 0) == 0) {
    const int k = std::stoi(config.indicator_variable.substr(4));
    if (k >= 0 && k < system.n_vars()) return u[k];
  }
  throw ConfigError("unknown indicator variable '" + config.indicator_variable + "'");
}

double theta_for_constraint(const AdmissibilityConstraint& c, double eps, const State& u_low, const State& u_cand) {
  const double p_cand = c.evaluate(u_cand);
  if (!std::isfinite(p_cand)) return 0.0;
  if (p_cand >= eps) return 1.0;
  const double p_low = c.evaluate(u_low);
  const double direct = std::min(1.0, std::abs((eps - p_low) / (p_cand - p_low)));
  if (c.concave) return direct;

  auto g = [&](double th) { return c.evaluate(convex(th, u_cand, u_low)) - eps; };
  constexpr double tol = 1e-10;
  // Bracket: g(lo) >= 0, g(hi) < 0.
  double lo = 0.0, hi = 1.0;
  double th = std::clamp(direct, 0.0, 1.0);
  double gth = g(th);
  for (int it = 0; it < 20 && std::abs(gth) > tol; ++it) {
    if (gth >= 0.0)
      lo = th;
    else
      hi = th;
    const double h = 1e-7;
    const double a = std::max(th - h, 0.0), b = std::min(th + h, 1.0);
    const double slope = (g(b) - g(a)) / (b - a);
    double next = slope != 0.0 && std::isfinite(slope) ? th - gth / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    th = next;
    gth = g(th);
  }
  for (int it = 0; it < 100 && std::abs(gth) > tol; ++it) {
    if (gth >= 0.0)
      lo = th;
    else
      hi = th;
    th = 0.5 * (lo + hi);
    gth = g(th);
  }
  if (gth < 0.0) {
    // Within tolerance but on the wrong side; fall back to the safe end
    // unless that costs more than the tolerance band.
    if (gth < -tol) return lo;
  }
  return th;
}

namespace {

State evolve_left(const InterfaceSubcell& s, const State& flux_minus, double dt) {
  return s.u - (dt / s.width) * (flux_minus - s.inner_flux);
}

State evolve_right(const InterfaceSubcell& s, const State& flux_plus, double dt) {
  return s.u - (dt / s.width) * (s.inner_flux - flux_plus);
}

}  // namespace

InterfaceLimitResult flux_limit_interface(const EquationSystem& system, const InterfaceSubcell& left,
                                          const InterfaceSubcell& right, const State& blended_minus,
                                          const State& blended_plus, const State& low_minus,
                                          const State& low_plus, double dt) {
  InterfaceLimitResult r{blended_minus, blended_plus, 1.0};
  const auto& cons = system.constraints();
  if (cons.empty()) return r;

  const State low_l = left.present ? evolve_left(left, low_minus, dt) : State{};
  const State low_r = right.present ? evolve_right(right, low_plus, dt) : State{};
  if ((left.present && !system.admissible(low_l)) || (right.present && !system.admissible(low_r)))
    throw AdmissibilityError("first-order subcell evolution is not admissible; reduce the time step");

  State cand_l = left.present ? evolve_left(left, r.flux_minus, dt) : State{};
  State cand_r = right.present ? evolve_right(right, r.flux_plus, dt) : State{};

  for (const auto& c : cons) {
    double theta = 1.0;
    if (left.present) theta = std::min(theta, theta_for_constraint(c, c.evaluate(low_l) / 10.0, low_l, cand_l));
    if (right.present) theta = std::min(theta, theta_for_constraint(c, c.evaluate(low_r) / 10.0, low_r, cand_r));
    if (theta < 1.0) {
      r.flux_minus = convex(theta, r.flux_minus, low_minus);
      r.flux_plus = convex(theta, r.flux_plus, low_plus);
      r.theta *= theta;
      if (left.present) cand_l = evolve_left(left, r.flux_minus, dt);
      if (right.present) cand_r = evolve_right(right, r.flux_plus, dt);
    }
  }

  // Round-off can leave a candidate a hair outside; the low-order fluxes are
  // admissible by assumption.
  if ((left.present && !system.admissible(cand_l)) || (right.present && !system.admissible(cand_r))) {
    r.flux_minus = low_minus;
    r.flux_plus = low_plus;
    r.theta = 0.0;
  }
  return r;
}

double final_admissibility_limit(const EquationSystem& system, std::span<State> u, std::span<const State> u_low) {
  const auto& cons = system.constraints();
  double total = 1.0;
  const std::size_t n = u.size();
  for (const auto& c : cons) {
    double eps = c.evaluate(u_low[0]);
    for (std::size_t p = 1; p < n; ++p) eps = std::min(eps, c.evaluate(u_low[p]));
    eps /= 10.0;
    double theta = 1.0;
    for (std::size_t p = 0; p < n; ++p) theta = std::min(theta, theta_for_constraint(c, eps, u_low[p], u[p]));
    if (theta < 1.0) {
      for (std::size_t p = 0; p < n; ++p) u[p] = convex(theta, u[p], u_low[p]);
      total *= theta;
    }
  }
  for (std::size_t p = 0; p < n; ++p)
    if (!system.admissible(u[p])) {
      for (std::size_t q = 0; q < n; ++q) u[q] = u_low[q];
      return 0.0;
    }
  return total;
}

}  // namespace crkfr
