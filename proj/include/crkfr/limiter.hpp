#pragma once

#include <span>
#include <string>
#include <vector>

#include "crkfr/equations.hpp"
#include "crkfr/state.hpp"

namespace crkfr {

struct LimiterConfig {
  bool enabled = true;
  /// Forces alpha = 1 everywhere (pure subcell finite volume).
  bool pure_low_order = false;
  double alpha_max = 1.0;
  double alpha_min = 0.001;
  double threshold_scale = 0.5;
  double threshold_exponent = 1.8;
  double sharpness = 9.21024;
  /// "default" uses the system's indicator_variable; "var_<k>" picks a
  /// conserved component.
  std::string indicator_variable = "default";

  bool operator==(const LimiterConfig&) const = default;
};

/// Threshold T(N) = scale * 10^(-exponent * (N + 1)^(1/4)).
double indicator_threshold(int degree, const LimiterConfig& config);

/// Blending coefficient from the modal energy of the indicator variable.
/// `modal` is the nodal-to-modal matrix of the element (row-major).
double smoothness_alpha(std::span<const double> indicator_values, std::span<const double> modal,
                        const LimiterConfig& config);

/// Indicator value at one state according to config.indicator_variable.
double indicator_value(const EquationSystem& system, const State& u, const LimiterConfig& config);

/// Largest-safe theta in [0, 1] with P(theta u_cand + (1 - theta) u_low) >= eps.
/// Closed form for concave constraints, Newton with bisection safeguard
/// otherwise.
double theta_for_constraint(const AdmissibilityConstraint& c, double eps, const State& u_low, const State& u_cand);

/// One side of an element interface as seen by the flux limiter: the
/// subcell next to the interface, its width and the flux on its far face.
struct InterfaceSubcell {
  bool present = false;
  State u{};
  double width = 1.0;
  /// Flux through the subcell face away from the interface (the one-sided
  /// value belonging to this subcell).
  State inner_flux{};
};

struct InterfaceLimitResult {
  State flux_minus{};
  State flux_plus{};
  double theta = 1.0;
};

/// Contracts blended interface fluxes toward the low-order ones until the
/// evolutions of both adjacent subcells satisfy every constraint. `left` is
/// the last subcell of the element on the left (it uses the minus flux),
/// `right` the first subcell of the element on the right (plus flux).
InterfaceLimitResult flux_limit_interface(const EquationSystem& system, const InterfaceSubcell& left,
                                          const InterfaceSubcell& right, const State& blended_minus,
                                          const State& blended_plus, const State& low_minus,
                                          const State& low_plus, double dt);

/// Element-wise contraction of u toward u_low so that every point satisfies
/// every constraint. Returns the product of the applied thetas.
double final_admissibility_limit(const EquationSystem& system, std::span<State> u, std::span<const State> u_low);

}  // namespace crkfr
