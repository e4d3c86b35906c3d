#pragma once

#include <functional>
#include <limits>
#include <string_view>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/grid.hpp"
#include "crkfr/implicit.hpp"
#include "crkfr/limiter.hpp"
#include "crkfr/tableau.hpp"

namespace crkfr {

/// Time-averaged non-conservative interface flux.
enum class NconsFlux {
  /// B(u^n) at the trace times the averaged interface state; needs only the
  /// quantities already exchanged for the conservative flux.
  Trace,
  /// Stage-by-stage average of B(u^(j)) times the stage interface state;
  /// needs every stage trace from the neighbour.
  StageAveraged,
};

std::string_view to_string(NconsFlux v);
NconsFlux parse_ncons_flux(std::string_view name);

/// Largest stable CFL number per degree for the scheme (N <= 9).
double default_cfl(int degree);

inline constexpr int kMaxDegree = 9;
inline constexpr int kMaxStages = 8;

struct SolverConfig {
  int degree = 3;
  PointKind points = PointKind::GL;
  ButcherIMEX tableau = ssp3_imex_433();
  double cfl_safety = 0.9;
  /// Replaces default_cfl(degree) when positive.
  double cfl_override = 0.0;
  double dt_max = std::numeric_limits<double>::infinity();
  NconsFlux ncons_flux = NconsFlux::Trace;
  LimiterConfig limiter;
  ImplicitConfig implicit;
  Boundary left;
  Boundary right;
  /// Test switch: integrate the source with the explicit tableau instead of
  /// the implicit one.
  bool explicit_source = false;
  /// Retry a failed step once with half the time step.
  bool retry_on_failure = true;
  int threads = 1;
};

struct StepDiagnostics {
  double dt = 0.0;
  int retries = 0;
  double max_alpha = 0.0;
  /// Smallest theta applied by the interface flux limiter and by the final
  /// element contraction (1 = untouched).
  double min_flux_theta = 1.0;
  double min_element_theta = 1.0;
  /// Smallest dissipation weight over interfaces and variables.
  double min_dissipation_weight = 1.0;
  int newton_iterations_max = 0;
  /// Minimum of each admissibility constraint over all points after the step.
  std::vector<double> min_constraints;
};

/// cRKFR IMEX solver on a 1-D mesh.
///
/// One step computes, per element, the inner stages with element-local
/// derivatives and pointwise implicit source solves, the time averages and
/// their traces; then, per interface, the time-averaged numerical fluxes;
/// then, per element, the high-order update, the optional subcell
/// low-order update and blending, and the admissibility contraction.
class Solver {
 public:
  Solver(EquationPtr system, Grid1D grid, SolverConfig config);

  const EquationSystem& system() const { return *system_; }
  EquationPtr system_ptr() const { return system_; }
  const Grid1D& grid() const { return grid_; }
  const SolverConfig& config() const { return config_; }
  const ReferenceOperators& operators() const { return ops_; }
  int points_per_element() const { return np_; }

  const Field& solution() const { return u_; }
  Field& solution() { return u_; }
  double time() const { return t_; }
  void set_solution(Field u, double t);
  void initialize(const std::function<State(double)>& fn, double t = 0.0);
  double node_x(int e, int p) const { return grid_.x(e, ops_.points.nodes[p]); }

  double cfl() const;
  double compute_dt() const;

  /// Advances by dt; on a solver failure restores the state and retries once
  /// with dt / 2 (if enabled). Returns what was actually done.
  StepDiagnostics step(double dt);
  /// Single attempt. Throws SolverError (state restored) on failure.
  StepDiagnostics advance(double dt);

  /// Values whose (hooked) image seeds every implicit solve of the next
  /// steps; nullptr reverts to the explicit predictor.
  void set_guess_field(const Field* guesses) { guesses_ = guesses; }

  /// Blending coefficients of the last step.
  const std::vector<double>& alpha() const { return alpha_; }

  std::vector<double> constraint_minima() const;

 private:
  struct Trace {
    State u{};      // u^n
    State F{};      // time-averaged flux
    State U{};      // time-averaged solution
    State Fnc{};    // time-averaged B(u) u
    State node{};   // nodal value next to the face (subcell state)
    State mean{};   // element mean
    std::array<State, kMaxStages> stage{};
  };

  void element_phase(int e, double dt);
  void interface_phase(int i, double dt);
  void update_phase(int e, double dt);
  Trace ghost_trace(const Boundary& b, double x, double dt, const Trace& interior) const;
  State low_flux(const State& ul, const State& ur, bool minus) const;
  State initial_guess(int node, const State& fallback) const;
  double speed(const State& u) const { return system_->max_speed(u); }

  EquationPtr system_;
  Grid1D grid_;
  SolverConfig config_;
  ReferenceOperators ops_;
  std::vector<double> modal_;
  int np_ = 1;
  int n_el_ = 0;
  bool limiter_on_ = false;

  Field u_;
  double t_ = 0.0;
  const Field* guesses_ = nullptr;

  // Per-step buffers.
  Field local_;      // -(dF/dx + B) + S at each node
  std::vector<Trace> left_trace_;   // per element, face e - 1/2
  std::vector<Trace> right_trace_;  // per element, face e + 1/2
  std::vector<double> alpha_;
  Field flux_minus_;  // per interface
  Field flux_plus_;
  std::vector<double> flux_theta_;
  std::vector<double> weight_min_;
  std::vector<double> element_theta_;
  std::vector<int> newton_max_;
  Field u_next_;
};

}  // namespace crkfr
