#include "crkfr/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "crkfr/tableau.hpp"

namespace crkfr {

double RunResult::dt_min() const {
  double v = std::numeric_limits<double>::infinity();
  for (const auto& s : steps) v = std::min(v, s.dt);
  return steps.empty() ? 0.0 : v;
}

double RunResult::dt_max() const {
  double v = 0.0;
  for (const auto& s : steps) v = std::max(v, s.dt);
  return v;
}

std::vector<double> RunResult::node_x() const {
  std::vector<double> xs;
  xs.reserve(solution.size());
  for (int e = 0; e < grid.size(); ++e)
    for (double xi : points.nodes) xs.push_back(grid.x(e, xi));
  return xs;
}

namespace {

// The same system with the source switched off.
class Homogeneous final : public EquationSystem {
 public:
  explicit Homogeneous(EquationPtr inner) : inner_(std::move(inner)) { constraints_ = inner_->constraints(); }
  std::string name() const override { return inner_->name() + "_homogeneous"; }
  int n_vars() const override { return inner_->n_vars(); }
  std::vector<std::string> variable_names() const override { return inner_->variable_names(); }
  State flux(const State& u) const override { return inner_->flux(u); }
  bool has_nonconservative() const override { return inner_->has_nonconservative(); }
  State ncons_matvec(const State& u, const State& v) const override { return inner_->ncons_matvec(u, v); }
  double max_speed(const State& u) const override { return inner_->max_speed(u); }
  double indicator_variable(const State& u) const override { return inner_->indicator_variable(u); }
  State prim_to_cons(const State& p) const override { return inner_->prim_to_cons(p); }
  State cons_to_prim(const State& u) const override { return inner_->cons_to_prim(u); }

 private:
  EquationPtr inner_;
};

std::string at_time(const std::exception& e, double t) {
  return std::string(e.what()) + " [t = " + format_double(t) + "]";
}

// Rethrows a solver failure with the simulation time attached, keeping its
// type.
[[noreturn]] void rethrow_with_time(double t) {
  try {
    throw;
  } catch (const StageSolveError& e) {
    throw StageSolveError(at_time(e, t), e.element(), e.point(), e.residual());
  } catch (const AdmissibilityError& e) {
    throw AdmissibilityError(at_time(e, t));
  } catch (const SolverError& e) {
    throw SolverError(at_time(e, t));
  }
}

void merge_minima(std::vector<double>& into, const std::vector<double>& v) {
  if (into.empty()) {
    into = v;
    return;
  }
  for (std::size_t k = 0; k < v.size() && k < into.size(); ++k) into[k] = std::min(into[k], v[k]);
}

StepRecord record(const Solver& s, const StepDiagnostics& d) {
  StepRecord r;
  r.t = s.time();
  r.dt = d.dt;
  r.retries = d.retries;
  r.max_alpha = d.max_alpha;
  r.min_flux_theta = d.min_flux_theta;
  r.min_element_theta = d.min_element_theta;
  r.min_dissipation_weight = d.min_dissipation_weight;
  r.newton_iterations_max = d.newton_iterations_max;
  r.min_constraints = d.min_constraints;
  return r;
}

RunResult start_result(const RunConfig& config, const Solver& solver) {
  RunResult r;
  r.config = config;
  r.system = solver.system_ptr();
  r.grid = solver.grid();
  r.points = solver.operators().points;
  for (const auto& c : solver.system().constraints()) r.constraint_names.push_back(c.name);
  r.min_constraint_values = solver.constraint_minima();
  r.initial_total = discrete_total(solver.solution(), r.grid, r.points);
  return r;
}

void finish_result(RunResult& r, const Solver& solver, double wall) {
  r.solution = solver.solution();
  r.t = solver.time();
  r.wall_seconds = wall;
  r.final_total = discrete_total(r.solution, r.grid, r.points);
  r.conservation_drift = max_abs(r.final_total - r.initial_total);
}

double next_dt(const Solver& solver, double t_final) {
  const double t = solver.time();
  double dt = solver.compute_dt();
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError("no usable time step at t = " + format_double(t));
  if (t + dt >= t_final || t_final - (t + dt) < 1e-12 * std::max(1.0, std::abs(t_final))) dt = t_final - t;
  return dt;
}

bool finished(const Solver& solver, double t_final) {
  return solver.time() >= t_final - 1e-14 * std::max(1.0, std::abs(t_final));
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

}  // namespace

Solver make_solver(const RunConfig& config) {
  return make_solver(config, make_equation(config.equation, config.equation_params));
}

Solver make_solver(const RunConfig& config, EquationPtr system) {
  validate(config);
  SolverConfig sc;
  sc.degree = config.degree;
  sc.points = config.points;
  sc.tableau = tableau_by_name(config.time_scheme);
  sc.cfl_safety = config.cfl_safety;
  sc.cfl_override = config.cfl_override;
  sc.dt_max = config.dt_max;
  sc.ncons_flux = config.ncons_flux;
  sc.limiter = config.limiter;
  sc.implicit = config.implicit;
  sc.explicit_source = config.explicit_source;
  sc.threads = config.threads;
  sc.left.kind = config.left_bc;
  sc.right.kind = config.right_bc;
  if (config.left_bc == BoundaryKind::Dirichlet || config.right_bc == BoundaryKind::Dirichlet) {
    if (config.scenario.empty()) throw ConfigError("Dirichlet boundaries need a scenario");
    const Scenario& sc_def = scenario_by_name(config.scenario);
    if (!sc_def.boundary) throw ConfigError("scenario '" + config.scenario + "' has no boundary data");
    auto fn = [bnd = sc_def.boundary, system](double t, double x) { return bnd(*system, t, x); };
    if (config.left_bc == BoundaryKind::Dirichlet) sc.left.value = fn;
    if (config.right_bc == BoundaryKind::Dirichlet) sc.right.value = fn;
  }
  Solver solver(system, Grid1D::uniform(config.x_lo, config.x_hi, config.n_elements), sc);
  if (!config.scenario.empty()) {
    const Scenario& s = scenario_by_name(config.scenario);
    solver.initialize([&](double x) { return s.initial(*system, x); });
  }
  return solver;
}

RunResult run(const RunConfig& config, const RunOptions& options) {
  if (config.guess_strategy == GuessStrategy::HomogeneousThreshold) return two_pass_driver(config, options);
  if (config.scenario.empty()) throw ConfigError("a run needs a scenario for its initial data");
  const auto t0 = Clock::now();
  Solver solver = make_solver(config);
  RunResult r = start_result(config, solver);
  while (!finished(solver, config.t_final)) {
    StepDiagnostics d;
    try {
      d = solver.step(next_dt(solver, config.t_final));
    } catch (const SolverError&) {
      rethrow_with_time(solver.time());
    }
    r.steps.push_back(record(solver, d));
    merge_minima(r.min_constraint_values, d.min_constraints);
    if (options.on_step) options.on_step(solver, d);
  }
  finish_result(r, solver, seconds_since(t0));
  return r;
}

RunResult two_pass_driver(const RunConfig& config, const RunOptions& options) {
  if (config.scenario.empty()) throw ConfigError("a run needs a scenario for its initial data");
  const auto t0 = Clock::now();
  const EquationPtr full_sys = make_equation(config.equation, config.equation_params);
  if (!full_sys->has_homogeneous_guess())
    throw ConfigError("equation '" + config.equation + "' has no homogeneous initial-guess hook");
  const EquationPtr homo_sys = std::make_shared<Homogeneous>(full_sys);

  RunConfig homo_cfg = config;
  if (config.homogeneous_pass == HomogeneousPass::FirstOrder) {
    homo_cfg.limiter.enabled = true;
    homo_cfg.limiter.pure_low_order = true;
  }
  Solver homo = make_solver(homo_cfg, homo_sys);
  Solver full = make_solver(config, full_sys);
  RunResult r = start_result(config, full);

  while (!finished(full, config.t_final)) {
    double dt = std::min(next_dt(full, config.t_final), next_dt(homo, config.t_final));
    const Field homo_saved = homo.solution();
    const double t_saved = homo.time();
    StepDiagnostics d;
    int retries = 0;
    for (;;) {
      try {
        homo.advance(dt);
        full.set_guess_field(&homo.solution());
        d = full.advance(dt);
        full.set_guess_field(nullptr);
        break;
      } catch (const SolverError&) {
        full.set_guess_field(nullptr);
        homo.set_solution(homo_saved, t_saved);
        if (retries == 1) rethrow_with_time(full.time());
        ++retries;
        dt *= 0.5;
      }
    }
    d.retries = retries;
    r.steps.push_back(record(full, d));
    merge_minima(r.min_constraint_values, d.min_constraints);
    if (options.on_step) options.on_step(full, d);
  }
  finish_result(r, full, seconds_since(t0));
  return r;
}

RunResult reference_fv_solve(const RunConfig& config, int cells) {
  if (cells < 10) throw ConfigError("the reference needs at least 10 cells");
  RunConfig c = config;
  c.degree = 0;
  c.points = PointKind::GL;
  c.n_elements = cells;
  c.cfl_override = 0.0;
  // A coarse run may use C_s > 1; the first-order scheme is only stable
  // below its CFL limit.
  c.cfl_safety = RunConfig{}.cfl_safety;
  // With admissibility constraints the first-order scheme is the subcell
  // update (finite volume plus a backward-Euler source): the weights of a
  // multi-stage implicit tableau can flip the sign of a stiffly decaying
  // component.
  const bool constrained = !make_equation(c.equation, c.equation_params)->constraints().empty();
  c.limiter.enabled = constrained;
  c.limiter.pure_low_order = constrained;
  return run(c);
}

State evaluate(const Field& u, const Grid1D& grid, const SolutionPoints& points, double x) {
  const int n = grid.size();
  int e = static_cast<int>(std::upper_bound(grid.x_left.begin(), grid.x_left.end(), x) - grid.x_left.begin()) - 1;
  e = std::clamp(e, 0, n - 1);
  const double xi = (x - grid.x_left[e]) / grid.dx[e];
  const std::vector<double> l = lagrange_values(points.nodes, xi);
  State v{};
  const std::size_t base = static_cast<std::size_t>(e) * points.size();
  for (int p = 0; p < points.size(); ++p) v += l[p] * u[base + p];
  return v;
}

ErrorNorms error_norms(const Field& u, const Grid1D& grid, const SolutionPoints& points,
                       const std::function<State(double)>& exact, int var) {
  const SolutionPoints quad = solution_points(PointKind::GL, points.degree + 1);
  std::vector<std::vector<double>> basis;
  for (double xq : quad.nodes) basis.push_back(lagrange_values(points.nodes, xq));
  ErrorNorms n;
  for (int e = 0; e < grid.size(); ++e) {
    const std::size_t base = static_cast<std::size_t>(e) * points.size();
    for (int q = 0; q < quad.size(); ++q) {
      double uh = 0.0;
      for (int p = 0; p < points.size(); ++p) uh += basis[q][p] * u[base + p][var];
      const double err = std::abs(uh - exact(grid.x(e, quad.nodes[q]))[var]);
      const double w = quad.weights[q] * grid.dx[e];
      n.l1 += w * err;
      n.l2 += w * err * err;
      n.linf = std::max(n.linf, err);
    }
  }
  n.l2 = std::sqrt(n.l2);
  return n;
}

std::vector<ConvergenceRow> convergence_study(const RunConfig& base, const std::vector<int>& meshes) {
  if (meshes.size() < 3) throw ConfigError("a convergence study needs at least three meshes");
  for (std::size_t i = 1; i < meshes.size(); ++i)
    if (meshes[i] != 2 * meshes[i - 1]) throw ConfigError("meshes must refine by a factor of 2");
  const Scenario& s = scenario_by_name(base.scenario);
  if (!s.exact) throw ConfigError("scenario '" + base.scenario + "' has no exact solution");

  std::vector<ConvergenceRow> rows;
  for (int m : meshes) {
    RunConfig c = base;
    c.n_elements = m;
    const RunResult r = run(c);
    ConvergenceRow row;
    row.n_elements = m;
    row.h = (c.x_hi - c.x_lo) / m;
    row.error = error_norms(r.solution, r.grid, r.points,
                            [&](double x) { return s.exact(*r.system, r.t, x); })
                    .l2;
    if (!rows.empty()) {
      const ConvergenceRow& prev = rows.back();
      constexpr double zero = 1e-14;
      if (row.error <= zero && prev.error <= zero)
        row.exact = true;
      else
        row.order = std::log2(prev.error / row.error);
    } else {
      row.exact = row.error <= 1e-14;
    }
    rows.push_back(row);
  }
  return rows;
}

double l1_distance_to_reference(const RunResult& run, const RunResult& reference, int var) {
  double sum = 0.0;
  for (int e = 0; e < reference.grid.size(); ++e) {
    const double xc = reference.grid.x(e, 0.5);
    const double v = evaluate(run.solution, run.grid, run.points, xc)[var];
    const double ref = element_mean(reference.solution, reference.points, e)[var];
    sum += reference.grid.dx[e] * std::abs(v - ref);
  }
  return sum;
}

double crossing_location(const RunResult& run, int var, double level) {
  const std::vector<double> xs = run.node_x();
  for (std::size_t k = xs.size() - 1; k-- > 0;) {
    const double a = run.solution[k][var] - level;
    const double b = run.solution[k + 1][var] - level;
    if ((a >= 0.0) != (b >= 0.0)) return xs[k] + (xs[k + 1] - xs[k]) * a / (a - b);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace crkfr
