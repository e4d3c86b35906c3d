#include "crkfr/solver.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "crkfr/kernels.hpp"
#include "crkfr/parallel.hpp"

namespace crkfr {

std::string_view to_string(NconsFlux v) { return v == NconsFlux::Trace ? "trace" : "stage_averaged"; }

NconsFlux parse_ncons_flux(std::string_view name) {
  if (name == "trace" || name == "default") return NconsFlux::Trace;
  if (name == "stage_averaged") return NconsFlux::StageAveraged;
  throw ConfigError("unknown ncons_flux variant '" + std::string(name) + "'");
}

double default_cfl(int degree) {
  if (degree < 0 || degree > kMaxDegree) throw ConfigError("unsupported polynomial degree");
  // Von Neumann limits of the scheme for linear advection with Radau
  // correction and the four-stage explicit tableau, rounded down. They
  // coincide with 1 / (2N + 1) only for N <= 1.
  static constexpr double table[kMaxDegree + 1] = {1.0,   1.0 / 3.0, 0.170, 0.103, 0.069,
                                                    0.050, 0.037,     0.029, 0.023, 0.019};
  return table[degree];
}

namespace {

constexpr int kMaxPoints = kMaxDegree + 1;
using NodalBlock = std::array<State, kMaxPoints>;

double* raw(State* s) { return s->data(); }
const double* raw(const State* s) { return s->data(); }

// sum_p v[p] * u[p]
State dot(const std::vector<double>& v, const State* u, int np) {
  State r{};
  for (int p = 0; p < np; ++p) r += v[p] * u[p];
  return r;
}

}  // namespace

Solver::Solver(EquationPtr system, Grid1D grid, SolverConfig config)
    : system_(std::move(system)), grid_(std::move(grid)), config_(std::move(config)) {
  if (!system_) throw ConfigError("solver needs an equation system");
  if (config_.degree < 0 || config_.degree > kMaxDegree)
    throw ConfigError("polynomial degree must be in [0, " + std::to_string(kMaxDegree) + "]");
  if (config_.tableau.s < 1 || config_.tableau.s > kMaxStages) throw ConfigError("unsupported stage count");
  if (grid_.size() < 1) throw ConfigError("empty grid");
  const bool periodic_l = config_.left.kind == BoundaryKind::Periodic;
  const bool periodic_r = config_.right.kind == BoundaryKind::Periodic;
  if (periodic_l != periodic_r) throw ConfigError("periodic boundaries must be set on both sides");
  if (config_.left.kind == BoundaryKind::Dirichlet && !config_.left.value)
    throw ConfigError("left Dirichlet boundary without a value");
  if (config_.right.kind == BoundaryKind::Dirichlet && !config_.right.value)
    throw ConfigError("right Dirichlet boundary without a value");
  try {
    ops_ = make_operators(config_.points, config_.degree);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  modal_ = nodal_to_modal(ops_.points);
  np_ = ops_.size();
  n_el_ = grid_.size();
  // At N = 0 the element is its own single subcell, so only the pure
  // low-order mode (finite volume with a backward-Euler source) is
  // meaningful.
  limiter_on_ = config_.limiter.enabled && (config_.degree >= 1 || config_.limiter.pure_low_order);

  const std::size_t nodes = static_cast<std::size_t>(n_el_) * np_;
  u_.assign(nodes, State{});
  local_.assign(nodes, State{});
  u_next_.assign(nodes, State{});
  left_trace_.resize(n_el_);
  right_trace_.resize(n_el_);
  alpha_.assign(n_el_, 0.0);
  element_theta_.assign(n_el_, 1.0);
  newton_max_.assign(n_el_, 0);
  flux_minus_.assign(n_el_ + 1, State{});
  flux_plus_.assign(n_el_ + 1, State{});
  flux_theta_.assign(n_el_ + 1, 1.0);
  weight_min_.assign(n_el_ + 1, 1.0);
}

void Solver::set_solution(Field u, double t) {
  if (u.size() != u_.size()) throw ConfigError("solution size does not match the mesh");
  u_ = std::move(u);
  t_ = t;
}

void Solver::initialize(const std::function<State(double)>& fn, double t) {
  u_ = interpolate(grid_, ops_.points, fn);
  t_ = t;
}

double Solver::cfl() const { return config_.cfl_override > 0.0 ? config_.cfl_override : default_cfl(config_.degree); }

double Solver::compute_dt() const {
  double inv = 0.0;
  for (int e = 0; e < n_el_; ++e) {
    // Nodal speeds too: with variable coefficients the mean can
    // underestimate the fastest wave in the element.
    double sigma = speed(element_mean(u_, ops_.points, e));
    for (int p = 0; p < np_; ++p) {
      try {
        sigma = std::max(sigma, speed(u_[static_cast<std::size_t>(e) * np_ + p]));
      } catch (const AdmissibilityError&) {
      }
    }
    inv = std::max(inv, sigma / grid_.dx[e]);
  }
  if (!(inv > 0.0)) return config_.dt_max;
  return std::min(config_.dt_max, config_.cfl_safety * cfl() / inv);
}

std::vector<double> Solver::constraint_minima() const {
  const auto& cons = system_->constraints();
  std::vector<double> mins(cons.size(), std::numeric_limits<double>::infinity());
  for (const State& u : u_)
    for (std::size_t k = 0; k < cons.size(); ++k) mins[k] = std::min(mins[k], cons[k].evaluate(u));
  return mins;
}

State Solver::initial_guess(int node, const State& fallback) const {
  if (!guesses_) return fallback;
  const State& g = (*guesses_)[node];
  return system_->has_homogeneous_guess() ? system_->homogeneous_guess(g) : g;
}

State Solver::low_flux(const State& ul, const State& ur, bool minus) const {
  const State fl = system_->flux(ul), fr = system_->flux(ur);
  const double lambda = std::max(speed(ul), speed(ur));
  State f = 0.5 * (fl + fr) - (0.5 * lambda) * (ur - ul);
  if (system_->has_nonconservative()) f += system_->ncons_matvec(minus ? ul : ur, 0.5 * (ul + ur));
  return f;
}

// ---------------------------------------------------------------------------
// Phase 1: inner stages, time averages and traces of one element.

void Solver::element_phase(int e, double dt) {
  const auto& tab = config_.tableau;
  const int s = tab.s;
  const int np = np_;
  const EquationSystem& sys = *system_;
  const auto& K = kernels::active();
  const double inv_dx = 1.0 / grid_.dx[e];
  const bool source = sys.has_source();
  const bool ncons = sys.has_nonconservative();
  const State* un = &u_[static_cast<std::size_t>(e) * np];
  const int nv = sys.n_vars();

  // Stage buffers are written before they are read; skip zeroing them.
  std::array<NodalBlock, kMaxStages> ust, fv, R, Rb, src;
  NodalBlock tmp{}, rhs{};
  int newton_max = 0;

  for (int i = 0; i < s; ++i) {
    // rhs = u^n - dt sum_j a~_ij R_j + dt sum_j a_ij S_j
    std::array<double, 2 * kMaxStages> coeffs{};
    std::array<const double*, 2 * kMaxStages> vecs{};
    int m = 0;
    for (int j = 0; j < i; ++j) {
      const double ae = tab.a_exp(i, j);
      if (ae != 0.0) {
        coeffs[m] = -dt * ae;
        vecs[m++] = raw(R[j].data());
      }
      if (source) {
        const double as = config_.explicit_source ? ae : tab.a_imp(i, j);
        if (as != 0.0) {
          coeffs[m] = dt * as;
          vecs[m++] = raw(src[j].data());
        }
      }
    }
    K.lincomb(raw(rhs.data()), raw(un), coeffs.data(), vecs.data(), m, static_cast<std::size_t>(np) * kMaxVars);

    const double aii = tab.a_imp(i, i);
    if (source && !config_.explicit_source && aii != 0.0) {
      const double gamma = dt * aii;
      const double ts = t_ + tab.c_imp[i] * dt;
      for (int p = 0; p < np; ++p) {
        StageSolveRequest req;
        req.rhs = rhs[p];
        req.t = ts;
        req.x = node_x(e, p);
        req.gamma = gamma;
        req.guess = initial_guess(e * np + p, rhs[p]);
        req.previous = i == 0 ? un[p] : ust[i - 1][p];
        const StageSolveResult res = sys.solve_source_stage(req, config_.implicit);
        if (!res.converged)
          throw StageSolveError("implicit stage solve did not converge (element " + std::to_string(e) + ", point " +
                                    std::to_string(p) + ", stage " + std::to_string(i) +
                                    ", residual " + std::to_string(res.residual) + ")",
                                e, p, res.residual);
        newton_max = std::max(newton_max, res.iterations);
        ust[i][p] = res.u;
        src[i][p] = (1.0 / gamma) * (res.u - rhs[p]);
      }
    } else {
      ust[i] = rhs;
      if (source) {
        const double ts = t_ + (config_.explicit_source ? tab.c_exp[i] : tab.c_imp[i]) * dt;
        for (int p = 0; p < np; ++p) src[i][p] = sys.source(ts, node_x(e, p), ust[i][p]);
      }
    }

    // Stage fluxes enter only through a~(:, i) and b~_i; both are zero for
    // the first stage of ssp3_imex_433.
    bool used = tab.b_exp[i] != 0.0;
    for (int j = i + 1; j < s && !used; ++j) used = tab.a_exp(j, i) != 0.0;
    if (!used) continue;

    for (int p = 0; p < np; ++p) fv[i][p] = sys.flux(ust[i][p]);
    K.small_matmul(ops_.diff.data(), np, raw(fv[i].data()), raw(R[i].data()), kMaxVars, nv);
    for (int p = 0; p < np; ++p) R[i][p] = inv_dx * R[i][p];
    if (ncons) {
      K.small_matmul(ops_.diff.data(), np, raw(ust[i].data()), raw(tmp.data()), kMaxVars, nv);
      for (int p = 0; p < np; ++p) {
        Rb[i][p] = sys.ncons_matvec(ust[i][p], inv_dx * tmp[p]);
        R[i][p] += Rb[i][p];
      }
    }
  }

  // Time averages.
  NodalBlock F{}, U{}, B{}, S{};
  for (int i = 0; i < s; ++i) {
    const double bt = tab.b_exp[i];
    const double bs = config_.explicit_source ? tab.b_exp[i] : tab.b_imp[i];
    if (bt != 0.0) {
      K.axpy(bt, raw(fv[i].data()), raw(F.data()), static_cast<std::size_t>(np) * kMaxVars);
      K.axpy(bt, raw(ust[i].data()), raw(U.data()), static_cast<std::size_t>(np) * kMaxVars);
      if (ncons) K.axpy(bt, raw(Rb[i].data()), raw(B.data()), static_cast<std::size_t>(np) * kMaxVars);
    }
    if (source && bs != 0.0) K.axpy(bs, raw(src[i].data()), raw(S.data()), static_cast<std::size_t>(np) * kMaxVars);
  }
  K.small_matmul(ops_.diff.data(), np, raw(F.data()), raw(tmp.data()), kMaxVars, nv);
  State* loc = &local_[static_cast<std::size_t>(e) * np];
  for (int p = 0; p < np; ++p) loc[p] = S[p] - (inv_dx * tmp[p] + B[p]);

  // Traces.
  Trace& L = left_trace_[e];
  Trace& Rt = right_trace_[e];
  L.u = dot(ops_.extrap_left, un, np);
  Rt.u = dot(ops_.extrap_right, un, np);
  L.F = dot(ops_.extrap_left, F.data(), np);
  Rt.F = dot(ops_.extrap_right, F.data(), np);
  L.U = dot(ops_.extrap_left, U.data(), np);
  Rt.U = dot(ops_.extrap_right, U.data(), np);
  L.Fnc = State{};
  Rt.Fnc = State{};
  // Stage traces are only read by the non-conservative interface terms.
  for (int i = 0; i < s && ncons; ++i) {
    if (tab.b_exp[i] == 0.0) continue;
    const State ul = dot(ops_.extrap_left, ust[i].data(), np);
    const State ur = dot(ops_.extrap_right, ust[i].data(), np);
    L.stage[i] = ul;
    Rt.stage[i] = ur;
    L.Fnc += tab.b_exp[i] * sys.ncons_matvec(ul, ul);
    Rt.Fnc += tab.b_exp[i] * sys.ncons_matvec(ur, ur);
  }
  L.node = un[0];
  Rt.node = un[np - 1];
  L.mean = Rt.mean = element_mean(u_, ops_.points, e);
  newton_max_[e] = newton_max;

  if (limiter_on_) {
    if (config_.limiter.pure_low_order) {
      alpha_[e] = 1.0;
    } else {
      std::array<double, kMaxPoints> q{};
      for (int p = 0; p < np; ++p) q[p] = indicator_value(sys, un[p], config_.limiter);
      alpha_[e] = smoothness_alpha(std::span<const double>(q.data(), np), modal_, config_.limiter);
    }
  } else {
    alpha_[e] = 0.0;
  }
}

Solver::Trace Solver::ghost_trace(const Boundary& b, double x, double dt, const Trace& interior) const {
  if (b.kind != BoundaryKind::Dirichlet) return interior;
  const auto& tab = config_.tableau;
  Trace g;
  g.u = b.value(t_, x);
  g.node = g.u;
  g.mean = g.u;
  for (int i = 0; i < tab.s; ++i) {
    const State ui = b.value(t_ + tab.c_exp[i] * dt, x);
    g.stage[i] = ui;
    if (tab.b_exp[i] != 0.0) {
      g.U += tab.b_exp[i] * ui;
      g.F += tab.b_exp[i] * system_->flux(ui);
      if (system_->has_nonconservative()) g.Fnc += tab.b_exp[i] * system_->ncons_matvec(ui, ui);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Phase 2: numerical fluxes at interface i (between elements i - 1 and i).

void Solver::interface_phase(int i, double dt) {
  const EquationSystem& sys = *system_;
  const bool periodic = config_.left.kind == BoundaryKind::Periodic;
  const int el = i - 1, er = i;
  const bool has_l = el >= 0, has_r = er < n_el_;

  Trace Lt, Rt;
  if (has_l)
    Lt = right_trace_[el];
  else if (periodic)
    Lt = right_trace_[n_el_ - 1];
  else
    Lt = ghost_trace(config_.left, grid_.x_lo, dt, left_trace_[0]);
  if (has_r)
    Rt = left_trace_[er];
  else if (periodic)
    Rt = left_trace_[0];
  else
    Rt = ghost_trace(config_.right, grid_.x_hi, dt, right_trace_[n_el_ - 1]);

  double lambda;
  try {
    lambda = std::max(speed(Lt.u), speed(Rt.u));
  } catch (const AdmissibilityError&) {
    lambda = std::max(speed(Lt.node), speed(Rt.node));
  }
  const State w = sys.dissipation_weights(Lt.mean, Rt.mean, dt);
  double wmin = 1.0;
  for (int k = 0; k < sys.n_vars(); ++k) wmin = std::min(wmin, w[k]);
  weight_min_[i] = wmin;

  State dU = Rt.U - Lt.U;
  for (int k = 0; k < kMaxVars; ++k) dU[k] *= w[k];
  const State Fnum = 0.5 * (Lt.F + Rt.F) - (0.5 * lambda) * dU;
  State Fm = Fnum, Fp = Fnum;
  if (sys.has_nonconservative()) {
    if (config_.ncons_flux == NconsFlux::Trace) {
      const State Unum = 0.5 * (Lt.U + Rt.U);
      Fm += sys.ncons_matvec(Lt.u, Unum);
      Fp += sys.ncons_matvec(Rt.u, Unum);
    } else {
      const auto& tab = config_.tableau;
      for (int j = 0; j < tab.s; ++j) {
        if (tab.b_exp[j] == 0.0) continue;
        const State unum = 0.5 * (Lt.stage[j] + Rt.stage[j]);
        Fm += tab.b_exp[j] * sys.ncons_matvec(Lt.stage[j], unum);
        Fp += tab.b_exp[j] * sys.ncons_matvec(Rt.stage[j], unum);
      }
    }
  }

  double theta = 1.0;
  if (limiter_on_ && np_ == 1) {
    Fm = low_flux(Lt.node, Rt.node, true);
    Fp = low_flux(Lt.node, Rt.node, false);
  } else if (limiter_on_) {
    const double al = has_l ? alpha_[el] : (periodic ? alpha_[n_el_ - 1] : alpha_[0]);
    const double ar = has_r ? alpha_[er] : (periodic ? alpha_[0] : alpha_[n_el_ - 1]);
    const double a = 0.5 * (al + ar);
    const State lo_m = low_flux(Lt.node, Rt.node, true);
    const State lo_p = low_flux(Lt.node, Rt.node, false);
    const State bm = convex(1.0 - a, Fm, lo_m);
    const State bp = convex(1.0 - a, Fp, lo_p);

    const int np = np_;
    const auto& w8 = ops_.points.weights;
    InterfaceSubcell left, right;
    const int le = has_l ? el : (periodic ? n_el_ - 1 : -1);
    const int re = has_r ? er : (periodic ? 0 : -1);
    if (le >= 0) {
      left.present = true;
      left.u = u_[static_cast<std::size_t>(le) * np + np - 1];
      left.width = w8[np - 1] * grid_.dx[le];
      left.inner_flux = low_flux(u_[static_cast<std::size_t>(le) * np + np - 2], left.u, false);
    }
    if (re >= 0) {
      right.present = true;
      right.u = u_[static_cast<std::size_t>(re) * np];
      right.width = w8[0] * grid_.dx[re];
      right.inner_flux = low_flux(right.u, u_[static_cast<std::size_t>(re) * np + 1], true);
    }
    const InterfaceLimitResult lim = flux_limit_interface(sys, left, right, bm, bp, lo_m, lo_p, dt);
    Fm = lim.flux_minus;
    Fp = lim.flux_plus;
    theta = lim.theta;
  }
  flux_minus_[i] = Fm;
  flux_plus_[i] = Fp;
  flux_theta_[i] = theta;
}

// ---------------------------------------------------------------------------
// Phase 3: high-order update, subcell low-order update, blending and the
// element contraction.

void Solver::update_phase(int e, double dt) {
  const EquationSystem& sys = *system_;
  const int np = np_;
  const auto& K = kernels::active();
  const double inv_dx = 1.0 / grid_.dx[e];
  const std::size_t base = static_cast<std::size_t>(e) * np;
  const State* un = &u_[base];
  const State* loc = &local_[base];
  State* out = &u_next_[base];

  const Trace& Lt = left_trace_[e];
  const Trace& Rt = right_trace_[e];
  const State jump_r = flux_minus_[e + 1] - (Rt.F + Rt.Fnc);
  const State jump_l = flux_plus_[e] - (Lt.F + Lt.Fnc);

  NodalBlock high{};
  for (int p = 0; p < np; ++p)
    high[p] = un[p] + dt * loc[p] - (dt * inv_dx) * (ops_.corr_right[p] * jump_r + ops_.corr_left[p] * jump_l);

  element_theta_[e] = 1.0;
  if (!limiter_on_) {
    std::copy(high.begin(), high.begin() + np, out);
    return;
  }

  // Subface fluxes: face q sits between subcells q - 1 and q.
  std::array<State, kMaxPoints + 1> face_m{}, face_p{};
  face_p[0] = flux_plus_[e];
  face_m[np] = flux_minus_[e + 1];
  for (int q = 1; q < np; ++q) {
    face_m[q] = low_flux(un[q - 1], un[q], true);
    face_p[q] = low_flux(un[q - 1], un[q], false);
  }
  NodalBlock low{};
  const auto& w = ops_.points.weights;
  for (int p = 0; p < np; ++p) {
    const State evolved = un[p] - (dt * inv_dx / w[p]) * (face_m[p + 1] - face_p[p]);
    if (!sys.has_source()) {
      low[p] = evolved;
    } else if (config_.explicit_source) {
      low[p] = evolved + dt * sys.source(t_, node_x(e, p), un[p]);
    } else {
      StageSolveRequest req;
      req.rhs = evolved;
      req.t = t_ + dt;
      req.x = node_x(e, p);
      req.gamma = dt;
      req.guess = initial_guess(static_cast<int>(base) + p, evolved);
      req.previous = un[p];
      const StageSolveResult res = sys.solve_source_stage(req, config_.implicit);
      if (!res.converged)
        throw StageSolveError("low-order implicit source solve did not converge (element " + std::to_string(e) +
                                  ", point " + std::to_string(p) + ", residual " + std::to_string(res.residual) + ")",
                              e, p, res.residual);
      low[p] = res.u;
    }
    if (!sys.admissible(low[p]))
      throw AdmissibilityError("low-order subcell update is not admissible (element " + std::to_string(e) +
                               ", point " + std::to_string(p) + ")");
  }

  K.blend(alpha_[e], raw(high.data()), raw(low.data()), raw(out), static_cast<std::size_t>(np) * kMaxVars);
  if (!sys.constraints().empty())
    element_theta_[e] = final_admissibility_limit(sys, std::span<State>(out, np), std::span<const State>(low.data(), np));
}

StepDiagnostics Solver::advance(double dt) {
  StepDiagnostics d;
  d.dt = dt;
  if (dt == 0.0) {
    d.min_constraints = constraint_minima();
    return d;
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) throw SolverError("invalid time step " + std::to_string(dt));
  const int threads = config_.threads;
  parallel_for(n_el_, threads, [&](int e) { element_phase(e, dt); });
  parallel_for(n_el_ + 1, threads, [&](int i) { interface_phase(i, dt); });
  parallel_for(n_el_, threads, [&](int e) { update_phase(e, dt); });

  const EquationSystem& sys = *system_;
  for (std::size_t k = 0; k < u_next_.size(); ++k) {
    if (!all_finite(u_next_[k]))
      throw SolverError("non-finite solution at element " + std::to_string(k / np_) + ", point " +
                        std::to_string(k % np_));
    for (const auto& c : sys.constraints())
      if (!c.satisfied(u_next_[k]))
        throw AdmissibilityError("inadmissible solution at element " + std::to_string(k / np_) + ", point " +
                                 std::to_string(k % np_) + ": " + c.name + " = " +
                                 std::to_string(c.evaluate(u_next_[k])));
  }

  u_.swap(u_next_);
  t_ += dt;

  for (int e = 0; e < n_el_; ++e) {
    d.max_alpha = std::max(d.max_alpha, alpha_[e]);
    d.min_element_theta = std::min(d.min_element_theta, element_theta_[e]);
    d.newton_iterations_max = std::max(d.newton_iterations_max, newton_max_[e]);
  }
  for (int i = 0; i <= n_el_; ++i) {
    d.min_flux_theta = std::min(d.min_flux_theta, flux_theta_[i]);
    d.min_dissipation_weight = std::min(d.min_dissipation_weight, weight_min_[i]);
  }
  d.min_constraints = constraint_minima();
  return d;
}

StepDiagnostics Solver::step(double dt) {
  try {
    return advance(dt);
  } catch (const SolverError&) {
    if (!config_.retry_on_failure) throw;
  }
  StepDiagnostics d = advance(0.5 * dt);
  d.retries = 1;
  return d;
}

}  // namespace crkfr
