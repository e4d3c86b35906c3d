#pragma once

// Independent re-derivations of special cases of the scheme, shared by the
// unit tests and the acceptance binary. Each returns the largest deviation
// between the solver and the hand-coded formula.

#include <cmath>
#include <memory>
#include <vector>

#include "crkfr/solver.hpp"
#include "support.hpp"

namespace crkfr::test {

inline SolverConfig periodic_config(int degree, PointKind kind = PointKind::GL) {
  SolverConfig c;
  c.degree = degree;
  c.points = kind;
  c.limiter.enabled = false;
  return c;
}

inline ButcherIMEX forward_euler() {
  ButcherIMEX t;
  t.name = "forward_euler";
  t.s = 1;
  t.A_exp = {0.0};
  t.A_imp = {0.0};
  t.b_exp = {1.0};
  t.b_imp = {1.0};
  t.c_exp = {0.0};
  t.c_imp = {0.0};
  return t;
}

/// N = 0 step on VarAdvectionNC against the two-sided Rusanov finite volume
/// update, over `trials` random periodic fields of `cells` cells.
inline double fv_reduction_deviation(int trials, int cells = 10) {
  double worst = 0.0;
  const double dx = 1.0 / cells;
  // Flux through a face as seen from its left (minus) or right (plus) cell.
  auto face = [](const State& a, const State& b, bool minus) {
    const double lam = std::max(std::abs(a[1]), std::abs(b[1]));
    const double avg = 0.5 * (a[0] + b[0]);
    return State{-0.5 * lam * (b[0] - a[0]) + (minus ? a[1] : b[1]) * avg, -0.5 * lam * (b[1] - a[1])};
  };
  for (int t = 0; t < trials; ++t) {
    Solver s(std::make_shared<VarAdvectionNC>(), Grid1D::uniform(0, 1, cells), periodic_config(0));
    Field u(cells);
    for (auto& v : u) v = {uniform(-1, 1), uniform(0.2, 2.0)};
    s.set_solution(u, 0.0);
    const double dt = s.compute_dt();
    s.advance(dt);
    for (int e = 0; e < cells; ++e) {
      const State& ul = u[(e + cells - 1) % cells];
      const State& uc = u[e];
      const State& ur = u[(e + 1) % cells];
      const State expect = uc - (dt / dx) * (face(uc, ur, true) - face(ul, uc, false));
      worst = std::max(worst, max_abs(s.solution()[e] - expect));
    }
  }
  return worst;
}

/// One forward-Euler stage with GLL points on VarAdvectionNC against the
/// FR-derivative form u - dt (d_FR f + B(u) d_FR u), where d_FR corrects
/// the local derivative at the end nodes only.
inline double gll_form_deviation(int trials, int degree = 3, int cells = 6) {
  const int N = degree, np = N + 1;
  const double dx = 1.0 / cells;
  auto cfg = periodic_config(N, PointKind::GLL);
  cfg.tableau = forward_euler();
  const auto ops = make_operators(PointKind::GLL, N);
  const auto& w = ops.points.weights;
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    Solver s(std::make_shared<VarAdvectionNC>(), Grid1D::uniform(0, 1, cells), cfg);
    Field u(cells * np);
    for (auto& v : u) v = {uniform(-1, 1), uniform(0.2, 2.0)};
    s.set_solution(u, 0.0);
    const double dt = 0.5 * s.compute_dt();
    s.advance(dt);
    auto at = [&](int e, int p) -> const State& { return u[((e + cells) % cells) * np + p]; };
    for (int e = 0; e < cells; ++e) {
      const State &rl = at(e, N), &rr = at(e + 1, 0), &ll = at(e - 1, N), &lr = at(e, 0);
      const double lam_r = std::max(std::abs(rl[1]), std::abs(rr[1]));
      const double lam_l = std::max(std::abs(ll[1]), std::abs(lr[1]));
      const State unum_r = 0.5 * (rl + rr), unum_l = 0.5 * (ll + lr);
      const State fnum_r = (-0.5 * lam_r) * (rr - rl), fnum_l = (-0.5 * lam_l) * (lr - ll);
      for (int p = 0; p <= N; ++p) {
        State du{}, df{};
        for (int q = 0; q <= N; ++q) du += (ops.d(p, q) / dx) * at(e, q);
        if (p == N) {
          du += (1.0 / (w[N] * dx)) * (unum_r - rl);
          df += (1.0 / (w[N] * dx)) * fnum_r;
        }
        if (p == 0) {
          du += (-1.0 / (w[0] * dx)) * (unum_l - lr);
          df += (-1.0 / (w[0] * dx)) * fnum_l;
        }
        const State& up = at(e, p);
        const State expect = up - dt * (df + State{up[1] * du[0], 0.0});
        worst = std::max(worst, max_abs(s.solution()[e * np + p] - expect));
      }
    }
  }
  return worst;
}

/// Amplitude of the mode exp(2 pi i x) of component 0 on [0, 1].
inline double mode_amplitude(const Solver& s) {
  const auto& pts = s.operators().points;
  double a = 0.0, b = 0.0;
  for (int e = 0; e < s.grid().size(); ++e)
    for (int p = 0; p < pts.size(); ++p) {
      const double x = s.node_x(e, p), wq = pts.weights[p] * s.grid().dx[e];
      const double u = s.solution()[e * pts.size() + p][0];
      a += wq * u * std::cos(2 * M_PI * x);
      b += wq * u * std::sin(2 * M_PI * x);
    }
  return 2.0 * std::hypot(a, b);
}

/// Mode amplitudes of sin(2 pi x) under u_t + u_x = -K u over `steps` steps
/// at the advective time step; a failed step ends the history with inf.
inline std::vector<double> stiff_mode_history(double K, bool explicit_source, int steps = 100) {
  auto cfg = periodic_config(3);
  cfg.explicit_source = explicit_source;
  cfg.retry_on_failure = false;
  // with the default absolute tolerance a stage guess within 1e-10 is
  // accepted unchanged, which floors the amplitude near 1e-12
  cfg.implicit.residual_tolerance = 1e-15;
  Solver s(std::make_shared<LinearAdvectionStiff>(1.0, K), Grid1D::uniform(0, 1, 16), cfg);
  s.initialize([](double x) { return State{std::sin(2 * M_PI * x)}; });
  std::vector<double> amp{mode_amplitude(s)};
  const double dt = s.compute_dt();
  for (int k = 0; k < steps; ++k) {
    try {
      s.advance(dt);
    } catch (const SolverError&) {
      amp.push_back(INFINITY);
      break;
    }
    amp.push_back(mode_amplitude(s));
  }
  return amp;
}

}  // namespace crkfr::test
