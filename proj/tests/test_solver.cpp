#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstring>
#include <memory>

#include "crkfr/harness.hpp"
#include "crkfr/kernels.hpp"
#include "crkfr/solver.hpp"
#include "equivalence.hpp"
#include "support.hpp"

using namespace crkfr;

namespace {

using test::periodic_config;

bool bit_equal(const Field& a, const Field& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(State)) == 0;
}

// Real step matrix of a linear scheme, column by column.
Eigen::MatrixXd step_matrix(Solver& s, double dt) {
  const int n = static_cast<int>(s.solution().size());
  Eigen::MatrixXd M(n, n);
  for (int j = 0; j < n; ++j) {
    Field u(n, State{});
    u[j][0] = 1.0;
    s.set_solution(u, 0.0);
    s.advance(dt);
    for (int i = 0; i < n; ++i) M(i, j) = s.solution()[i][0];
  }
  return M;
}

double spectral_radius(const Eigen::MatrixXd& M) {
  Eigen::EigenSolver<Eigen::MatrixXd> es(M, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("CFL table") {
  CHECK(default_cfl(0) == 1.0);
  CHECK(default_cfl(1) == doctest::Approx(1.0 / 3.0));
  CHECK(default_cfl(3) == doctest::Approx(0.103));
  CHECK(default_cfl(9) == doctest::Approx(0.019));
  CHECK_THROWS(default_cfl(10));
}

TEST_CASE("time step rule") {
  auto cfg = periodic_config(1);
  cfg.dt_max = 0.5;
  Solver s(std::make_shared<LinearAdvectionStiff>(1.0, 0.0), Grid1D::uniform(0, 1, 10), cfg);
  s.initialize([](double) { return State{1.0}; });
  CHECK(s.compute_dt() == doctest::Approx(0.03).epsilon(1e-14));

  Solver fast(std::make_shared<LinearAdvectionStiff>(2.0, 0.0), Grid1D::uniform(0, 1, 10), cfg);
  CHECK(fast.compute_dt() == doctest::Approx(0.015).epsilon(1e-14));

  Solver still(std::make_shared<LinearAdvectionStiff>(0.0, 0.0), Grid1D::uniform(0, 1, 10), cfg);
  CHECK(still.compute_dt() == 0.5);
}

TEST_CASE("a zero step leaves the state alone") {
  Solver s(std::make_shared<BurgersStiff>(2, 1e6, 0.9), Grid1D::uniform(0, 1, 8), periodic_config(3));
  s.initialize([](double x) { return State{0.5 + 0.4 * std::sin(2 * M_PI * x)}; });
  const Field before = s.solution();
  s.advance(0.0);
  CHECK(bit_equal(before, s.solution()));
  CHECK(s.time() == 0.0);
}

TEST_CASE("free-stream preservation") {
  struct Case {
    EquationPtr sys;
    State u;
  };
  const ReactiveEuler1D re;
  const TenMoment1D tm0(TenMomentParams{.stiffness = 0.0});
  const std::vector<Case> cases = {
      {std::make_shared<LinearAdvectionStiff>(1.0, 0.0), {0.7}},
      {std::make_shared<BurgersStiff>(2, 0.0, 0.9), {0.7}},
      {std::make_shared<VarAdvectionNC>(), {0.3, 0.8}},
      {std::make_shared<ReactiveEuler1D>(), re.prim_to_cons({1.2, 0.3, 2.0, 0.0})},
      {std::make_shared<TenMoment1D>(TenMomentParams{.stiffness = 0.0}),
       tm0.prim_to_cons({1.0, 0.5, -0.2, 2.0, 0.3, 1.5})},
  };
  for (const auto& c : cases) {
    for (auto kind : {PointKind::GL, PointKind::GLL}) {
      for (int n = 1; n <= 4; ++n) {
        for (bool lim : {false, true}) {
          CAPTURE(c.sys->name());
          CAPTURE(n);
          CAPTURE(lim);
          auto cfg = periodic_config(n, kind);
          cfg.limiter.enabled = lim;
          Solver s(c.sys, Grid1D::uniform(0, 1, 6), cfg);
          s.initialize([&](double) { return c.u; });
          for (int k = 0; k < 3; ++k) s.advance(s.compute_dt());
          for (const auto& u : s.solution()) CHECK(max_abs(u - c.u) <= 1e-13 * std::max(1.0, max_abs(c.u)));
        }
      }
    }
  }
}

TEST_CASE("conservation with and without the limiter") {
  SUBCASE("burgers with a jump") {
    for (bool lim : {false, true}) {
      auto cfg = periodic_config(3);
      cfg.limiter.enabled = lim;
      Solver s(std::make_shared<BurgersStiff>(2, 0.0, 0.9), Grid1D::uniform(0, 1, 32), cfg);
      s.initialize([](double x) { return State{0.5 + std::sin(2 * M_PI * x) + (x > 0.5 ? 1.0 : 0.0)}; });
      const State t0 = discrete_total(s.solution(), s.grid(), s.operators().points);
      double amax = 0.0;
      for (int k = 0; k < 100; ++k) amax = std::max(amax, s.advance(s.compute_dt()).max_alpha);
      const State t1 = discrete_total(s.solution(), s.grid(), s.operators().points);
      CHECK(std::abs(t1[0] - t0[0]) <= 1e-12 * std::abs(t0[0]));
      if (lim) CHECK(amax > 0.0);
    }
  }
  SUBCASE("ten-moment near vacuum, limiter active") {
    auto sys = std::make_shared<TenMoment1D>(TenMomentParams{.stiffness = 0.0});
    auto cfg = periodic_config(3);
    cfg.limiter.enabled = true;
    Solver s(sys, Grid1D::uniform(0, 4, 80), cfg);
    s.initialize([&](double x) {
      // diverging at x = 2, colliding across the periodic seam
      return sys->prim_to_cons({1.0, x < 2.0 ? -4.0 : 4.0, 0.0, 9.0, 7.0, 9.0});
    });
    const State t0 = discrete_total(s.solution(), s.grid(), s.operators().points);
    double theta = 1.0;
    for (int k = 0; k < 100; ++k) {
      const auto d = s.advance(s.compute_dt());
      theta = std::min({theta, d.min_flux_theta, d.min_element_theta});
    }
    const State t1 = discrete_total(s.solution(), s.grid(), s.operators().points);
    for (int k = 0; k < 6; ++k) CHECK(std::abs(t1[k] - t0[k]) <= 1e-12 * std::max(1.0, std::abs(t0[k])));
  }
}

TEST_CASE("stages of a pure source step") {
  const double K = 100.0, dt = 0.01, u0 = 0.7;
  auto cfg = periodic_config(2);
  cfg.tableau = ht112();
  Solver s(std::make_shared<LinearAdvectionStiff>(0.0, K), Grid1D::uniform(0, 1, 4), cfg);
  s.initialize([&](double) { return State{u0}; });
  s.advance(dt);
  const double expect = u0 * (1.0 - K * dt / 2.0) / (1.0 + K * dt / 2.0);
  for (const auto& u : s.solution()) CHECK(u[0] == doctest::Approx(expect).epsilon(1e-14));
}

TEST_CASE("non-conservative product of a linear profile") {
  const double c = 0.5, slope = 2.0;
  for (auto flux : {NconsFlux::Trace, NconsFlux::StageAveraged}) {
    auto cfg = periodic_config(2);
    cfg.ncons_flux = flux;
    cfg.left.kind = cfg.right.kind = BoundaryKind::Extrapolation;
    Solver s(std::make_shared<VarAdvectionNC>(), Grid1D::uniform(0, 1, 5), cfg);
    s.initialize([&](double x) { return State{slope * x + 1.0, c}; });
    const Field u0 = s.solution();
    const double dt = 0.01;
    s.advance(dt);
    for (std::size_t k = 0; k < u0.size(); ++k) {
      CHECK(s.solution()[k][0] == doctest::Approx(u0[k][0] - dt * c * slope).epsilon(1e-13));
      CHECK(s.solution()[k][1] == u0[k][1]);
    }
  }
}

TEST_CASE("N = 0 is the first-order finite volume scheme") {
  SUBCASE("variable advection with random states") { CHECK(test::fv_reduction_deviation(10) <= 1e-13); }
  SUBCASE("burgers two-cell riemann data") {
    Solver s(std::make_shared<BurgersStiff>(2, 0.0, 0.9), Grid1D::uniform(0, 1, 2), periodic_config(0));
    s.set_solution({State{1.0}, State{0.0}}, 0.0);
    const double dt = 0.1, dx = 0.5;
    s.advance(dt);
    // face fluxes 0.75 (1 | 0) and -0.25 (0 | 1, periodic)
    CHECK(s.solution()[0][0] == doctest::Approx(1.0 - dt / dx * (0.75 + 0.25)).epsilon(1e-14));
    CHECK(s.solution()[1][0] == doctest::Approx(0.0 - dt / dx * (-0.25 - 0.75)).epsilon(1e-14));
  }
}

TEST_CASE("GLL operator form of a non-conservative stage") { CHECK(test::gll_form_deviation(20) <= 1e-12); }

TEST_CASE("linear advection step equals its matrix form") {
  // With f = a u the step is u + dt L_FR U, U = sum_i b~_i S_i u and
  // S_i = I + dt sum_j a~_ij L_loc S_j.
  const int N = 3, n = 4, np = N + 1, dim = n * np;
  const double a = 1.0, dx = 1.0 / n;
  const auto ops = make_operators(PointKind::GL, N);
  Eigen::MatrixXd Lloc = Eigen::MatrixXd::Zero(dim, dim), Lfr = Eigen::MatrixXd::Zero(dim, dim);
  for (int e = 0; e < n; ++e) {
    const int up = (e + n - 1) % n;
    for (int p = 0; p < np; ++p) {
      for (int q = 0; q < np; ++q) {
        Lloc(e * np + p, e * np + q) = -a * ops.d(p, q) / dx;
        Lfr(e * np + p, e * np + q) = -a * ops.d(p, q) / dx;
      }
      // upwind flux at the left face minus the element's own trace
      for (int q = 0; q < np; ++q) {
        Lfr(e * np + p, up * np + q) += -a * ops.corr_left[p] * ops.extrap_right[q] / dx;
        Lfr(e * np + p, e * np + q) -= -a * ops.corr_left[p] * ops.extrap_left[q] / dx;
      }
    }
  }
  auto cfg = periodic_config(N);
  Solver s(std::make_shared<LinearAdvectionStiff>(a, 0.0), Grid1D::uniform(0, 1, n), cfg);
  const double dt = s.compute_dt();
  const auto& tab = cfg.tableau;
  std::vector<Eigen::MatrixXd> S;
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < tab.s; ++i) {
    Eigen::MatrixXd Si = Eigen::MatrixXd::Identity(dim, dim);
    for (int j = 0; j < i; ++j) Si += dt * tab.a_exp(i, j) * Lloc * S[j];
    S.push_back(Si);
    U += tab.b_exp[i] * Si;
  }
  const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(dim, dim) + dt * Lfr * U;
  for (int trial = 0; trial < 5; ++trial) {
    Field u(dim);
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i) v(i) = u[i][0] = test::uniform(-1, 1);
    s.set_solution(u, 0.0);
    s.advance(dt);
    const Eigen::VectorXd expect = M * v;
    for (int i = 0; i < dim; ++i) CHECK(std::abs(s.solution()[i][0] - expect(i)) <= 1e-13);
  }
}

TEST_CASE("Fourier stability of the CFL table") {
  for (int N = 0; N <= 9; ++N) {
    CAPTURE(N);
    const int n = 24;
    auto cfg = periodic_config(N);
    Solver s(std::make_shared<LinearAdvectionStiff>(1.0, 0.0), Grid1D::uniform(0, 1, n), cfg);
    const double dx = 1.0 / n;
    CHECK(spectral_radius(step_matrix(s, default_cfl(N) * dx)) <= 1.0 + 1e-10);
    CHECK(spectral_radius(step_matrix(s, 1.05 * default_cfl(N) * dx)) > 1.0 + 1e-10);
  }
  SUBCASE("1/(2N+1) is not stable for N = 3") {
    Solver s(std::make_shared<LinearAdvectionStiff>(1.0, 0.0), Grid1D::uniform(0, 1, 24), periodic_config(3));
    CHECK(spectral_radius(step_matrix(s, (1.0 / 7.0) / 24.0)) > 1.0 + 1e-6);
  }
}

TEST_CASE("stiff linear source: a single mode decays") {
  const auto imex = test::stiff_mode_history(1e4, false);
  REQUIRE(imex.size() == 101);
  for (std::size_t k = 1; k < imex.size(); ++k) CHECK(imex[k] <= imex[k - 1] * (1.0 + 1e-12) + 1e-15 * imex[0]);
  CHECK(imex.back() < 1e-10);

  const auto expl = test::stiff_mode_history(1e4, true);
  bool grew = false;
  for (std::size_t k = 1; k < expl.size(); ++k) grew = grew || !(expl[k] <= expl[0]);
  CHECK(grew);
}

TEST_CASE("blending with alpha = 0 reproduces the unlimited step") {
  auto cfg = periodic_config(3);
  auto sys = std::make_shared<LinearAdvectionStiff>(1.0, 0.0);
  Solver off(sys, Grid1D::uniform(0, 1, 64), cfg);
  cfg.limiter.enabled = true;
  Solver on(sys, Grid1D::uniform(0, 1, 64), cfg);
  auto ic = [](double x) { return State{std::sin(2 * M_PI * x)}; };
  off.initialize(ic);
  on.initialize(ic);
  for (int k = 0; k < 10; ++k) {
    const double dt = off.compute_dt();
    off.advance(dt);
    CHECK(on.advance(dt).max_alpha == 0.0);
  }
  for (std::size_t i = 0; i < on.solution().size(); ++i)
    CHECK(std::abs(on.solution()[i][0] - off.solution()[i][0]) <= 1e-13);
}

namespace {

Solver scenario_solver(const std::string& name, int n_elements, int threads = 1) {
  RunConfig c = scenario_by_name(name).defaults;
  c.n_elements = n_elements;
  c.threads = threads;
  return make_solver(c);
}

void check_admissible_steps(Solver& s, int steps) {
  for (int k = 0; k < steps; ++k) {
    s.step(s.compute_dt());
    for (const auto& u : s.solution()) REQUIRE(s.system().admissible(u));
  }
}

}  // namespace

TEST_CASE("admissibility over consecutive steps") {
  SUBCASE("ten-moment near vacuum") {
    Solver s = scenario_solver("ten_moment_near_vacuum", 100);
    check_admissible_steps(s, 50);
  }
  SUBCASE("reactive euler riemann problem") {
    Solver s = scenario_solver("reactive_euler_riemann", 100);
    check_admissible_steps(s, 50);
  }
}

TEST_CASE("a failed step leaves the state untouched") {
  Solver s = scenario_solver("ten_moment_near_vacuum", 50);
  const Field before = s.solution();
  CHECK_THROWS_AS(s.step(100.0 * s.compute_dt()), SolverError);
  CHECK(bit_equal(before, s.solution()));
  CHECK(s.time() == 0.0);
}

TEST_CASE("results do not depend on threads or kernel variant") {
  auto run = [](int threads) {
    Solver s = scenario_solver("ten_moment_near_vacuum", 60, threads);
    for (int k = 0; k < 20; ++k) s.step(s.compute_dt());
    return s.solution();
  };
  const std::string initial = kernels::active().name;
  const Field one = run(1);
  CHECK(bit_equal(one, run(4)));
  CHECK(bit_equal(one, run(7)));
  for (const auto& v : kernels::available_variants()) {
    REQUIRE(kernels::select(v));
    CHECK(bit_equal(one, run(1)));
  }
  kernels::select(initial);
}
