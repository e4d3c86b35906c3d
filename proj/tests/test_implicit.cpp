#include <doctest.h>

#include <cmath>

#include "crkfr/equations.hpp"
#include "crkfr/implicit.hpp"
#include "support.hpp"

using namespace crkfr;

namespace {

StageSolveRequest request(State rhs, double gamma, State guess) {
  StageSolveRequest r;
  r.rhs = rhs;
  r.gamma = gamma;
  r.guess = guess;
  r.previous = rhs;
  return r;
}

}  // namespace

TEST_CASE("explicit stage returns the right-hand side") {
  BurgersStiff bs(2, 1e6, 0.9);
  const auto r = solve_stage(bs, request({0.3}, 0.0, {0.7}), {});
  CHECK(r.converged);
  CHECK(r.u[0] == 0.3);
}

TEST_CASE("linear decay solves in one iteration") {
  LinearAdvectionStiff la(1.0, 100.0);
  const auto r = solve_stage(la, request({2.0}, 0.01, {2.0}), {});
  CHECK(r.converged);
  CHECK(r.u[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.iterations == 1);
  CHECK(r.residual <= 1e-10);

  JinXin jx(3.0, 1e-12);
  const auto q = solve_stage(jx, request({2.0, 5.0}, 0.01, {2.0, 5.0}), {});
  CHECK(q.converged);
  CHECK(q.iterations <= 2);
}

TEST_CASE("a root of the source is a fixed point") {
  BurgersStiff bs(2, 1e6, 0.9);
  const auto r = solve_stage(bs, request({1.0}, 0.01, {1.0}), {});
  CHECK(r.converged);
  CHECK(r.u[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("non-convergence is reported, not thrown") {
  BurgersStiff bs(2, 1e6, 0.9);
  ImplicitConfig c;
  c.max_iterations = 1;
  c.step_tolerance = 0.0;
  const auto r = solve_stage(bs, request({0.95}, 1.0, {0.2}), c);
  CHECK_FALSE(r.converged);
  CHECK(r.residual > c.residual_tolerance);
}

TEST_CASE("accepted solves meet the residual tolerance") {
  BurgersStiff bs(2, 10.0, 0.9);
  ImplicitConfig c;
  for (int i = 0; i < 50; ++i) {
    auto req = request({test::uniform(0.0, 1.2)}, test::uniform(0.0, 0.05), {});
    req.guess = req.rhs;
    const auto r = solve_stage(bs, req, c);
    REQUIRE(r.converged);
    CHECK(stage_residual(bs, req, r.u) <= c.residual_tolerance);
  }
}

TEST_CASE("damping never worsens the converged residual") {
  BurgersStiff bs(2, 1e3, 0.9);
  for (int i = 0; i < 20; ++i) {
    auto req = request({test::uniform(0.0, 1.0)}, 1e-3, {});
    req.guess = req.rhs;
    ImplicitConfig full, damped;
    damped.damping = 0.5;
    damped.max_iterations = 200;
    const auto a = solve_stage(bs, req, full);
    const auto b = solve_stage(bs, req, damped);
    REQUIRE(a.converged);
    REQUIRE(b.converged);
    CHECK(b.residual <= std::max(a.residual, full.residual_tolerance));
  }
}

TEST_CASE("reactive linearized stage") {
  CHECK(reactive_euler_stage(0.7, 1.0, 0.0, 164180.0, 25.0) == 0.7);
  CHECK(reactive_euler_stage(0.0, 3.0, 1.0, 164180.0, 25.0) == 0.0);
  const double K = 164180.0 * std::exp(-25.0);
  CHECK(K == doctest::Approx(2.28e-6).epsilon(1e-2));
  CHECK(reactive_euler_stage(1.0, 1.0, 1.0, 164180.0, 25.0) == doctest::Approx(1.0 / (1.0 + K)).epsilon(1e-15));
  CHECK(arrhenius_rate(1.0, 164180.0, 25.0) == doctest::Approx(K).epsilon(1e-15));

  SUBCASE("agrees with Newton on the frozen-rate linear source") {
    for (int i = 0; i < 20; ++i) {
      const double T = test::uniform(0.5, 30.0), gamma = test::uniform(0.0, 0.1), rhs = test::uniform(0.0, 2.0);
      LinearAdvectionStiff frozen(0.0, arrhenius_rate(T, 164180.0, 25.0));
      ImplicitConfig tight;
      tight.residual_tolerance = 1e-15;
      const auto r = solve_stage(frozen, request({rhs}, gamma, {rhs}), tight);
      CHECK(std::abs(reactive_euler_stage(rhs, T, gamma, 164180.0, 25.0) - r.u[0]) <= 1e-14 * std::max(1.0, rhs));
    }
  }

  SUBCASE("system hook updates only the reactant") {
    ReactiveEuler1D re;
    const State u = re.prim_to_cons({1.0, 0.5, 2.0, 0.5});
    StageSolveRequest req = request(u, 0.01, u);
    const auto r = re.solve_source_stage(req, {});
    CHECK(r.converged);
    for (int k = 0; k < 3; ++k) CHECK(r.u[k] == u[k]);
    CHECK(r.u[3] == doctest::Approx(reactive_euler_stage(u[3], re.temperature(u), 0.01, 164180.0, 25.0)));
  }
}

TEST_CASE("homogeneous initial guess") {
  CHECK(homogeneous_initial_guess(0.95, 0.9) == 1.0);
  CHECK(homogeneous_initial_guess(0.5, 0.9) == 0.0);
  CHECK(homogeneous_initial_guess(0.9, 0.9) == 0.0);
  BurgersStiff bs(2, 1e6, 0.9);
  CHECK(bs.has_homogeneous_guess());
  CHECK(bs.homogeneous_guess({0.95})[0] == 1.0);
}

TEST_CASE("dissipation weight") {
  // T chosen so that dt K(T) hits the target values
  const double A = 164180.0, TA = 25.0;
  const double T = 5.0;
  const double K = arrhenius_rate(T, A, TA);
  CHECK(dissipation_weight(T, 0.25 / K, A, TA) == doctest::Approx(0.75));
  CHECK(dissipation_weight(T, 2.0 / K, A, TA) == 0.0);
  CHECK(dissipation_weight(T, 1.0 / K, A, TA) == 0.0);
  CHECK(dissipation_weight(T, 1.0, 0.0, TA) == 1.0);
}
