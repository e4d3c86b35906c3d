#include <doctest.h>

#include <cmath>
#include <vector>

#include "crkfr/basis.hpp"
#include "crkfr/equations.hpp"
#include "crkfr/limiter.hpp"
#include "support.hpp"

using namespace crkfr;

namespace {

AdmissibilityConstraint identity_constraint() {
  AdmissibilityConstraint c;
  c.name = "u";
  c.evaluate = [](const State& u) { return u[0]; };
  return c;
}

// Largest theta on [0, 1] with P(mix) >= eps, by plain bisection.
double bisect_theta(const AdmissibilityConstraint& c, double eps, const State& lo, const State& cand) {
  if (c.evaluate(cand) >= eps) return 1.0;
  double a = 0.0, b = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double m = 0.5 * (a + b);
    (c.evaluate(convex(m, cand, lo)) >= eps ? a : b) = m;
  }
  return a;
}

State ten_moment_state(const TenMoment1D& tm, double rho, double v1, double p11, double p12, double p22) {
  return tm.prim_to_cons({rho, v1, 0.0, p11, p12, p22});
}

}  // namespace

TEST_CASE("smoothness indicator") {
  LimiterConfig cfg;
  const auto pts = solution_points(PointKind::GL, 3);
  const auto modal = nodal_to_modal(pts);

  std::vector<double> q(4, 2.5);
  CHECK(smoothness_alpha(q, modal, cfg) == 0.0);

  for (int p = 0; p < 4; ++p) q[p] = legendre(3, 2.0 * pts.nodes[p] - 1.0);
  CHECK(smoothness_alpha(q, modal, cfg) == doctest::Approx(cfg.alpha_max));

  cfg.alpha_max = 0.3;
  CHECK(smoothness_alpha(q, modal, cfg) == doctest::Approx(0.3));
  cfg.alpha_max = 1.0;

  q[1] = NAN;
  CHECK(smoothness_alpha(q, modal, cfg) == cfg.alpha_max);

  SUBCASE("resolved sine stays unlimited") {
    const int n_el = 64;
    const double dx = 2.0 / n_el;
    for (int e = 0; e < n_el; ++e) {
      for (int p = 0; p < 4; ++p) q[p] = std::sin(M_PI * (-1.0 + dx * (e + pts.nodes[p])));
      CHECK(smoothness_alpha(q, modal, cfg) < 0.01);
    }
  }
  SUBCASE("a jump inside the element is flagged") {
    q = {0.0, 0.0, 1.0, 1.0};
    CHECK(smoothness_alpha(q, modal, cfg) > 0.5);
  }
}

TEST_CASE("theta for a linear constraint") {
  const auto c = identity_constraint();
  CHECK(theta_for_constraint(c, 0.1, {1.0}, {0.5}) == 1.0);
  CHECK(theta_for_constraint(c, 0.1, {1.0}, {-1.0}) == doctest::Approx(0.45).epsilon(1e-15));
}

TEST_CASE("theta for concave constraints is the largest admissible value") {
  ReactiveEuler1D re;
  const auto& pressure = re.constraints()[2];
  for (int i = 0; i < 100; ++i) {
    const State lo = re.prim_to_cons({test::uniform(0.5, 2), test::uniform(-1, 1), test::uniform(0.5, 5), 0.5});
    State cand = lo;
    cand[2] -= test::uniform(1.0, 20.0);  // knock the pressure negative
    const double eps = pressure.evaluate(lo) / 10.0;
    const double th = theta_for_constraint(pressure, eps, lo, cand);
    CHECK(pressure.evaluate(convex(th, cand, lo)) >= eps - 1e-10);
    CHECK(th == doctest::Approx(bisect_theta(pressure, eps, lo, cand)).epsilon(1e-10));
  }
}

TEST_CASE("theta for the ten-moment determinant") {
  TenMoment1D tm;
  const auto& det = tm.constraints()[2];
  for (int i = 0; i < 100; ++i) {
    const State lo = ten_moment_state(tm, 1.0, 0.0, 2.0, 0.0, 2.0);
    const double big = test::uniform(3.0, 8.0);
    const State cand = ten_moment_state(tm, 1.0, test::uniform(-1, 1), 2.0, big, 2.0);
    REQUIRE(det.evaluate(cand) < 0.0);
    const double eps = det.evaluate(lo) / 10.0;
    const double th = theta_for_constraint(det, eps, lo, cand);
    const double oracle = bisect_theta(det, eps, lo, cand);
    CHECK(std::abs(det.evaluate(convex(th, cand, lo)) - eps) < 1e-10);
    CHECK(th == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("interface flux limiting") {
  SUBCASE("no constraints is a no-op") {
    LinearAdvectionStiff la(1.0, 0.0);
    InterfaceSubcell l, r;
    l.present = r.present = true;
    const auto res = flux_limit_interface(la, l, r, {2.0}, {3.0}, {0.0}, {0.0}, 0.1);
    CHECK(res.flux_minus[0] == 2.0);
    CHECK(res.flux_plus[0] == 3.0);
    CHECK(res.theta == 1.0);
  }

  TenMoment1D tm;
  const State uL = ten_moment_state(tm, 1.0, -4.0, 9.0, 7.0, 9.0);
  const State uR = ten_moment_state(tm, 1.0, 4.0, 9.0, 7.0, 9.0);
  const double lambda = std::max(tm.max_speed(uL), tm.max_speed(uR));
  const State fL = tm.flux(uL), fR = tm.flux(uR);
  const State low = 0.5 * (fL + fR) - (0.5 * lambda) * (uR - uL);
  InterfaceSubcell left, right;
  left.present = right.present = true;
  left.u = uL;
  right.u = uR;
  left.width = right.width = 0.01;
  left.inner_flux = fL;
  right.inner_flux = fR;
  const double dt = 0.25 * left.width / lambda;

  SUBCASE("admissible blended fluxes pass through") {
    const auto res = flux_limit_interface(tm, left, right, low, low, low, low, dt);
    CHECK(res.theta == 1.0);
  }
  SUBCASE("near-vacuum interface is limited") {
    State push{};
    push[0] = 40.0;  // drains the left subcell, floods the right one
    const auto res = flux_limit_interface(tm, left, right, low + push, low + push, low, low, dt);
    CHECK(res.theta < 1.0);
    const State el = left.u - (dt / left.width) * (res.flux_minus - left.inner_flux);
    const State er = right.u - (dt / right.width) * (right.inner_flux - res.flux_plus);
    CHECK(tm.admissible(el));
    CHECK(tm.admissible(er));
  }
  SUBCASE("inadmissible low-order evolution is a hard failure") {
    CHECK_THROWS_AS(flux_limit_interface(tm, left, right, low, low, low, low, 100.0 * dt), AdmissibilityError);
  }
}

TEST_CASE("final admissibility limiting") {
  TenMoment1D tm;
  std::vector<State> low, high;
  for (int p = 0; p < 4; ++p) {
    low.push_back(ten_moment_state(tm, 1.0 + 0.1 * p, 0.1, 2.0, 0.1, 2.0));
    high.push_back(ten_moment_state(tm, 1.0 + 0.1 * p, 0.2, 2.5, 0.2, 2.5));
  }

  SUBCASE("admissible input is untouched") {
    auto u = high;
    CHECK(final_admissibility_limit(tm, u, low) == 1.0);
    CHECK(u == high);
  }
  SUBCASE("a det-negative node pulls the element toward low order") {
    auto u = high;
    u[2] = ten_moment_state(tm, 1.2, 0.2, 2.0, 5.0, 2.0);
    const double th = final_admissibility_limit(tm, u, low);
    CHECK(th < 1.0);
    for (const auto& v : u) CHECK(tm.admissible(v));
  }
  SUBCASE("pure low order is the identity") {
    auto u = low;
    CHECK(final_admissibility_limit(tm, u, low) == 1.0);
    CHECK(u == low);
  }
}

TEST_CASE("subcell widths tile the element") {
  for (int n = 0; n <= 9; ++n) {
    const auto pts = solution_points(PointKind::GL, n);
    const double dx = 0.37;
    double total = 0.0;
    for (double w : pts.weights) total += w * dx;
    CHECK(total == doctest::Approx(dx).epsilon(1e-14));
  }
}
