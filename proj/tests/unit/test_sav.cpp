#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "savns/elliptic.hpp"
#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "savns/sav.hpp"

using namespace savns;
using namespace testing;

namespace {

// Quadrature written out by hand.
double integral(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  double s = 0;
  for (int c = 0; c < 2; ++c)
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) s += g.weight(i, j) * a(c, i, j) * b(c, i, j);
  return s;
}

// (a . grad) b, pointwise, without dealiasing.
VectorField convect(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  VectorField out(g);
  for (int c = 0; c < 2; ++c) {
    const ScalarField bx = partial_x(b.component_field(c));
    const ScalarField by = partial_y(b.component_field(c));
    for (std::size_t k = 0; k < g.size(); ++k)
      out.component(c)[k] = a.component(0)[k] * bx.values()[k] + a.component(1)[k] * by.values()[k];
  }
  return out;
}

VectorField taylor_green(const Grid& g) {
  return VectorField::sample(g, [](double x, double y) {
    return std::pair{-std::cos(x) * std::sin(y), std::sin(x) * std::cos(y)};
  });
}

}  // namespace

TEST_SUITE("sav") {
  TEST_CASE("nonlinear form of trivial fields") {
    for (const Grid& g : {periodic(16), dirichlet(10)}) {
      CHECK(linf(nonlinear_form(VectorField(g))) == 0.0);
    }
    const Grid g = periodic(16);
    const VectorField c = VectorField::sample(g, [](double, double) { return std::pair{2.0, 0.0}; });
    CHECK(linf(nonlinear_form(c)) < 1e-13);
  }

  TEST_CASE("nonlinear form of (sin x, 0)") {
    const Grid g = periodic(32);
    const VectorField u = VectorField::sample(g, [](double x, double) { return std::pair{std::sin(x), 0.0}; });
    const VectorField expect = VectorField::sample(
        g, [](double x, double) { return std::pair{2 * std::sin(x) * std::cos(x), 0.0}; });
    CHECK(linf(nonlinear_form(u) - expect) < 1e-13);
  }

  TEST_CASE("trilinear form") {
    const Grid g = periodic(32);
    const VectorField z(g);
    const VectorField a = smooth_periodic(g), b = smooth_periodic(g, 0.4), c = smooth_periodic(g, 1.1);
    CHECK(trilinear_b(z, b, c) == 0.0);
    CHECK(trilinear_b(a, z, c) == 0.0);
    CHECK(trilinear_b(a, b, z) == 0.0);

    // B(u, u, u) vanishes for solenoidal u.
    const VectorField tg = taylor_green(g);
    CHECK(std::abs(trilinear_b(tg, tg, tg)) < 1e-10);

    // Integration by parts: B(u1, u2, u3) = -((u1 . grad) u3, u2) on periodic grids.
    const double lhs = trilinear_b(a, b, c);
    const double rhs = -integral(convect(a, c), b);
    CHECK(std::abs(lhs - rhs) <= 1e-8 * std::abs(lhs));
  }

  TEST_CASE("trilinear form uses the momentum integrand") {
    const Grid g = dirichlet(12);
    const VectorField a = random_vector(g, 1), b = random_vector(g, 2), c = random_vector(g, 3);
    const double direct = integral(advective_form(a, b), c);
    CHECK(trilinear_b(a, b, c) == doctest::Approx(direct).epsilon(1e-13));
  }

  TEST_CASE("first-order q solve against brute-force re-evaluation") {
    const Grid g = periodic(16);
    const double dt = 0.1;
    const VectorField u0 = taylor_green(g);
    const VectorField n = nonlinear_form(u0);
    const EllipticOperator op(g, 1 / dt, 1.0, 1e5);
    const VectorField u1 = op.solve((1 / dt) * u0);
    const VectorField u2 = op.solve(-1.0 * n);
    // Make <n, u2> nonzero by perturbing the second split field.
    const VectorField u2p = u2 + 0.01 * smooth_periodic(g);
    for (const VectorField* w2 : {&u2, &u2p}) {
      const double a = integral(n, u1), b = integral(n, *w2);
      const double q = (1.0 + dt * a) / (1.0 - dt * b);
      const double got = solve_q_first_order(1.0, n, u1, *w2, dt);
      CHECK(std::abs(got - q) <= 1e-14 * std::abs(q));
      // And it solves q - 1 = dt <n, u1 + q u2>.
      CHECK(std::abs(got - 1.0 - dt * (a + got * b)) <= 1e-14 * (1 + std::abs(got)));
    }
    CHECK(solve_q_first_order(0.7, VectorField(g), u1, u2, dt) == 0.7);
  }

  TEST_CASE("second-order q solve against Picard iteration") {
    const Grid g = periodic(16);
    const double dt = 0.2, q0 = 0.93;
    const VectorField n = nonlinear_form(smooth_periodic(g));
    const VectorField w1 = smooth_periodic(g, 0.3), w2 = 0.05 * smooth_periodic(g, 0.9);
    const double a = integral(n, w1), b = integral(n, w2);
    REQUIRE(std::abs(dt / 2 * b) < 0.5);
    double q = q0;
    for (int it = 0; it < 50; ++it) q = q0 + dt * (a + 0.5 * (q0 + q) * b);
    const double got = solve_q_second_order(q0, n, w1, w2, dt);
    CHECK(std::abs(got - q) <= 1e-14 * std::abs(q));
    CHECK(solve_q_second_order(q0, VectorField(g), w1, w2, dt) == q0);
  }

  TEST_CASE("degenerate q equation") {
    const Grid g = periodic(16);
    const VectorField n = nonlinear_form(smooth_periodic(g));
    const double b = integral(n, n);
    REQUIRE(b > 0);
    // dt <n, u2> = 1 exactly.
    const VectorField u2 = (1.0 / b) * n;
    CHECK_THROWS_AS(solve_q_first_order(1.0, n, n, u2, 1.0), DegenerateQError);
    CHECK_THROWS_AS(solve_q_second_order(1.0, n, n, u2, 2.0), DegenerateQError);
  }
}
