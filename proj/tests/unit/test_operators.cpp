#include <doctest.h>

#include <cmath>

#include "helpers.hpp"
#include "savns/operators.hpp"

using namespace savns;
using namespace testing;

namespace {

double max_diff(const VectorField& a, const VectorField& b) { return linf(a - b); }

// Max error of gradient(cos(pi x) sin(pi y)) on an n-node Dirichlet grid.
double gradient_error(int n, int fd_order) {
  const Grid g = dirichlet(n, fd_order);
  const ScalarField p =
      ScalarField::sample(g, [](double x, double y) { return std::cos(pi * x) * std::sin(pi * y); });
  const VectorField exact = VectorField::sample(g, [](double x, double y) {
    return std::pair{-pi * std::sin(pi * x) * std::sin(pi * y),
                     pi * std::cos(pi * x) * std::cos(pi * y)};
  });
  return max_diff(gradient(p), exact);
}

// Example-1 velocity shape at t = pi/2; analytically solenoidal.
VectorField example1_shape(const Grid& g) {
  return VectorField::sample(g, [](double x, double y) {
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    return std::pair{sx * sx * std::sin(2 * pi * y), -std::sin(2 * pi * x) * sy * sy};
  });
}

double laplacian_error(int n, int fd_order) {
  const Grid g = dirichlet(n, fd_order);
  const VectorField u = VectorField::sample(g, [](double x, double y) {
    const double s = std::sin(pi * x) * std::sin(2 * pi * y);
    return std::pair{s, 2 * s};
  });
  const VectorField exact = -5 * pi * pi * u;
  // Boundary rows of the Laplacian are zero by definition.
  VectorField lap = laplacian(u);
  VectorField ex = exact;
  ex.clamp_boundary();
  return max_diff(lap, ex);
}

}  // namespace

TEST_SUITE("operators") {
  TEST_CASE("constants are annihilated") {
    for (const Grid& g : {periodic(16), periodic(16, Discretization::FiniteDifference),
                          periodic(16, Discretization::FiniteDifference, 2), dirichlet(9)}) {
      const ScalarField c(g, std::vector<double>(g.size(), 3.5));
      CHECK(linf(gradient(c)) < 1e-12);
      const VectorField u = VectorField::sample(g, [](double, double) { return std::pair{1.5, -2.0}; });
      CHECK(linf(divergence(u)) < 1e-12);
      if (g.periodic()) CHECK(linf(laplacian(u)) < 1e-11);
    }
  }

  TEST_CASE("spectral derivatives are exact for resolved modes") {
    const Grid g = periodic(32);
    const ScalarField p = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
    const VectorField exact =
        VectorField::sample(g, [](double x, double) { return std::pair{std::cos(x), 0.0}; });
    CHECK(max_diff(gradient(p), exact) < 1e-13);

    const VectorField s = VectorField::sample(g, [](double x, double y) {
      return std::pair{std::sin(x) * std::sin(y), 0.0};
    });
    CHECK(max_diff(laplacian(s), -2.0 * s) < 1e-12);

    const VectorField tg = VectorField::sample(g, [](double x, double y) {
      return std::pair{-std::cos(x) * std::sin(y), std::sin(x) * std::cos(y)};
    });
    CHECK(linf(divergence(tg)) < 1e-13);
    CHECK(linf(grad_div(tg)) < 1e-13);

    const VectorField sx =
        VectorField::sample(g, [](double x, double) { return std::pair{std::sin(x), 0.0}; });
    const VectorField expect =
        VectorField::sample(g, [](double x, double) { return std::pair{-std::sin(x), 0.0}; });
    CHECK(max_diff(grad_div(sx), expect) < 1e-13);
  }

  TEST_CASE("Dirichlet gradient converges at the stencil order") {
    const double e2a = gradient_error(21, 2), e2b = gradient_error(41, 2);
    const double e4a = gradient_error(21, 4), e4b = gradient_error(41, 4);
    CHECK(order(e2a, e2b) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order(e4a, e4b) > 3.6);
    CHECK(order(e4a, e4b) < 4.6);
  }

  TEST_CASE("Dirichlet divergence of a solenoidal field converges to zero") {
    for (int p : {2, 4}) {
      const double a = linf(divergence(example1_shape(dirichlet(21, p))));
      const double b = linf(divergence(example1_shape(dirichlet(41, p))));
      CHECK(order(a, b) > p - 0.3);
    }
  }

  TEST_CASE("Dirichlet Laplacian converges at the stencil order") {
    CHECK(order(laplacian_error(21, 2), laplacian_error(41, 2)) == doctest::Approx(2.0).epsilon(0.1));
    CHECK(order(laplacian_error(21, 4), laplacian_error(41, 4)) > 3.6);
  }

  TEST_CASE("grad_div is gradient of divergence, bit for bit") {
    for (const Grid& g : {periodic(16), periodic(16, Discretization::FiniteDifference),
                          dirichlet(12), dirichlet(12, 2)}) {
      const VectorField u = random_vector(g, 7);
      const VectorField a = grad_div(u), b = gradient(divergence(u));
      for (std::size_t k = 0; k < a.values().size(); ++k) REQUIRE(a.values()[k] == b.values()[k]);
    }
  }

  TEST_CASE("operators are linear") {
    for (const Grid& g : {periodic(16), dirichlet(12)}) {
      const VectorField a = random_vector(g, 3), b = random_vector(g, 4);
      const double al = 0.7, be = -1.3;
      const VectorField mix = al * a + be * b;
      CHECK(max_diff(laplacian(mix), al * laplacian(a) + be * laplacian(b)) < 1e-10 * (1 + linf(laplacian(a))));
      CHECK(linf(divergence(mix) - (al * divergence(a) + be * divergence(b))) < 1e-10 * (1 + linf(divergence(a))));
    }
  }

  TEST_CASE("quadrature") {
    const Grid g = periodic(16);
    const ScalarField s = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
    CHECK(inner_product(s, s) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
    CHECK(inner_product(ScalarField(g), s) == 0.0);

    const Grid d = dirichlet(33);
    const ScalarField one(d, std::vector<double>(d.size(), 1.0));
    CHECK(inner_product(one, one) == doctest::Approx(1.0).epsilon(1e-13));
    const ScalarField two(d, std::vector<double>(d.size(), 2.0));
    CHECK(norms(two).l2 == doctest::Approx(2.0).epsilon(1e-13));
    CHECK(norms(two).linf == 2.0);
    const Norms z = norms(ScalarField(d));
    CHECK(z.l2 == 0.0);
    CHECK(z.linf == 0.0);
    CHECK(z.h1_semi == 0.0);

    auto l2_err = [](int n) {
      const Grid g = dirichlet(n);
      const ScalarField f = ScalarField::sample(
          g, [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); });
      return std::abs(l2(f) - 0.5);
    };
    // The trapezoidal rule is exact for this integrand, well inside O(h^2).
    CHECK(l2_err(17) < 1e-12);
    CHECK(l2_err(33) < 1e-12);
  }

  TEST_CASE("vector max norm is componentwise") {
    const Grid g = periodic(8);
    VectorField u(g);
    u(0, 1, 1) = 3.0;
    u(1, 1, 1) = -4.0;
    CHECK(linf(u) == 4.0);
  }

  TEST_CASE("gradient is minus the adjoint of divergence on periodic grids") {
    for (const Grid& g : {periodic(32), periodic(32, Discretization::FiniteDifference),
                          periodic(32, Discretization::FiniteDifference, 2)}) {
      const ScalarField p = random_scalar(g, 11);
      const VectorField u = random_vector(g, 12);
      const double lhs = inner_product(gradient(p), u);
      const double rhs = -inner_product(p, divergence(u));
      CHECK(std::abs(lhs - rhs) <= 1e-12 * (std::abs(lhs) + l2(p) * l2(u)));
    }
  }

  TEST_CASE("adjointness defect on Dirichlet grids shrinks with h") {
    auto defect = [](int n) {
      const Grid g = dirichlet(n);
      const ScalarField p = ScalarField::sample(
          g, [](double x, double y) { return std::cos(pi * x) * std::cos(2 * pi * y); });
      const VectorField u = example1_shape(g);
      return std::abs(inner_product(gradient(p), u) + inner_product(p, divergence(u)));
    };
    CHECK(defect(41) < defect(21));
    CHECK(defect(41) < 1e-4);
  }

  TEST_CASE("dealiasing drops the upper third of the spectrum") {
    const Grid g = periodic(24);
    const VectorField low = VectorField::sample(g, [](double x, double y) {
      return std::pair{std::sin(3 * x), std::cos(2 * y)};
    });
    const VectorField high = VectorField::sample(g, [](double x, double) {
      return std::pair{std::cos(10 * x), 0.0};
    });
    CHECK(max_diff(dealias(low), low) < 1e-13);
    CHECK(linf(dealias(high)) < 1e-13);
    const Grid d = dirichlet(9);
    const VectorField r = random_vector(d, 5);
    CHECK(max_diff(dealias(r), r) == 0.0);
  }
}
