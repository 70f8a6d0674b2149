#include "savns/cases.hpp"

#include <cmath>
#include <numbers>

#include "savns/errors.hpp"

namespace savns {

namespace {
constexpr double pi = std::numbers::pi;

ManufacturedCase example1(double nu) {
  ManufacturedCase c;
  c.id = CaseId::Example1;
  c.nu = nu;
  c.bc = Boundary::Dirichlet;
  // u1 = S a(x) b(y), u2 = -S b(x) a(y) with a = sin^2(pi .), b = sin(2 pi .)
  // and S = sin t; the sign on u2 makes the field solenoidal.
  c.exact_u = [](double t, double x, double y) {
    const double s = std::sin(t);
    const double sx = std::sin(pi * x), sy = std::sin(pi * y);
    return std::pair{s * sx * sx * std::sin(2 * pi * y),
                     -s * std::sin(2 * pi * x) * sy * sy};
  };
  c.exact_p = [](double t, double x, double y) {
    return std::sin(t) * std::cos(pi * x) * std::sin(pi * y);
  };
  c.forcing = [nu](double t, double x, double y) {
    const double s = std::sin(t), ct = std::cos(t);
    auto a = [](double z) { return std::sin(pi * z) * std::sin(pi * z); };
    auto da = [](double z) { return pi * std::sin(2 * pi * z); };
    auto dda = [](double z) { return 2 * pi * pi * std::cos(2 * pi * z); };
    auto b = [](double z) { return std::sin(2 * pi * z); };
    auto db = [](double z) { return 2 * pi * std::cos(2 * pi * z); };
    auto ddb = [](double z) { return -4 * pi * pi * std::sin(2 * pi * z); };

    const double u1 = s * a(x) * b(y);
    const double u2 = -s * b(x) * a(y);
    const double u1_t = ct * a(x) * b(y);
    const double u2_t = -ct * b(x) * a(y);
    const double u1_x = s * da(x) * b(y), u1_y = s * a(x) * db(y);
    const double u2_x = -s * db(x) * a(y), u2_y = -s * b(x) * da(y);
    const double lap1 = s * (dda(x) * b(y) + a(x) * ddb(y));
    const double lap2 = -s * (ddb(x) * a(y) + b(x) * dda(y));
    const double p_x = -s * pi * std::sin(pi * x) * std::sin(pi * y);
    const double p_y = s * pi * std::cos(pi * x) * std::cos(pi * y);
    return std::pair{u1_t + u1 * u1_x + u2 * u1_y - nu * lap1 + p_x,
                     u2_t + u1 * u2_x + u2 * u2_y - nu * lap2 + p_y};
  };
  return c;
}

ManufacturedCase example2(double nu) {
  ManufacturedCase c;
  c.id = CaseId::Example2;
  c.nu = nu;
  c.bc = Boundary::Periodic;
  c.x1 = c.y1 = 2 * pi;
  c.exact_u = [](double t, double x, double y) {
    const double e = std::exp(-2 * t);
    return std::pair{-std::cos(x) * std::sin(y) * e, std::sin(x) * std::cos(y) * e};
  };
  c.exact_p = [](double t, double x, double y) {
    return -0.25 * (std::cos(2 * x) + std::cos(2 * y)) * std::exp(-4 * t);
  };
  // du/dt = -2u and lap u = -2u; (u . grad) u + grad p = 0 because the
  // pressure decays as the square of the velocity amplitude. What remains
  // is (2 nu - 2) u, which vanishes for nu = 1.
  c.forcing = [nu, u = c.exact_u](double t, double x, double y) {
    auto [u1, u2] = u(t, x, y);
    const double k = 2 * nu - 2;
    return std::pair{k * u1, k * u2};
  };
  return c;
}
}  // namespace

std::string_view to_string(CaseId id) {
  return id == CaseId::Example1 ? "example1" : "example2";
}

CaseId case_from_string(std::string_view name) {
  if (name == "example1") return CaseId::Example1;
  if (name == "example2") return CaseId::Example2;
  throw ConfigError("unknown case '" + std::string(name) + "'");
}

ManufacturedCase make_case(CaseId id, double nu) {
  if (!(nu > 0)) throw ConfigError("nu must be positive");
  return id == CaseId::Example1 ? example1(nu) : example2(nu);
}

Grid ManufacturedCase::grid(int n, std::optional<Discretization> disc) const {
  if (bc == Boundary::Dirichlet)
    return Grid(n, n, x0, x1, y0, y1, bc, Discretization::FiniteDifference);
  return Grid(n, n, x0, x1, y0, y1, bc, disc.value_or(Discretization::Spectral));
}

FlowState ManufacturedCase::initial_state(const Grid& g, double t0) const {
  return FlowState::initial(sample_velocity(exact_u, g, t0),
                            sample_scalar(exact_p, g, t0), t0);
}

}  // namespace savns
