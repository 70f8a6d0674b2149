#include "savns/sav.hpp"

#include <cmath>
#include <sstream>

#include "savns/errors.hpp"
#include "savns/operators.hpp"

namespace savns {

VectorField advective_form(const VectorField& a, const VectorField& b) {
  require_same_grid(a.grid(), b.grid(), "advective_form");
  const Grid& g = a.grid();
  const ScalarField div_a = divergence(a);
  VectorField out(g);
  auto a0 = a.component(0);
  auto a1 = a.component(1);
  for (int c = 0; c < 2; ++c) {
    const ScalarField bc = b.component_field(c);
    const ScalarField bx = partial_x(bc);
    const ScalarField by = partial_y(bc);
    auto o = out.component(c);
    for (std::size_t k = 0; k < g.size(); ++k)
      o[k] = a0[k] * bx.values()[k] + a1[k] * by.values()[k] +
             div_a.values()[k] * bc.values()[k];
  }
  return dealias(out);
}

VectorField nonlinear_form(const VectorField& u) { return advective_form(u, u); }

double trilinear_b(const VectorField& u1, const VectorField& u2,
                   const VectorField& u3) {
  return inner_product(advective_form(u1, u2), u3);
}

namespace {
void check_denominator(double denom, const char* which) {
  if (!(std::abs(denom) >= kDegenerateQThreshold)) {
    std::ostringstream msg;
    msg << which << ": q-equation coefficient " << denom << " is degenerate";
    throw DegenerateQError(msg.str(), denom);
  }
}
}  // namespace

double solve_q_first_order(double q_prev, const VectorField& n_field,
                           const VectorField& u1, const VectorField& u2,
                           double dt) {
  const double denom = 1.0 - dt * inner_product(n_field, u2);
  check_denominator(denom, "solve_q_first_order");
  return (q_prev + dt * inner_product(n_field, u1)) / denom;
}

double solve_q_second_order(double q_prev, const VectorField& n_field,
                            const VectorField& w1, const VectorField& w2,
                            double dt) {
  const double b1 = inner_product(n_field, w1);
  const double b2 = inner_product(n_field, w2);
  const double denom = 1.0 - 0.5 * dt * b2;
  check_denominator(denom, "solve_q_second_order");
  return (q_prev + dt * b1 + 0.5 * dt * q_prev * b2) / denom;
}

}  // namespace savns
