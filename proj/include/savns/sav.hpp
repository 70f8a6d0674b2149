#pragma once

#include "savns/field.hpp"

namespace savns {

/// Below this magnitude the coefficient of the scalar q-equation is treated
/// as singular.
inline constexpr double kDegenerateQThreshold = 1e-12;

/// (a . grad) b + (div a) b, evaluated with the field stencils. Products are
/// formed pointwise; on spectral grids the result is 2/3-rule truncated.
VectorField advective_form(const VectorField& a, const VectorField& b);

/// N(u) = (u . grad) u + (div u) u.
VectorField nonlinear_form(const VectorField& u);

/// B(u1, u2, u3) = < (u1 . grad) u2 + (div u1) u2, u3 >, the same discrete
/// integrand the momentum equation uses.
double trilinear_b(const VectorField& u1, const VectorField& u2,
                   const VectorField& u3);

/// q^{n+1} from the first-order q-equation after the split solves
/// u^{n+1} = u1 + q^{n+1} u2:
///   q_new = (q_prev + dt <n, u1>) / (1 - dt <n, u2>).
double solve_q_first_order(double q_prev, const VectorField& n_field,
                           const VectorField& u1, const VectorField& u2,
                           double dt);

/// Midpoint variant with u^{n+1/2} = w1 + (q_prev + q_new)/2 w2:
///   q_new = (q_prev + dt <n,w1> + dt/2 q_prev <n,w2>) / (1 - dt/2 <n,w2>).
double solve_q_second_order(double q_prev, const VectorField& n_field,
                            const VectorField& w1, const VectorField& w2,
                            double dt);

}  // namespace savns
