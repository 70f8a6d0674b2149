#pragma once

#include "savns/field.hpp"

namespace savns {

// Discrete differential operators. All of them are linear and pure.
//
// Finite-difference grids use centred stencils of the grid's fd_order (4 by
// default, 2 on request) in the interior. On Dirichlet grids the first
// derivative switches to one-sided stencils of the same order near the
// walls, so divergence (and with it the penalty pressure) keeps its order on
// the whole grid. The Laplacian returns zero on Dirichlet boundary nodes.
//
// The spectral backend multiplies by i*k (Nyquist zeroed) for first
// derivatives and by -|k|^2 for the Laplacian.

ScalarField partial_x(const ScalarField& p);
ScalarField partial_y(const ScalarField& p);

VectorField gradient(const ScalarField& p);
ScalarField divergence(const VectorField& u);
VectorField laplacian(const VectorField& u);
/// gradient(divergence(u)), by construction.
VectorField grad_div(const VectorField& u);

double inner_product(const ScalarField& a, const ScalarField& b);
double inner_product(const VectorField& a, const VectorField& b);

struct Norms {
  double l2 = 0;
  double linf = 0;
  double h1_semi = 0;
};
Norms norms(const ScalarField& f);
/// linf is the componentwise maximum magnitude.
Norms norms(const VectorField& u);

double linf(const ScalarField& f);
double linf(const VectorField& u);
double l2(const ScalarField& f);
double l2(const VectorField& u);

/// <-laplacian(u), u>: the discrete squared H1 seminorm that appears in the
/// energy identities.
double viscous_dissipation(const VectorField& u);

/// 2/3-rule truncation on spectral grids; identity on finite-difference grids.
VectorField dealias(const VectorField& u);

}  // namespace savns
