#pragma once

// Finite-difference stencil tables along one axis of a grid.

#include <vector>

#include "savns/grid.hpp"

namespace savns::detail {

/// Coefficients c[q] multiply the node at (start + q) mod n.
struct Stencil {
  int start = 0;
  std::vector<double> c;
};

/// First derivative at node k of an axis with n nodes and spacing h.
/// Non-periodic axes use one-sided rows of the same order near the ends.
Stencil first_derivative(int k, int n, double h, int order, bool periodic);

/// Second derivative at node k. On non-periodic axes only 0 < k < n-1 is
/// defined; the rows next to the ends are one-sided for order 4.
Stencil second_derivative(int k, int n, double h, int order, bool periodic);

/// Stencils for every node of axis 0 (x) or 1 (y) of `g`.
std::vector<Stencil> first_derivative_table(const Grid& g, int axis);
std::vector<Stencil> second_derivative_table(const Grid& g, int axis);

}  // namespace savns::detail
