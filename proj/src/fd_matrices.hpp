#pragma once

// Assembled sparse versions of the finite-difference field operators. They
// mirror operators.cpp stencil for stencil.

#include <Eigen/SparseCore>
#include <span>
#include <vector>

#include "savns/grid.hpp"

namespace savns::detail {

using SpMat = Eigen::SparseMatrix<double>;
using Vec = Eigen::VectorXd;

/// N x N first derivative along x (axis 0) or y (axis 1).
SpMat derivative_matrix(const Grid& g, int axis);
/// N x N Laplacian of the grid's FD order; zero rows on Dirichlet boundary nodes.
SpMat laplacian_matrix(const Grid& g);
/// 5-point Laplacian with homogeneous Neumann ghost reflection on every node
/// of a Dirichlet-type grid (periodic grids wrap).
SpMat neumann_laplacian_matrix(const Grid& g);

SpMat identity_matrix(int n);
SpMat block_diag(const SpMat& a, const SpMat& b);
SpMat hstack(const SpMat& a, const SpMat& b);
SpMat vstack(const SpMat& a, const SpMat& b);

/// Positions in a [u1 | u2] array that are free unknowns (interior nodes on
/// Dirichlet grids, every node when periodic).
std::vector<int> velocity_unknowns(const Grid& g);

/// Rows and columns of `full` restricted to `keep`.
SpMat restrict_to(const SpMat& full, const std::vector<int>& keep);

Vec gather(std::span<const double> full, const std::vector<int>& keep);
void scatter(const Vec& v, const std::vector<int>& keep, std::span<double> full);

}  // namespace savns::detail
