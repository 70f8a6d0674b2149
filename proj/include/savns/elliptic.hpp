#pragma once

#include <memory>

#include "savns/field.hpp"

namespace savns {

/// How finite-difference systems are solved.
enum class FdPreconditioner {
  /// Sparse LU of the assembled operator (UMFPACK when the build found it,
  /// Eigen's SparseLU otherwise), computed once, plus residual refinement.
  SparseLU,
  /// Jacobi-preconditioned BiCGStab. Only practical when gamma*h^-2 is
  /// moderate.
  Jacobi,
};

struct SolveInfo {
  int iterations = 0;
  /// ||L u - rhs|| / ||rhs|| of the returned field.
  double relative_residual = 0.0;
  /// True when the tolerance was unreachable and the solve stopped at the
  /// floating-point floor of the residual evaluation instead.
  bool roundoff_limited = false;
};

/// L(u) = sigma u - nu lap(u) - gamma grad(div u) on a fixed grid.
///
/// Periodic spectral grids are solved mode by mode. Finite-difference grids
/// assemble the matrix on the interior unknowns (the one-sided boundary rows
/// of the divergence make it nonsymmetric); the matrix and its factorisation
/// are built on first use and shared by copies of the operator, so one
/// operator serves every step of a run.
class EllipticOperator {
 public:
  EllipticOperator(const Grid& grid, double sigma, double nu, double gamma,
                   FdPreconditioner pc = FdPreconditioner::SparseLU);

  const Grid& grid() const { return grid_; }
  double sigma() const { return sigma_; }
  double nu() const { return nu_; }
  double gamma() const { return gamma_; }

  /// Operator action via the field operators. Boundary values of u are
  /// treated as zero on Dirichlet grids and the output vanishes there.
  VectorField apply(const VectorField& u) const;

  /// Returns u with ||apply(u) - rhs|| <= tol ||rhs||, or at the roundoff
  /// floor when that is larger. Throws SolverError otherwise.
  VectorField solve(const VectorField& rhs, double tol = 1e-12,
                    SolveInfo* info = nullptr) const;

  /// Iteration cap for the iterative path; defaults to 10 * nx * ny.
  void set_max_iterations(int n) { max_iterations_ = n; }

 private:
  struct FdSystem;
  struct FdCache;

  VectorField solve_spectral(const VectorField& rhs) const;
  VectorField solve_fd(const VectorField& rhs, double tol, SolveInfo& info) const;
  const FdSystem& fd_system() const;

  Grid grid_;
  double sigma_, nu_, gamma_;
  FdPreconditioner pc_;
  int max_iterations_;
  std::shared_ptr<FdCache> cache_;
};

}  // namespace savns
