#pragma once

#include <memory>

#include "fd_matrices.hpp"

namespace savns::detail {

/// Sparse LU of a square matrix: UMFPACK (METIS ordering) when the build has
/// it, Eigen's SparseLU otherwise. The matrix passed to factor() must
/// outlive the object. solve() is const and safe to call concurrently.
class DirectLU {
 public:
  DirectLU();
  ~DirectLU();
  DirectLU(const DirectLU&) = delete;
  DirectLU& operator=(const DirectLU&) = delete;

  /// Throws SolverError when the matrix is numerically singular.
  void factor(const SpMat& a);
  Vec solve(const Vec& r) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace savns::detail
