#pragma once

// Small preconditioned Krylov solvers on Eigen vectors. The operator and the
// preconditioner are callables `Vec(const Vec&)`.

#include <algorithm>
#include <cmath>
#include <limits>

#include "fd_matrices.hpp"

namespace savns::detail {

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;  // recursive residual norm at exit
  bool converged = false;
};

/// Preconditioned conjugate gradients from x (updated in place).
template <class Op, class Pc>
KrylovResult pcg(const Op& apply, const Pc& precondition, const Vec& b, Vec& x,
                 double target, int max_iterations) {
  KrylovResult res;
  Vec r = b - apply(x);
  res.residual = r.norm();
  if (res.residual <= target) {
    res.converged = true;
    return res;
  }
  Vec z = precondition(r);
  Vec p = z;
  double rz = r.dot(z);
  for (int k = 0; k < max_iterations; ++k) {
    Vec ap = apply(p);
    const double pap = p.dot(ap);
    if (!(pap > 0)) break;
    const double alpha = rz / pap;
    x += alpha * p;
    r -= alpha * ap;
    res.iterations = k + 1;
    res.residual = r.norm();
    if (res.residual <= target) {
      res.converged = true;
      break;
    }
    z = precondition(r);
    const double rz_new = r.dot(z);
    p = z + (rz_new / rz) * p;
    rz = rz_new;
  }
  return res;
}

/// Right-preconditioned BiCGStab from x (updated in place).
template <class Op, class Pc>
KrylovResult bicgstab(const Op& apply, const Pc& precondition, const Vec& b,
                      Vec& x, double target, int max_iterations) {
  KrylovResult res;
  Vec r = b - apply(x);
  res.residual = r.norm();
  if (res.residual <= target) {
    res.converged = true;
    return res;
  }
  const Vec r_hat = r;
  double rho = 1, alpha = 1, omega = 1;
  Vec v = Vec::Zero(b.size()), p = Vec::Zero(b.size());
  for (int k = 0; k < max_iterations; ++k) {
    const double rho_new = r_hat.dot(r);
    if (rho_new == 0.0) break;
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    p = r + beta * (p - omega * v);
    Vec p_hat = precondition(p);
    v = apply(p_hat);
    alpha = rho / r_hat.dot(v);
    Vec s = r - alpha * v;
    res.iterations = k + 1;
    if (s.norm() <= target) {
      x += alpha * p_hat;
      res.residual = s.norm();
      res.converged = true;
      break;
    }
    Vec s_hat = precondition(s);
    Vec t = apply(s_hat);
    omega = t.dot(s) / t.squaredNorm();
    x += alpha * p_hat + omega * s_hat;
    r = s - omega * t;
    res.residual = r.norm();
    if (res.residual <= target) {
      res.converged = true;
      break;
    }
    if (omega == 0.0) break;
  }
  return res;
}

/// Bound on the rounding error of evaluating b - A x in double precision.
inline double residual_floor(const SpMat& a_abs, const Vec& b, const Vec& x) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  return 32.0 * eps * (b.cwiseAbs() + a_abs * x.cwiseAbs()).norm();
}

struct RefinedSolve {
  int iterations = 0;
  double residual = 0.0;
  bool roundoff_limited = false;
  bool converged = false;
};

/// Restarted BiCGStab on the true residual: stops at `target`, or at
/// floor(x) (the rounding floor of b - A x) when that is larger, or when a
/// restart fails to halve the residual.
template <class Op, class Pc, class Floor>
RefinedSolve refined_bicgstab(const Op& apply, const Pc& precondition, const Vec& b,
                              Vec& x, double target, const Floor& floor,
                              int max_iterations) {
  RefinedSolve out;
  double previous = std::numeric_limits<double>::infinity();
  for (;;) {
    const Vec r = b - apply(x);
    out.residual = r.norm();
    if (out.residual <= target) {
      out.converged = true;
      return out;
    }
    const double fl = floor(x);
    if (out.residual <= fl) {
      out.converged = out.roundoff_limited = true;
      return out;
    }
    if (out.residual > 0.5 * previous || out.iterations >= max_iterations) return out;
    previous = out.residual;
    Vec d = Vec::Zero(b.size());
    auto res = bicgstab(apply, precondition, r, d, 0.5 * std::max(target, fl),
                        max_iterations - out.iterations);
    out.iterations += std::max(res.iterations, 1);
    x += d;
  }
}

}  // namespace savns::detail
