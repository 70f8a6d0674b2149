#include "savns/elliptic.hpp"

#include <cmath>
#include <limits>
#include <mutex>
#include <sstream>
#include <string>

#include "direct_lu.hpp"
#include "fd_matrices.hpp"
#include "krylov.hpp"
#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "spectral.hpp"

namespace savns {

using detail::Complex;
using detail::SpMat;
using detail::Vec;


struct EllipticOperator::FdSystem {
  std::vector<int> unknowns;
  SpMat a;
  SpMat a_abs;
  Vec inv_diag;
  detail::DirectLU lu;
};

struct EllipticOperator::FdCache {
  std::once_flag once;
  std::unique_ptr<FdSystem> system;
};

EllipticOperator::EllipticOperator(const Grid& grid, double sigma, double nu,
                                   double gamma, FdPreconditioner pc)
    : grid_(grid), sigma_(sigma), nu_(nu), gamma_(gamma), pc_(pc),
      max_iterations_(10 * grid.nx() * grid.ny()),
      cache_(std::make_shared<FdCache>()) {
  if (sigma < 0 || nu <= 0 || gamma < 0)
    throw ConfigError("elliptic operator needs sigma >= 0, nu > 0, gamma >= 0");
  if (grid.periodic() && !grid.spectral() && sigma == 0)
    throw ConfigError("periodic finite-difference operator needs sigma > 0");
}

VectorField EllipticOperator::apply(const VectorField& u) const {
  require_same_grid(grid_, u.grid(), "EllipticOperator::apply");
  VectorField v = u;
  v.clamp_boundary();
  VectorField out = sigma_ * v;
  out.axpy(-nu_, laplacian(v));
  if (gamma_ != 0.0) out.axpy(-gamma_, grad_div(v));
  out.clamp_boundary();
  return out;
}

const EllipticOperator::FdSystem& EllipticOperator::fd_system() const {
  std::call_once(cache_->once, [this] {
    auto sys = std::make_unique<FdSystem>();
    const Grid& g = grid_;
    const int n = static_cast<int>(g.size());
    const SpMat dx = detail::derivative_matrix(g, 0);
    const SpMat dy = detail::derivative_matrix(g, 1);
    const SpMat lap = detail::laplacian_matrix(g);
    const SpMat div = detail::hstack(dx, dy);
    const SpMat grad = detail::vstack(dx, dy);
    SpMat full = sigma_ * detail::identity_matrix(2 * n) -
                 nu_ * detail::block_diag(lap, lap);
    if (gamma_ != 0.0) {
      SpMat gd = grad * div;
      full -= gamma_ * gd;
    }
    sys->unknowns = detail::velocity_unknowns(g);
    sys->a = detail::restrict_to(full, sys->unknowns);
    sys->a.makeCompressed();
    sys->a_abs = sys->a.cwiseAbs();
    sys->inv_diag = sys->a.diagonal().cwiseInverse();
    if (pc_ == FdPreconditioner::SparseLU) sys->lu.factor(sys->a);
    cache_->system = std::move(sys);
  });
  return *cache_->system;
}

VectorField EllipticOperator::solve(const VectorField& rhs, double tol,
                                    SolveInfo* info) const {
  require_same_grid(grid_, rhs.grid(), "EllipticOperator::solve");
  if (!(tol > 0)) throw ConfigError("solver tolerance must be positive");
  SolveInfo local;
  VectorField u;
  if (grid_.spectral()) {
    u = solve_spectral(rhs);
    if (info) {
      const double rn = l2(rhs);
      local.relative_residual = rn > 0 ? l2(apply(u) - rhs) / rn : 0.0;
    }
  } else {
    u = solve_fd(rhs, tol, local);
  }
  if (info) *info = local;
  return u;
}

VectorField EllipticOperator::solve_spectral(const VectorField& rhs) const {
  const Grid& g = grid_;
  auto fft = detail::Fourier::for_grid(g);
  detail::Wavenumbers k(g);
  auto r0 = fft->forward(rhs.component(0));
  auto r1 = fft->forward(rhs.component(1));
  const double scale = std::max(1.0, std::abs(r0[0]) + std::abs(r1[0]));
  for (int j = 0; j < g.ny(); ++j) {
    for (int m = 0; m < fft->ncx(); ++m) {
      const auto idx = static_cast<std::size_t>(j) * fft->ncx() + m;
      const double kx = k.dx(m), ky = k.dy(j);
      const double kd2 = kx * kx + ky * ky;
      const double diag = sigma_ + nu_ * k.k2(m, j);
      if (diag == 0.0) {
        // Mean mode with sigma == 0: only solvable for mean-free data.
        if (std::abs(r0[idx]) + std::abs(r1[idx]) > 1e-12 * scale)
          throw ConfigError("rhs has a nonzero mean but sigma == 0");
        r0[idx] = r1[idx] = 0.0;
        continue;
      }
      // M(k) = diag I + gamma k k^T: longitudinal and transverse parts
      // decouple, which keeps the inverse well conditioned for large gamma.
      if (kd2 == 0.0 || gamma_ == 0.0) {
        r0[idx] /= diag;
        r1[idx] /= diag;
        continue;
      }
      const Complex kr = (kx * r0[idx] + ky * r1[idx]) / kd2;
      const Complex l0 = kx * kr, l1 = ky * kr;
      const double long_diag = diag + gamma_ * kd2;
      r0[idx] = (r0[idx] - l0) / diag + l0 / long_diag;
      r1[idx] = (r1[idx] - l1) / diag + l1 / long_diag;
    }
  }
  return VectorField(ScalarField(g, fft->inverse(std::move(r0))),
                     ScalarField(g, fft->inverse(std::move(r1))));
}

VectorField EllipticOperator::solve_fd(const VectorField& rhs, double tol,
                                       SolveInfo& info) const {
  const FdSystem& sys = fd_system();
  const Vec b = detail::gather(rhs.data(), sys.unknowns);
  VectorField out(grid_);
  const double bn = b.norm();
  if (bn == 0.0) return out;

  auto op = [&](const Vec& v) -> Vec { return sys.a * v; };
  auto pc = [&](const Vec& r) -> Vec {
    if (pc_ == FdPreconditioner::SparseLU) return sys.lu.solve(r);
    return sys.inv_diag.cwiseProduct(r);
  };
  auto fail = [&](double rn, int iterations) {
    std::ostringstream msg;
    msg << "elliptic solve did not converge: relative residual " << rn / bn
        << " after " << iterations << " iterations";
    throw SolverError(msg.str(), rn / bn, iterations);
  };

  // The direct path refines the LU solution; the Jacobi path restarts
  // BiCGStab from the current iterate. Both stop at the tolerance or at the
  // rounding floor of the residual, whichever is larger.
  const double target = tol * bn;
  const bool direct = pc_ == FdPreconditioner::SparseLU;
  Vec x = direct ? pc(b) : Vec::Zero(b.size());
  double previous = std::numeric_limits<double>::infinity();
  int iterations = direct ? 1 : 0;
  for (;;) {
    const Vec r = b - op(x);
    const double rn = r.norm();
    if (rn <= target) break;
    if (rn <= detail::residual_floor(sys.a_abs, b, x)) {
      info.roundoff_limited = true;
      break;
    }
    if (rn > 0.5 * previous || iterations >= max_iterations_) fail(rn, iterations);
    previous = rn;
    if (direct) {
      x += pc(r);
      ++iterations;
      continue;
    }
    Vec d = Vec::Zero(b.size());
    const double floor = detail::residual_floor(sys.a_abs, b, x);
    auto res = detail::bicgstab(op, pc, r, d, 0.5 * std::max(target, floor),
                                max_iterations_ - iterations);
    iterations += std::max(res.iterations, 1);
    x += d;
  }
  info.iterations = iterations;
  info.relative_residual = (b - op(x)).norm() / bn;
  detail::scatter(x, sys.unknowns, out.data());
  return out;
}

}  // namespace savns
