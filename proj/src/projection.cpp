#include "savns/projection.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "direct_lu.hpp"
#include "fd_matrices.hpp"
#include "krylov.hpp"
#include "savns/elliptic.hpp"
#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "spectral.hpp"

namespace savns {

using detail::Complex;
using detail::SpMat;
using detail::Vec;

VectorField leray_project(const VectorField& u) {
  const Grid& g = u.grid();
  if (!g.spectral()) throw ConfigError("leray_project needs a spectral grid");
  auto fft = detail::Fourier::for_grid(g);
  detail::Wavenumbers k(g);
  auto u0 = fft->forward(u.component(0));
  auto u1 = fft->forward(u.component(1));
  for (int j = 0; j < g.ny(); ++j)
    for (int m = 0; m < fft->ncx(); ++m) {
      const double kx = k.dx(m), ky = k.dy(j);
      const double kd2 = kx * kx + ky * ky;
      if (kd2 == 0.0) continue;
      const auto idx = static_cast<std::size_t>(j) * fft->ncx() + m;
      const Complex kr = (kx * u0[idx] + ky * u1[idx]) / kd2;
      u0[idx] -= kx * kr;
      u1[idx] -= ky * kr;
    }
  return VectorField(ScalarField(g, fft->inverse(std::move(u0))),
                     ScalarField(g, fft->inverse(std::move(u1))));
}

namespace {

// (a . grad) b, dealiased on spectral grids.
VectorField convective(const VectorField& a, const VectorField& b) {
  const Grid& g = a.grid();
  VectorField out(g);
  auto a0 = a.component(0);
  auto a1 = a.component(1);
  for (int c = 0; c < 2; ++c) {
    const ScalarField bc = b.component_field(c);
    const ScalarField bx = partial_x(bc);
    const ScalarField by = partial_y(bc);
    auto o = out.component(c);
    for (std::size_t k = 0; k < g.size(); ++k)
      o[k] = a0[k] * bx.values()[k] + a1[k] * by.values()[k];
  }
  return dealias(out);
}

std::vector<int> scalar_unknowns(const Grid& g) {
  std::vector<int> keep;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i)
      if (!g.on_boundary(i, j)) keep.push_back(static_cast<int>(g.index(i, j)));
  return keep;
}

[[noreturn]] void fail(const char* what, const detail::RefinedSolve& r, double bn) {
  std::ostringstream msg;
  msg << what << " did not converge: relative residual " << r.residual / bn << " after "
      << r.iterations << " iterations";
  throw SolverError(msg.str(), r.residual / bn, r.iterations);
}

constexpr int kMaxIterations = 2000;

}  // namespace

struct ProjectionStepper::Impl {
  // Finite-difference pieces.
  std::vector<int> unknowns;
  SpMat dx, dy, lap;
  SpMat helmholtz;  // sigma I - nu lap on the unknowns
  detail::DirectLU helmholtz_lu;
  SpMat poisson;  // Neumann Laplacian bordered by the zero-mean row
  detail::DirectLU poisson_lu;
  Vec weights;
  // Spectral preconditioner.
  std::unique_ptr<EllipticOperator> spectral_pc;
};

ProjectionStepper::ProjectionStepper(const Grid& grid, SchemeConfig cfg)
    : grid_(grid), cfg_(std::move(cfg)), impl_(std::make_unique<Impl>()) {
  cfg_.validate();
  const double sigma = 1.0 / cfg_.dt;
  Impl& m = *impl_;
  if (grid_.spectral()) {
    m.spectral_pc = std::make_unique<EllipticOperator>(grid_, sigma, cfg_.nu, 0.0);
    return;
  }
  const int n = static_cast<int>(grid_.size());
  m.unknowns = scalar_unknowns(grid_);
  m.dx = detail::derivative_matrix(grid_, 0);
  m.dy = detail::derivative_matrix(grid_, 1);
  m.lap = detail::laplacian_matrix(grid_);
  m.helmholtz = detail::restrict_to(
      sigma * detail::identity_matrix(n) - cfg_.nu * m.lap, m.unknowns);
  m.helmholtz.makeCompressed();
  m.helmholtz_lu.factor(m.helmholtz);

  m.weights.resize(n);
  for (int j = 0; j < grid_.ny(); ++j)
    for (int i = 0; i < grid_.nx(); ++i) m.weights[grid_.index(i, j)] = grid_.weight(i, j);
  const SpMat neumann = detail::neumann_laplacian_matrix(grid_);
  std::vector<Eigen::Triplet<double>> t;
  for (int k = 0; k < neumann.outerSize(); ++k)
    for (SpMat::InnerIterator it(neumann, k); it; ++it)
      t.emplace_back(it.row(), it.col(), it.value());
  const double wscale = 1.0 / m.weights.sum();
  for (int k = 0; k < n; ++k) {
    t.emplace_back(k, n, 1.0);
    t.emplace_back(n, k, m.weights[k] * wscale);
  }
  m.poisson.resize(n + 1, n + 1);
  m.poisson.setFromTriplets(t.begin(), t.end());
  m.poisson.makeCompressed();
  m.poisson_lu.factor(m.poisson);
}

ProjectionStepper::~ProjectionStepper() = default;
ProjectionStepper::ProjectionStepper(ProjectionStepper&&) noexcept = default;

std::pair<ProjectionState, StepDiagnostics> ProjectionStepper::step(
    const ProjectionState& s) {
  require_same_grid(grid_, s.u.grid(), "projection_step");
  const double dt = cfg_.dt;
  const double sigma = 1.0 / dt;
  const double tol = cfg_.solver_tol;
  const Impl& m = *impl_;
  constexpr double eps_mach = std::numeric_limits<double>::epsilon();

  VectorField rhs = sigma * s.u + sample_velocity(cfg_.forcing, grid_, s.t + dt);
  rhs.clamp_boundary();
  StepDiagnostics d;

  // Advection-diffusion predictor.
  VectorField u_tilde(grid_);
  if (grid_.spectral()) {
    const std::size_t n2 = 2 * grid_.size();
    auto field = [&](const Vec& v) {
      return VectorField(grid_, std::vector<double>(v.data(), v.data() + n2));
    };
    auto vec = [&](const VectorField& f) {
      return Vec(Eigen::Map<const Vec>(f.data().data(), n2));
    };
    auto op = [&](const Vec& v) {
      const VectorField f = field(v);
      VectorField out = sigma * f + convective(s.u, f);
      out.axpy(-cfg_.nu, laplacian(f));
      return vec(out);
    };
    auto pc = [&](const Vec& r) { return vec(m.spectral_pc->solve(field(r))); };
    // |op| is bounded by sigma + nu k_max^2 + |u| k_max.
    const detail::Wavenumbers k(grid_);
    const double kmax = std::max(grid_.nx() / 2 * k.sx, grid_.ny() / 2 * k.sy);
    const double op_bound = sigma + cfg_.nu * 2 * kmax * kmax + 2 * linf(s.u) * kmax;
    const Vec b = vec(rhs);
    const double bn = b.norm();
    Vec x = pc(b);
    auto floor = [&](const Vec& v) {
      return 32.0 * eps_mach * (bn + op_bound * v.norm());
    };
    if (bn > 0) {
      auto r = detail::refined_bicgstab(op, pc, b, x, tol * bn, floor, kMaxIterations);
      if (!r.converged) fail("projection predictor", r, bn);
      d.solve.iterations = r.iterations;
      d.solve.roundoff_limited = r.roundoff_limited;
      d.residual_abs = r.residual;
      d.rhs_norm = bn;
      u_tilde = field(x);
    }
  } else {
    const int n = static_cast<int>(grid_.size());
    const Vec a0 = Eigen::Map<const Vec>(s.u.component(0).data(), n);
    const Vec a1 = Eigen::Map<const Vec>(s.u.component(1).data(), n);
    SpMat full = sigma * detail::identity_matrix(n) - cfg_.nu * m.lap;
    full += SpMat(a0.asDiagonal() * m.dx) + SpMat(a1.asDiagonal() * m.dy);
    SpMat a = detail::restrict_to(full, m.unknowns);
    a.makeCompressed();
    const SpMat a_abs = a.cwiseAbs();
    auto op = [&](const Vec& v) -> Vec { return a * v; };
    auto pc = [&](const Vec& r) { return m.helmholtz_lu.solve(r); };
    double res2 = 0, rhs2 = 0;
    for (int c = 0; c < 2; ++c) {
      const Vec b = detail::gather(rhs.component(c), m.unknowns);
      const double bn = b.norm();
      rhs2 += bn * bn;
      if (bn == 0) continue;
      Vec x = pc(b);
      auto floor = [&](const Vec& v) { return detail::residual_floor(a_abs, b, v); };
      auto r = detail::refined_bicgstab(op, pc, b, x, tol * bn, floor, kMaxIterations);
      if (!r.converged) fail("projection predictor", r, bn);
      d.solve.iterations = std::max(d.solve.iterations, r.iterations);
      d.solve.roundoff_limited |= r.roundoff_limited;
      res2 += r.residual * r.residual;
      detail::scatter(x, m.unknowns, u_tilde.component(c));
    }
    d.residual_abs = std::sqrt(res2);
    d.rhs_norm = std::sqrt(rhs2);
  }
  d.residual_momentum = d.rhs_norm > 0 ? d.residual_abs / d.rhs_norm : d.residual_abs;
  d.solve.relative_residual = d.residual_momentum;

  // Pressure Poisson problem and correction.
  ProjectionState out;
  out.q = 1.0;
  out.t = s.t + dt;
  out.step = s.step + 1;
  ScalarField source = divergence(u_tilde);
  source *= 1.0 / dt;
  if (grid_.spectral()) {
    out.u = leray_project(u_tilde);
    // p = lap^{-1} (div u~ / dt), mean zero.
    auto fft = detail::Fourier::for_grid(grid_);
    detail::Wavenumbers k(grid_);
    auto sh = fft->forward(source.data());
    for (int j = 0; j < grid_.ny(); ++j)
      for (int mx = 0; mx < fft->ncx(); ++mx) {
        const auto idx = static_cast<std::size_t>(j) * fft->ncx() + mx;
        const double kd2 = k.dx(mx) * k.dx(mx) + k.dy(j) * k.dy(j);
        sh[idx] = kd2 == 0.0 ? Complex(0.0) : -sh[idx] / kd2;
      }
    out.p = ScalarField(grid_, fft->inverse(std::move(sh)));
    d.constraint_residual = 0.0;
  } else {
    const int n = static_cast<int>(grid_.size());
    Vec b(n + 1);
    const Vec src = Eigen::Map<const Vec>(source.data().data(), n);
    const double mean = m.weights.dot(src) / m.weights.sum();
    b.head(n) = src.array() - mean;
    b[n] = 0.0;
    const double compat = m.weights.dot(b.head(n));
    if (std::abs(compat) > 1e-12 * m.weights.dot(b.head(n).cwiseAbs()) + 1e-300)
      throw SolverError("Poisson right-hand side is incompatible after mean removal",
                        compat, 0);
    Vec x = m.poisson_lu.solve(b);
    x += m.poisson_lu.solve(b - m.poisson * x);
    out.p = ScalarField(grid_, std::vector<double>(x.data(), x.data() + n));
    const Vec r = b - m.poisson * x;
    d.constraint_residual = r.head(n).cwiseAbs().maxCoeff();
    d.constraint_scale = b.head(n).cwiseAbs().maxCoeff();
    out.u = u_tilde;
    out.u.axpy(-dt, gradient(out.p));
    out.u.clamp_boundary();
  }

  d.energy = discrete_energy(out.u, 1.0);
  d.div_linf = linf(divergence(out.u));
  d.q_value = 1.0;
  return {std::move(out), d};
}

std::pair<ProjectionState, StepDiagnostics> projection_step(const ProjectionState& s,
                                                            const SchemeConfig& cfg) {
  ProjectionStepper stepper(s.u.grid(), cfg);
  return stepper.step(s);
}

}  // namespace savns
