#pragma once

#include <memory>
#include <utility>

#include "savns/state.hpp"

namespace savns {

/// Projection states reuse FlowState; q stays 1 and p has zero mean.
using ProjectionState = FlowState;

/// Leray projection on a spectral grid: u - k (k . u) / |k|^2 per mode, with
/// the derivative symbols of the spectral backend, so the result is
/// divergence-free to roundoff. The mean mode is kept.
VectorField leray_project(const VectorField& u);

/// First-order linearised projection scheme:
///   (1/dt + (u^n . grad) - nu lap) u~ = u^n/dt + f^{n+1},  u~ = 0 on walls
///   lap p = div(u~)/dt, homogeneous Neumann, zero mean
///   u^{n+1} = u~ - dt grad p
///
/// The advection-diffusion solve is BiCGStab preconditioned by the exact
/// inverse of 1/dt - nu lap. On Dirichlet grids the pressure Poisson problem
/// uses the 5-point Laplacian with ghost-node reflection, bordered by the
/// zero-mean condition; on spectral grids it is the exact Leray projection.
/// Walls clamp u^{n+1} to zero, which drops the tangential slip the scheme
/// leaves there.
class ProjectionStepper {
 public:
  ProjectionStepper(const Grid& grid, SchemeConfig cfg);
  ~ProjectionStepper();
  ProjectionStepper(ProjectionStepper&&) noexcept;

  const SchemeConfig& config() const { return cfg_; }

  /// Diagnostics: residual_momentum is the advection-diffusion relative
  /// residual, constraint_residual the Poisson residual (max-norm), energy
  /// |u|^2/2. The energy identity does not apply (NaN).
  std::pair<ProjectionState, StepDiagnostics> step(const ProjectionState& s);

 private:
  struct Impl;
  Grid grid_;
  SchemeConfig cfg_;
  std::unique_ptr<Impl> impl_;
};

std::pair<ProjectionState, StepDiagnostics> projection_step(const ProjectionState& s,
                                                            const SchemeConfig& cfg);

}  // namespace savns
