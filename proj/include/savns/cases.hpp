#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "savns/grid.hpp"
#include "savns/state.hpp"

namespace savns {

enum class CaseId {
  /// Dirichlet box [0,1]^2, u = sin(t) (sin^2(pi x) sin(2 pi y),
  /// -sin(2 pi x) sin^2(pi y)), p = sin(t) cos(pi x) sin(pi y).
  Example1,
  /// Taylor-Green vortex on the periodic box [0, 2 pi]^2.
  Example2,
};

std::string_view to_string(CaseId id);
CaseId case_from_string(std::string_view name);

/// Closed-form solution of the incompressible Navier-Stokes equations with
/// the forcing that makes it exact.
struct ManufacturedCase {
  CaseId id = CaseId::Example1;
  double nu = 1.0;
  Boundary bc = Boundary::Dirichlet;
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  VelocityFunction exact_u;
  ScalarFunction exact_p;
  /// f = du/dt + (u . grad) u - nu lap u + grad p.
  VelocityFunction forcing;

  /// n x n grid over the case domain. Periodic cases default to spectral.
  Grid grid(int n, std::optional<Discretization> disc = std::nullopt) const;
  FlowState initial_state(const Grid& grid, double t0 = 0.0) const;
  /// True when the forcing is identically zero (Taylor-Green with nu = 1).
  bool unforced() const { return id == CaseId::Example2 && nu == 1.0; }
};

ManufacturedCase make_case(CaseId id, double nu = 1.0);

}  // namespace savns
