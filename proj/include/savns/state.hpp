#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include "savns/elliptic.hpp"
#include "savns/field.hpp"

namespace savns {

/// f(t, x, y) -> (f1, f2). An empty function means f = 0.
using VelocityFunction =
    std::function<std::pair<double, double>(double, double, double)>;
/// p(t, x, y).
using ScalarFunction = std::function<double(double, double, double)>;

VectorField sample_velocity(const VelocityFunction& f, const Grid& grid,
                            double t);
ScalarField sample_scalar(const ScalarFunction& f, const Grid& grid, double t);

struct SchemeConfig {
  double dt = 0.01;
  double nu = 1.0;
  double eps = 1e-5;
  int order = 1;
  VelocityFunction forcing;
  double solver_tol = 1e-12;
  FdPreconditioner preconditioner = FdPreconditioner::SparseLU;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

struct FlowState {
  VectorField u;
  /// Pressure at time t.
  ScalarField p;
  /// Midpoint pressure p^{n-1/2} of the second-order step that produced
  /// this state; empty otherwise.
  ScalarField p_half;
  double q = 1.0;
  double t = 0.0;
  std::int64_t step = 0;

  /// u = u0, p = 0 (or p0 when given), q = 1.
  static FlowState initial(VectorField u0, double t0 = 0.0);
  static FlowState initial(VectorField u0, ScalarField p0, double t0);
};

/// Per-step monitors. Energy quantities use E = |u|^2/2 + q^2/2 - 1/2.
struct StepDiagnostics {
  double energy = 0.0;
  /// dt/eps |div u*|^2 + dt nu |grad u*|^2 with u* the implicit velocity
  /// (u^{n+1} first order, u^{n+1/2} midpoint).
  double energy_dissipation = 0.0;
  /// Residual of the discrete energy law including the work of f. NaN for
  /// schemes without an exact law.
  double energy_residual = std::numeric_limits<double>::quiet_NaN();
  double div_linf = 0.0;
  /// Max-norm residual of the scheme's pressure relation, recomputed from
  /// the stored fields: div u + eps p for P-SAV, the regularised constraint
  /// of the last inner iteration for SR-SAV.
  double constraint_residual = 0.0;
  /// Max-norm of the largest term in that relation (eps p included), for relative checks.
  double constraint_scale = 0.0;
  double q_value = 1.0;
  /// ||L u* - rhs|| / ||rhs|| of the coupled (unsplit) momentum system.
  double residual_momentum = 0.0;
  /// Absolute ||L u* - rhs|| and ||rhs|| behind residual_momentum.
  double residual_abs = 0.0;
  double rhs_norm = 0.0;
  /// Worst solver outcome during the step.
  SolveInfo solve;
};

double discrete_energy(const VectorField& u, double q);

/// Pressure at t^{n+1} from the new midpoint pressure: 3/2 p^{n+1/2} -
/// 1/2 p^{n-1/2} when `cur` carries p^{n-1/2}, else 2 p^{n+1/2} - p^n.
ScalarField extrapolate_pressure(const FlowState& cur, const ScalarField& p_half);

/// Linear extrapolation of (t_prev, u_prev), (t, u) to t + dt/2. When
/// t_prev = t - dt this is 3/2 u - 1/2 u_prev; when t_prev = t + dt/2 (a
/// startup half state) it returns u_prev.
VectorField extrapolate_to_midpoint(const FlowState& prev, const FlowState& cur,
                                    double dt);

}  // namespace savns
