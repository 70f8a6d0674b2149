#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "savns/elliptic.hpp"
#include "savns/state.hpp"

namespace savns {

/// Elliptic operators keyed by (sigma, gamma) for one grid and viscosity.
/// Every step of a run reuses the same one or two operators, and with them
/// the factorisation or spectral symbols. Steppers may share one cache, e.g.
/// across the rows of a sweep.
class OperatorCache {
 public:
  OperatorCache(const Grid& grid, double nu, FdPreconditioner pc)
      : grid_(grid), nu_(nu), pc_(pc) {}
  const EllipticOperator& get(double sigma, double gamma);

  /// Throws ConfigError unless the cache was built for these settings.
  void require_compatible(const Grid& grid, double nu, FdPreconditioner pc) const;
  std::size_t size() const;

 private:
  Grid grid_;
  double nu_;
  FdPreconditioner pc_;
  mutable std::mutex mutex_;
  std::map<std::pair<double, double>, std::unique_ptr<EllipticOperator>> ops_;
};

/// `ops` when it matches grid/nu/solver (throws otherwise), else a new cache.
std::shared_ptr<OperatorCache> shared_cache(std::shared_ptr<OperatorCache> ops,
                                            const Grid& grid, const SchemeConfig& cfg);

/// p = -div(u) / eps.
ScalarField recover_pressure(const VectorField& u, double eps);
/// max |div u + eps p|.
double penalty_residual(const VectorField& u, const ScalarField& p, double eps);

/// Penalty-SAV time stepping.
///
/// First order: u^{n+1} = u1 + q^{n+1} u2 with
///   (1/dt - nu lap - 1/eps grad div) u1 = u^n/dt + f^{n+1}
///   (1/dt - nu lap - 1/eps grad div) u2 = -N(u^n)
/// and q^{n+1} from the scalar q-equation. The second-order midpoint scheme
/// solves the same pair for w = u^{n+1/2} with 2/dt in place of 1/dt and
/// N evaluated at the extrapolated 3/2 u^n - 1/2 u^{n-1}.
class PenaltySavStepper {
 public:
  /// `ops` may be shared with other steppers; a private cache is created
  /// when it is null.
  PenaltySavStepper(const Grid& grid, SchemeConfig cfg,
                    std::shared_ptr<OperatorCache> ops = nullptr);

  const SchemeConfig& config() const { return cfg_; }
  const Grid& grid() const { return grid_; }

  std::pair<FlowState, StepDiagnostics> step_first_order(const FlowState& s) {
    return step_first_order(s, cfg_.dt);
  }
  std::pair<FlowState, StepDiagnostics> step_first_order(const FlowState& s,
                                                         double dt);

  /// `prev` is either the state one step back or the startup half state.
  /// The returned state carries p^{n+1/2} in `p_half` and p at t^{n+1}
  /// extrapolated from the last two midpoint pressures (see
  /// extrapolate_pressure).
  std::pair<FlowState, StepDiagnostics> step_second_order(const FlowState& s,
                                                          const FlowState& prev);

  /// One first-order step of size dt/2 from the initial state.
  FlowState start_second_order(const FlowState& s0);

  /// Pressure at the last midpoint, -div(u^{n+1/2}) / eps.
  const ScalarField& midpoint_pressure() const { return p_half_; }
  /// Last midpoint velocity u^{n+1/2}.
  const VectorField& midpoint_velocity() const { return w_half_; }

 private:
  void fill_solve_info(StepDiagnostics& d, const SolveInfo& a,
                       const SolveInfo& b) const;

  Grid grid_;
  SchemeConfig cfg_;
  std::shared_ptr<OperatorCache> ops_;
  ScalarField p_half_;
  VectorField w_half_;
};

/// Stateless wrappers; each call builds a fresh operator.
std::pair<FlowState, StepDiagnostics> step_first_order(const FlowState& s,
                                                       const SchemeConfig& cfg);
std::pair<FlowState, StepDiagnostics> step_second_order(
    const FlowState& s, const FlowState& prev, const SchemeConfig& cfg);
FlowState start_second_order(const FlowState& s0, const SchemeConfig& cfg);

}  // namespace savns
