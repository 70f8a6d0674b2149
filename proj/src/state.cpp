#include "savns/state.hpp"

#include <cmath>

#include "savns/errors.hpp"
#include "savns/operators.hpp"

namespace savns {

VectorField sample_velocity(const VelocityFunction& f, const Grid& grid,
                            double t) {
  if (!f) return VectorField(grid);
  VectorField out = VectorField::sample(
      grid, [&](double x, double y) { return f(t, x, y); });
  return out;
}

ScalarField sample_scalar(const ScalarFunction& f, const Grid& grid, double t) {
  if (!f) return ScalarField(grid);
  return ScalarField::sample(grid, [&](double x, double y) { return f(t, x, y); });
}

void SchemeConfig::validate() const {
  if (!(dt > 0) || !std::isfinite(dt)) throw ConfigError("dt must be positive");
  if (!(nu > 0)) throw ConfigError("nu must be positive");
  if (!(eps > 0)) throw ConfigError("eps must be positive");
  if (order != 1 && order != 2) throw ConfigError("order must be 1 or 2");
  if (!(solver_tol > 0)) throw ConfigError("solver_tol must be positive");
}

FlowState FlowState::initial(VectorField u0, double t0) {
  ScalarField p(u0.grid());
  return initial(std::move(u0), std::move(p), t0);
}

FlowState FlowState::initial(VectorField u0, ScalarField p0, double t0) {
  require_same_grid(u0.grid(), p0.grid(), "FlowState::initial");
  FlowState s;
  s.u = std::move(u0);
  s.u.clamp_boundary();
  s.p = std::move(p0);
  s.q = 1.0;
  s.t = t0;
  return s;
}

double discrete_energy(const VectorField& u, double q) {
  return 0.5 * inner_product(u, u) + 0.5 * q * q - 0.5;
}

ScalarField extrapolate_pressure(const FlowState& cur, const ScalarField& p_half) {
  if (cur.p_half.values().empty()) return 2.0 * p_half - cur.p;
  ScalarField out = p_half;
  out *= 1.5;
  out.axpy(-0.5, cur.p_half);
  return out;
}

VectorField extrapolate_to_midpoint(const FlowState& prev, const FlowState& cur,
                                    double dt) {
  const double span = cur.t - prev.t;
  if (span == 0.0) throw ConfigError("extrapolation needs two distinct times");
  // Snap the two layouts the steppers produce so roundoff in t does not
  // perturb the 3/2, -1/2 weights.
  if (std::abs(span + 0.5 * dt) <= 1e-9 * dt) return prev.u;
  const double w = std::abs(span - dt) <= 1e-9 * dt ? 0.5 : 0.5 * dt / span;
  VectorField out = cur.u;
  out *= 1.0 + w;
  out.axpy(-w, prev.u);
  return out;
}

}  // namespace savns
