#include "savns/psav.hpp"

#include <algorithm>

#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "savns/sav.hpp"

namespace savns {

const EllipticOperator& OperatorCache::get(double sigma, double gamma) {
  std::lock_guard lock(mutex_);
  auto key = std::make_pair(sigma, gamma);
  auto it = ops_.find(key);
  if (it == ops_.end())
    it = ops_.emplace(key, std::make_unique<EllipticOperator>(grid_, sigma, nu_,
                                                              gamma, pc_))
             .first;
  return *it->second;
}

void OperatorCache::require_compatible(const Grid& grid, double nu,
                                       FdPreconditioner pc) const {
  if (grid != grid_ || nu != nu_ || pc != pc_)
    throw ConfigError("shared operator cache was built for another grid, nu or solver");
}

std::size_t OperatorCache::size() const {
  std::lock_guard lock(mutex_);
  return ops_.size();
}

std::shared_ptr<OperatorCache> shared_cache(std::shared_ptr<OperatorCache> ops,
                                            const Grid& grid, const SchemeConfig& cfg) {
  if (!ops) return std::make_shared<OperatorCache>(grid, cfg.nu, cfg.preconditioner);
  ops->require_compatible(grid, cfg.nu, cfg.preconditioner);
  return ops;
}

ScalarField recover_pressure(const VectorField& u, double eps) {
  if (!(eps > 0)) throw ConfigError("eps must be positive");
  ScalarField p = divergence(u);
  p *= -1.0 / eps;
  return p;
}

double penalty_residual(const VectorField& u, const ScalarField& p, double eps) {
  ScalarField r = divergence(u);
  r.axpy(eps, p);
  return linf(r);
}

PenaltySavStepper::PenaltySavStepper(const Grid& grid, SchemeConfig cfg,
                                     std::shared_ptr<OperatorCache> ops)
    : grid_(grid), cfg_(std::move(cfg)) {
  cfg_.validate();
  ops_ = shared_cache(std::move(ops), grid_, cfg_);
}

void PenaltySavStepper::fill_solve_info(StepDiagnostics& d, const SolveInfo& a,
                                        const SolveInfo& b) const {
  d.solve.iterations = std::max(a.iterations, b.iterations);
  d.solve.relative_residual = std::max(a.relative_residual, b.relative_residual);
  d.solve.roundoff_limited = a.roundoff_limited || b.roundoff_limited;
}

std::pair<FlowState, StepDiagnostics> PenaltySavStepper::step_first_order(
    const FlowState& s, double dt) {
  require_same_grid(grid_, s.u.grid(), "step_first_order");
  const double eps = cfg_.eps;
  const EllipticOperator& op = ops_->get(1.0 / dt, 1.0 / eps);
  const double t_new = s.t + dt;

  const VectorField f = sample_velocity(cfg_.forcing, grid_, t_new);
  VectorField rhs1 = (1.0 / dt) * s.u + f;
  rhs1.clamp_boundary();
  const VectorField n = nonlinear_form(s.u);
  VectorField rhs2 = -1.0 * n;
  rhs2.clamp_boundary();

  SolveInfo i1, i2;
  const VectorField u1 = op.solve(rhs1, cfg_.solver_tol, &i1);
  const VectorField u2 = op.solve(rhs2, cfg_.solver_tol, &i2);
  const double q_new = solve_q_first_order(s.q, n, u1, u2, dt);

  FlowState out;
  out.u = u1;
  out.u.axpy(q_new, u2);
  out.u.clamp_boundary();
  out.p = recover_pressure(out.u, eps);
  out.q = q_new;
  out.t = t_new;
  out.step = s.step + 1;

  StepDiagnostics d;
  fill_solve_info(d, i1, i2);
  VectorField rhs = rhs1;
  rhs.axpy(q_new, rhs2);
  d.rhs_norm = l2(rhs);
  d.residual_abs = l2(op.apply(out.u) - rhs);
  d.residual_momentum = d.rhs_norm > 0 ? d.residual_abs / d.rhs_norm : d.residual_abs;

  const ScalarField div = divergence(out.u);
  const double e_old = discrete_energy(s.u, s.q);
  d.energy = discrete_energy(out.u, q_new);
  d.energy_dissipation = dt / eps * inner_product(div, div) +
                         dt * cfg_.nu * viscous_dissipation(out.u);
  const VectorField du = out.u - s.u;
  const double dq = q_new - s.q;
  d.energy_residual = d.energy - e_old + 0.5 * (inner_product(du, du) + dq * dq) +
                      d.energy_dissipation - dt * inner_product(f, out.u);
  d.div_linf = linf(div);
  d.constraint_residual = penalty_residual(out.u, out.p, eps);
  d.constraint_scale = d.div_linf;
  d.q_value = q_new;
  return {std::move(out), d};
}

std::pair<FlowState, StepDiagnostics> PenaltySavStepper::step_second_order(
    const FlowState& s, const FlowState& prev) {
  require_same_grid(grid_, s.u.grid(), "step_second_order");
  const double dt = cfg_.dt;
  const double eps = cfg_.eps;
  const EllipticOperator& op = ops_->get(2.0 / dt, 1.0 / eps);

  const VectorField u_tilde = extrapolate_to_midpoint(prev, s, dt);
  const VectorField f = sample_velocity(cfg_.forcing, grid_, s.t + 0.5 * dt);
  VectorField rhs1 = (2.0 / dt) * s.u + f;
  rhs1.clamp_boundary();
  const VectorField n = nonlinear_form(u_tilde);
  VectorField rhs2 = -1.0 * n;
  rhs2.clamp_boundary();

  SolveInfo i1, i2;
  const VectorField w1 = op.solve(rhs1, cfg_.solver_tol, &i1);
  const VectorField w2 = op.solve(rhs2, cfg_.solver_tol, &i2);
  const double q_new = solve_q_second_order(s.q, n, w1, w2, dt);
  const double q_half = 0.5 * (s.q + q_new);

  VectorField w = w1;
  w.axpy(q_half, w2);
  w.clamp_boundary();

  FlowState out;
  out.u = 2.0 * w - s.u;
  out.u.clamp_boundary();
  p_half_ = recover_pressure(w, eps);
  out.p = extrapolate_pressure(s, p_half_);
  out.p_half = p_half_;
  out.q = q_new;
  out.t = s.t + dt;
  out.step = s.step + 1;

  StepDiagnostics d;
  fill_solve_info(d, i1, i2);
  VectorField rhs = rhs1;
  rhs.axpy(q_half, rhs2);
  d.rhs_norm = l2(rhs);
  d.residual_abs = l2(op.apply(w) - rhs);
  d.residual_momentum = d.rhs_norm > 0 ? d.residual_abs / d.rhs_norm : d.residual_abs;

  const ScalarField div_w = divergence(w);
  const double e_old = discrete_energy(s.u, s.q);
  d.energy = discrete_energy(out.u, q_new);
  d.energy_dissipation = dt / eps * inner_product(div_w, div_w) +
                         dt * cfg_.nu * viscous_dissipation(w);
  d.energy_residual =
      d.energy - e_old + d.energy_dissipation - dt * inner_product(f, w);
  d.div_linf = linf(divergence(out.u));
  d.constraint_residual = penalty_residual(w, p_half_, eps);
  d.constraint_scale = linf(div_w);
  d.q_value = q_new;
  w_half_ = std::move(w);
  return {std::move(out), d};
}

FlowState PenaltySavStepper::start_second_order(const FlowState& s0) {
  return step_first_order(s0, 0.5 * cfg_.dt).first;
}

std::pair<FlowState, StepDiagnostics> step_first_order(const FlowState& s,
                                                       const SchemeConfig& cfg) {
  PenaltySavStepper stepper(s.u.grid(), cfg);
  return stepper.step_first_order(s);
}

std::pair<FlowState, StepDiagnostics> step_second_order(
    const FlowState& s, const FlowState& prev, const SchemeConfig& cfg) {
  PenaltySavStepper stepper(s.u.grid(), cfg);
  return stepper.step_second_order(s, prev);
}

FlowState start_second_order(const FlowState& s0, const SchemeConfig& cfg) {
  PenaltySavStepper stepper(s0.u.grid(), cfg);
  return stepper.start_second_order(s0);
}

}  // namespace savns
