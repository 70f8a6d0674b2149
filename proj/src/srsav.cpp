#include "savns/srsav.hpp"

#include <algorithm>
#include <cmath>

#include "savns/errors.hpp"
#include "savns/operators.hpp"
#include "savns/sav.hpp"

namespace savns {

void SrConfig::validate() const {
  base.validate();
  if (!(beta >= 0) || !std::isfinite(beta)) throw ConfigError("beta must be >= 0");
  if (s < 1) throw ConfigError("s must be a positive integer");
}

SrSavStepper::SrSavStepper(const Grid& grid, SrConfig cfg,
                           std::shared_ptr<OperatorCache> ops)
    : grid_(grid), cfg_(std::move(cfg)) {
  cfg_.validate();
  ops_ = shared_cache(std::move(ops), grid_, cfg_.base);
}

namespace {

const FlowState& sequence(const SrState& s, int k) {
  return s.sequences.empty() ? s.flow : s.sequences[k];
}

void merge(SolveInfo& into, const SolveInfo& other) {
  into.iterations = std::max(into.iterations, other.iterations);
  into.relative_residual = std::max(into.relative_residual, other.relative_residual);
  into.roundoff_limited |= other.roundoff_limited;
}

struct Sweep {
  // Per iteration k = 1..s: implicit velocity (u^{n+1} or u^{n+1/2}), q^{n+1}
  // and the pressure p_k; pressures[0] is p_0.
  std::vector<VectorField> w;
  std::vector<double> q;
  std::vector<ScalarField> pressures;
  StepDiagnostics diag;
};

// Runs the s inner iterations. `source[k]` is the state iteration k advances
// from and `adv[k]` the velocity its nonlinear term is evaluated at. `c` is
// 1/dt (first order) or 2/dt (midpoint).
Sweep sweep(const SrConfig& cfg, const EllipticOperator& op,
            const std::vector<const FlowState*>& source,
            const std::vector<VectorField>& adv, const ScalarField& p0,
            const VectorField& f, double c, double dt, bool midpoint) {
  const double eps = cfg.base.eps;
  const double beta = cfg.beta;
  const double tol = cfg.base.solver_tol;

  Sweep out;
  out.pressures.push_back(p0);
  const FlowState* shared_source = nullptr;
  VectorField n, rhs2, u2, div_free_base;
  ScalarField div_old;
  VectorField base;
  for (int k = 0; k < cfg.s; ++k) {
    const FlowState& src = *source[k];
    if (&src != shared_source) {
      // New source: rebuild the parts that depend on it only.
      shared_source = &src;
      div_old = divergence(src.u);
      base = c * src.u + f;
      base.axpy(-c / eps, gradient(div_old));
      n = nonlinear_form(adv[k]);
      rhs2 = -1.0 * n;
      rhs2.clamp_boundary();
      SolveInfo i2;
      u2 = op.solve(rhs2, tol, &i2);
      merge(out.diag.solve, i2);
    }
    const ScalarField& p_prev = out.pressures.back();
    VectorField rhs1 = base;
    rhs1.axpy(-1.0, gradient(p_prev));
    rhs1.clamp_boundary();
    SolveInfo i1;
    const VectorField u1 = op.solve(rhs1, tol, &i1);
    merge(out.diag.solve, i1);

    const double q_new = midpoint ? solve_q_second_order(src.q, n, u1, u2, dt)
                                  : solve_q_first_order(src.q, n, u1, u2, dt);
    const double q_lin = midpoint ? 0.5 * (src.q + q_new) : q_new;
    VectorField w = u1;
    w.axpy(q_lin, u2);
    w.clamp_boundary();

    // p_k = p_{k-1} - [c (div w - div u^n) + beta div w] / eps
    const ScalarField div_w = divergence(w);
    ScalarField jump = div_w - div_old;
    jump *= c;
    jump.axpy(beta, div_w);
    ScalarField p = p_prev;
    p.axpy(-1.0 / eps, jump);

    if (k + 1 == cfg.s) {
      VectorField rhs = rhs1;
      rhs.axpy(q_lin, rhs2);
      out.diag.rhs_norm = l2(rhs);
      out.diag.residual_abs = l2(op.apply(w) - rhs);
      out.diag.residual_momentum = out.diag.rhs_norm > 0
                                       ? out.diag.residual_abs / out.diag.rhs_norm
                                       : out.diag.residual_abs;
      const ScalarField dp = p - p_prev;
      ScalarField con = jump;
      con.axpy(eps, dp);
      out.diag.constraint_residual = linf(con);
      // p is only stored to rounding, so eps |p| bounds what the identity can show.
      out.diag.constraint_scale =
          std::max({linf(jump), eps * linf(dp), eps * linf(p), eps * linf(p_prev)});
    }
    out.w.push_back(std::move(w));
    out.q.push_back(q_new);
    out.pressures.push_back(std::move(p));
  }
  return out;
}

std::vector<const FlowState*> sources(const SrConfig& cfg, const SrState& s) {
  std::vector<const FlowState*> src;
  for (int k = 0; k < cfg.s; ++k)
    src.push_back(cfg.history == SrHistory::PerSequence ? &sequence(s, k) : &s.flow);
  return src;
}

ScalarField initial_pressure(const SrConfig& cfg, const SrState& s) {
  return cfg.warm_start ? s.flow.p : ScalarField(s.flow.u.grid());
}

}  // namespace

std::pair<SrState, StepDiagnostics> SrSavStepper::step_first_order(const SrState& s,
                                                                   double dt) {
  const FlowState& st = s.flow;
  require_same_grid(grid_, st.u.grid(), "sr_step_first_order");
  const double eps = cfg_.base.eps;
  const EllipticOperator& op = ops_->get(1.0 / dt, 1.0 / (eps * dt) + cfg_.beta / eps);
  const VectorField f = sample_velocity(cfg_.base.forcing, grid_, st.t + dt);
  const auto src = sources(cfg_, s);
  std::vector<VectorField> adv;
  for (const FlowState* p : src) adv.push_back(p->u);
  Sweep sw = sweep(cfg_, op, src, adv, initial_pressure(cfg_, s), f, 1.0 / dt, dt,
                   false);

  SrState out;
  for (int k = 0; k < cfg_.s; ++k) {
    FlowState next;
    next.u = std::move(sw.w[k]);
    next.p = sw.pressures[k + 1];
    next.q = sw.q[k];
    next.t = st.t + dt;
    next.step = st.step + 1;
    if (k + 1 == cfg_.s)
      out.flow = next;
    if (cfg_.history == SrHistory::PerSequence) out.sequences.push_back(std::move(next));
  }
  out.pressure_history = std::move(sw.pressures);

  StepDiagnostics d = sw.diag;
  d.energy = discrete_energy(out.flow.u, out.flow.q);
  d.energy_dissipation = dt * cfg_.base.nu * viscous_dissipation(out.flow.u);
  d.div_linf = linf(divergence(out.flow.u));
  d.q_value = out.flow.q;
  return {std::move(out), d};
}

std::pair<SrState, StepDiagnostics> SrSavStepper::step_second_order(
    const SrState& s, const SrState& prev) {
  const FlowState& st = s.flow;
  require_same_grid(grid_, st.u.grid(), "sr_step_second_order");
  const double dt = cfg_.base.dt;
  const double eps = cfg_.base.eps;
  const EllipticOperator& op =
      ops_->get(2.0 / dt, 2.0 / (eps * dt) + cfg_.beta / eps);
  const VectorField f = sample_velocity(cfg_.base.forcing, grid_, st.t + 0.5 * dt);
  const auto src = sources(cfg_, s);
  std::vector<VectorField> adv;
  for (int k = 0; k < cfg_.s; ++k) {
    const FlowState& before = cfg_.history == SrHistory::PerSequence
                                  ? sequence(prev, k)
                                  : prev.flow;
    adv.push_back(extrapolate_to_midpoint(before, *src[k], dt));
  }
  Sweep sw = sweep(cfg_, op, src, adv, initial_pressure(cfg_, s), f, 2.0 / dt, dt,
                   true);

  SrState out;
  for (int k = 0; k < cfg_.s; ++k) {
    FlowState next;
    next.u = 2.0 * sw.w[k] - src[k]->u;
    next.u.clamp_boundary();
    next.p = extrapolate_pressure(*src[k], sw.pressures[k + 1]);
    next.p_half = sw.pressures[k + 1];
    next.q = sw.q[k];
    next.t = st.t + dt;
    next.step = st.step + 1;
    if (k + 1 == cfg_.s) out.flow = next;
    if (cfg_.history == SrHistory::PerSequence) out.sequences.push_back(std::move(next));
  }
  out.pressure_history = std::move(sw.pressures);

  StepDiagnostics d = sw.diag;
  d.energy = discrete_energy(out.flow.u, out.flow.q);
  d.energy_dissipation = dt * cfg_.base.nu * viscous_dissipation(sw.w.back());
  d.div_linf = linf(divergence(out.flow.u));
  d.q_value = out.flow.q;
  return {std::move(out), d};
}

SrState SrSavStepper::start_second_order(const SrState& s0) {
  return step_first_order(s0, 0.5 * cfg_.base.dt).first;
}

std::pair<SrState, StepDiagnostics> sr_step_first_order(const SrState& s,
                                                        const SrConfig& cfg) {
  SrSavStepper stepper(s.flow.u.grid(), cfg);
  return stepper.step_first_order(s);
}

std::pair<SrState, StepDiagnostics> sr_step_second_order(const SrState& s,
                                                         const SrState& prev,
                                                         const SrConfig& cfg) {
  SrSavStepper stepper(s.flow.u.grid(), cfg);
  return stepper.step_second_order(s, prev);
}

SrState sr_start_second_order(const SrState& s0, const SrConfig& cfg) {
  SrSavStepper stepper(s0.flow.u.grid(), cfg);
  return stepper.start_second_order(s0);
}

}  // namespace savns
