#pragma once

#include <vector>

#include "savns/psav.hpp"

namespace savns {

/// Which previous-time state the k-th inner iteration advances from.
enum class SrHistory {
  /// Iteration k advances its own sequence u_k^n, q_k^n, p_k^n; the last
  /// sequence is the reported flow state. Iteration k only borrows the
  /// pressure p_{k-1}^{n+1} from the sequence before it.
  PerSequence,
  /// Every iteration starts from the reported state u^n. One velocity
  /// history instead of s, but the regularisation error constant is
  /// different.
  Committed,
};

struct SrConfig {
  SchemeConfig base;
  /// Damping of the divergence in the regularised constraint.
  double beta = 1.0;
  /// Inner iterations per step.
  int s = 2;
  /// Start each step from the committed pressure instead of p_0 = 0.
  bool warm_start = false;
  SrHistory history = SrHistory::PerSequence;

  void validate() const;
};

struct SrState {
  FlowState flow;
  /// p_0 .. p_s of the last step: pressures at t^{n+1} for the first-order
  /// scheme, at t^{n+1/2} for the midpoint scheme.
  std::vector<ScalarField> pressure_history;
  /// Per-sequence states (PerSequence history only; empty means every
  /// sequence equals `flow`).
  std::vector<FlowState> sequences;

  static SrState from(FlowState flow) { return {std::move(flow), {}, {}}; }
};

/// Sequential-regularisation SAV stepping. Each step runs s penalty solves;
/// iteration k uses the constraint
///   (div u_k - div u^n)/dt + beta div u_k = -eps (p_k - p_{k-1})
/// so the velocity solve is
///   (sigma - nu lap - gamma grad div) u_k
///       = sigma u^n + f - (c/eps) grad div u^n - grad p_{k-1} - q N
/// with c = 1/dt, gamma = 1/(eps dt) + beta/eps for the first-order scheme
/// and c = 2/dt, gamma = 2/(eps dt) + beta/eps for the midpoint scheme
/// (unknown w = u^{n+1/2}). The q-equation is the P-SAV one in both cases.
class SrSavStepper {
 public:
  SrSavStepper(const Grid& grid, SrConfig cfg,
               std::shared_ptr<OperatorCache> ops = nullptr);

  const SrConfig& config() const { return cfg_; }

  std::pair<SrState, StepDiagnostics> step_first_order(const SrState& s) {
    return step_first_order(s, cfg_.base.dt);
  }
  std::pair<SrState, StepDiagnostics> step_first_order(const SrState& s, double dt);

  /// The stored pressure at t^{n+1} is extrapolated from the midpoint
  /// pressures as in the P-SAV midpoint scheme.
  std::pair<SrState, StepDiagnostics> step_second_order(const SrState& s,
                                                        const SrState& prev);

  /// One first-order SR step of size dt/2.
  SrState start_second_order(const SrState& s0);

 private:
  Grid grid_;
  SrConfig cfg_;
  std::shared_ptr<OperatorCache> ops_;
};

std::pair<SrState, StepDiagnostics> sr_step_first_order(const SrState& s,
                                                        const SrConfig& cfg);
std::pair<SrState, StepDiagnostics> sr_step_second_order(const SrState& s,
                                                         const SrState& prev,
                                                         const SrConfig& cfg);
SrState sr_start_second_order(const SrState& s0, const SrConfig& cfg);

}  // namespace savns
