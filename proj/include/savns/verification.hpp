#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "savns/cases.hpp"
#include "savns/psav.hpp"
#include "savns/srsav.hpp"

namespace savns {

enum class SchemeKind { Psav1, Psav2, Srsav1, Srsav2, Projection };

std::string_view to_string(SchemeKind s);
/// psav1, psav2, srsav1, srsav2 or projection.
SchemeKind scheme_from_string(std::string_view name);
int scheme_order(SchemeKind s);

/// Everything needed to reproduce one trajectory of a manufactured case.
struct RunSpec {
  CaseId case_id = CaseId::Example1;
  SchemeKind scheme = SchemeKind::Psav1;
  /// Nodes per axis.
  int n = 64;
  /// Periodic cases only; Dirichlet cases are always finite difference.
  Discretization discretization = Discretization::Spectral;
  int fd_order = 4;
  double dt = 1.0 / 32;
  double T = 1.0;
  double nu = 1.0;
  double eps = 1e-5;
  double beta = 1.0;
  int s = 2;
  SrHistory sr_history = SrHistory::PerSequence;
  bool warm_start = false;
  /// false drops the manufactured forcing (free decay).
  bool forcing = true;
  double solver_tol = 1e-12;
  FdPreconditioner preconditioner = FdPreconditioner::SparseLU;
  /// Replaces the case: the run uses this field's grid, starts from p = 0
  /// with no forcing, and errors against the exact solution are NaN.
  std::shared_ptr<const VectorField> initial_velocity;

  /// Throws ConfigError naming the offending field.
  void validate() const;
  /// round(T / dt); T must be a whole number of steps.
  std::int64_t steps() const;
  Grid grid() const;
  SchemeConfig scheme_config() const;
  SrConfig sr_config() const;
};

/// The exact case data at t = 0, or the initial field with p = 0.
FlowState initial_state(const RunSpec& spec);

struct RunResult {
  FlowState final_state;
  double err_u_linf = 0;
  double err_p_l2 = 0;
  double div_linf = 0;
  /// |q^N - 1|.
  double q_drift = 0;
  double seconds = 0;
};

/// Called after every completed step (not for the second-order startup).
using StepObserver = std::function<void(const FlowState&, const StepDiagnostics&)>;

/// Integrates spec from t = 0 to T. `ops` lets runs on the same grid share
/// factorisations (ignored by the projection scheme).
RunResult run(const RunSpec& spec, const StepObserver& observer = {},
              std::shared_ptr<OperatorCache> ops = nullptr);

struct ConvergenceRow {
  double param = 0;
  double err_u_linf = 0;
  double err_p_l2 = 0;
  double div_linf = 0;
  double q_drift = 0;
  /// log(e_prev/e)/log(param_prev/param); NaN on the first row.
  double order_u = 0;
  double order_p = 0;
  double seconds = 0;
  /// Empty unless the row failed; its numbers are then NaN.
  std::string error;
};

struct ConvergenceReport {
  std::string scheme;
  std::string backend;
  /// "dt" or "eps".
  std::string parameter = "dt";
  std::vector<ConvergenceRow> rows;

  /// Least-squares slope of log(error) against log(param) over all rows with
  /// finite positive errors; NaN with fewer than two such rows.
  double fitted_order_u() const;
  double fitted_order_p() const;
  double fitted_order_div() const;

  /// Header `param,err_u_linf,err_p_l2,div_linf,q_drift,order_u,order_p,seconds`
  /// and one `%.6e` row per refinement. Row errors are not written.
  void write_csv(std::ostream& out) const;
  static ConvergenceReport read_csv(std::istream& in);
};

/// Fills order_u / order_p from consecutive rows.
void fill_orders(std::vector<ConvergenceRow>& rows);

/// One run per dt (spec.dt ignored). Rows run on `jobs` threads.
ConvergenceReport run_convergence(const RunSpec& spec, const std::vector<double>& dts,
                                  int jobs = 1,
                                  std::shared_ptr<OperatorCache> ops = nullptr);

/// One run per eps at spec.dt, for each scheme in `schemes`.
std::vector<ConvergenceReport> run_eps_sweep(const RunSpec& spec,
                                             const std::vector<SchemeKind>& schemes,
                                             const std::vector<double>& eps_list,
                                             int jobs = 1);

struct EnergySample {
  double t = 0;
  /// |u|^2 / 2.
  double original = 0;
  /// |u|^2/2 + q^2/2 - 1/2.
  double modified = 0;
};

/// Free-decay run (forcing dropped) recording both energies at every time
/// level, t = 0 included.
std::vector<EnergySample> energy_series(const RunSpec& spec);
/// max_n |modified - original|.
double max_energy_gap(const std::vector<EnergySample>& series);

/// Parses "1/32", "0.25" or "1e-3"; fractions are evaluated as one division.
double parse_number(std::string_view text);
std::vector<double> parse_number_list(std::string_view text);

}  // namespace savns
