"""Penalty and sequential-regularisation SAV solvers for 2-D Navier-Stokes."""

from ._savns import (
    CaseId,
    ConfigError,
    ConvergenceReport,
    DegenerateQError,
    RunSpec,
    SchemeKind,
    SolverError,
    energy_series,
    max_energy_gap,
    parse_number,
    run,
    run_convergence,
    run_eps_sweep,
)

__all__ = [
    "CaseId",
    "ConfigError",
    "ConvergenceReport",
    "DegenerateQError",
    "RunSpec",
    "SchemeKind",
    "SolverError",
    "energy_series",
    "max_energy_gap",
    "parse_number",
    "run",
    "run_convergence",
    "run_eps_sweep",
]
