"""Stern-Gerlach interferometer spin-contrast simulator.

Thin package wrapper around the compiled core; everything public lives in
``sgcontrast._core``.
"""

from ._core import (  # noqa: F401
    Branch,
    BranchSolution,
    CompareReport,
    ConfigError,
    ContrastResult,
    DriveSpec,
    Estimate,
    FockState,
    McConfig,
    McSummary,
    NoiseMode,
    NoiseSeries,
    OverlapResult,
    PhysicalParams,
    PropagatorConfig,
    PsdConvention,
    PsdModel,
    ThermalState,
    TimeGrid,
    TransferKind,
    TrapParams,
    autocorr,
    coherent_state,
    compare_analytic,
    contrast_spin_dependent,
    derive_trap,
    gamma_spin_independent,
    mc_summary_to_json,
    mismatch_variances,
    overlap,
    overlap_numeric,
    propagate,
    psd_eval,
    run_ensemble,
    solve_branch,
    solve_branch_stepwise,
    synthesize,
    thermal_beta,
    thermal_from_occupation,
    thermal_independence_check,
    thermal_occupation,
    tolerance_solve,
    transfer_eval,
)

__all__ = [name for name in dir() if not name.startswith("_")]
