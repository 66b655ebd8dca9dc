"""Backward-error laboratory: adaptive integration with dense output, defect
measurement, symplectic energy analysis and low-precision orbit graphs."""

from ._core import (
    DenseSolution,
    IntegrationResult,
    System,
    corrected_rhs,
    count_in_unit_interval,
    detect_spurious_chaos,
    energy_drift,
    enumerate_unit_interval,
    export_edges,
    hamiltonian,
    integrate,
    integrate_euler,
    k_terms,
    leapfrog_orbit,
    lyapunov,
    make_system,
    map_eval,
    max_residual,
    measure_ks,
    modified_hamiltonian,
    orbit_summary,
    round_to_format,
    scaling_slope,
    secular_envelope,
    separation_scaling,
    separation_time,
    shadow,
    trajectory_statistics,
    unit_roundoff,
)

__version__ = "1.0.0"

__all__ = [
    "DenseSolution",
    "IntegrationResult",
    "System",
    "corrected_rhs",
    "count_in_unit_interval",
    "detect_spurious_chaos",
    "energy_drift",
    "enumerate_unit_interval",
    "export_edges",
    "hamiltonian",
    "integrate",
    "integrate_euler",
    "k_terms",
    "leapfrog_orbit",
    "lyapunov",
    "make_system",
    "map_eval",
    "max_residual",
    "measure_ks",
    "modified_hamiltonian",
    "orbit_summary",
    "round_to_format",
    "scaling_slope",
    "secular_envelope",
    "separation_scaling",
    "separation_time",
    "shadow",
    "trajectory_statistics",
    "unit_roundoff",
]
