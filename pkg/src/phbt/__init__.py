"""Pulsed-optomechanics toolkit: heralded phonon generation, HBT correlation
prediction, synthetic click records and likelihood-based g2 inference."""

from phbt.hilbert import (
    DensityMatrix,
    GaussianParams,
    ModeOps,
    TruncationLeakError,
    VacuumStateError,
    apply_displacement,
    apply_squeeze,
    coherent_state,
    expect,
    fock_state,
    g2_zero,
    make_state,
    mean_occupation,
    mode_ops,
    thermal_state,
    vacuum_state,
)

__all__ = [
    "DensityMatrix",
    "GaussianParams",
    "ModeOps",
    "TruncationLeakError",
    "VacuumStateError",
    "apply_displacement",
    "apply_squeeze",
    "coherent_state",
    "expect",
    "fock_state",
    "g2_zero",
    "make_state",
    "mean_occupation",
    "mode_ops",
    "thermal_state",
    "vacuum_state",
]

__version__ = "0.1.0"
