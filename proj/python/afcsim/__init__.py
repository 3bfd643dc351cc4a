"""Atomic frequency comb quantum memory simulator."""

from ._core import (
    CavityParams,
    CombParams,
    ConfigError,
    DomainError,
    NumericalError,
    SechPulseParams,
    ToothShape,
    comb_profile,
    control_transfer_efficiency,
    eta_cavity,
    eta_cavity_finite_depth,
    eta_cavity_loss,
    eta_deph_gaussian,
    eta_deph_square,
    eta_single_pass,
    eta_spin_dephasing,
    impedance_match_depth,
    impedance_match_reflectivity,
    optimal_finesse,
    optimize_cavity_design,
    presets,
    run_config,
    run_two_level,
    total_budget,
    transfer_probability,
)

__all__ = [name for name in dir() if not name.startswith("_")]
