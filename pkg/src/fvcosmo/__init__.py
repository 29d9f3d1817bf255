"""Deterministic simulator of a false-vacuum start for chaotic inflation.

Analyzes the three-regime inflaton landscape, calibrates the vacuum
energy gap, integrates the coupled field/expansion dynamics across
regime hand-offs, tracks the nucleation rate per Hubble-volume per
Hubble-time, and realizes the kink-antikink premise on a 1-D lattice.
"""

__version__ = "0.1.0"

from .dilaton import DilatonParams, coupling_from_phi, frw_size_report, string_length
from .dynamics import (
    CosmoParams,
    FieldState,
    StepControl,
    TimeSeries,
    a0_tilde,
    hubble_closed_form,
    integrate_conformal,
    integrate_cosmic,
    match_alpha,
    slow_roll_phi,
)
from .errors import FvcosmoError
from .nucleation import NucleationParams, calibrate_lambda0, epsilon, garriga_density, rate_series
from .potentials import (
    ModelParams,
    Regime,
    eval_dpotential,
    eval_potential,
    phi0_threshold,
    phi_star,
    regime_for,
)
from .topology import LatticeField, field_energy, kink_profile, pair_config, topological_charge
from .vacuum import VacuumReport, calibrate_mass, find_extrema, vacuum_report, wall_scale

__all__ = [
    "__version__",
    "CosmoParams",
    "DilatonParams",
    "FieldState",
    "FvcosmoError",
    "LatticeField",
    "ModelParams",
    "NucleationParams",
    "Regime",
    "StepControl",
    "TimeSeries",
    "VacuumReport",
    "a0_tilde",
    "calibrate_lambda0",
    "calibrate_mass",
    "coupling_from_phi",
    "epsilon",
    "eval_dpotential",
    "eval_potential",
    "field_energy",
    "find_extrema",
    "frw_size_report",
    "garriga_density",
    "hubble_closed_form",
    "integrate_conformal",
    "integrate_cosmic",
    "kink_profile",
    "match_alpha",
    "pair_config",
    "phi0_threshold",
    "phi_star",
    "rate_series",
    "regime_for",
    "slow_roll_phi",
    "string_length",
    "topological_charge",
    "vacuum_report",
    "wall_scale",
]
