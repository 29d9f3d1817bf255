"""Nucleation rate per Hubble-volume per Hubble-time along a trajectory.

epsilon(t) = lambda0 / H(t)^4, with lambda0 anchored so the rate is
exactly one at the first sampled instant at or past the Planck time.
Also evaluates the flat-space number density of nucleated pairs per
unit length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import TimeSeries
from .errors import InvalidParams


@dataclass(frozen=True)
class NucleationParams:
    """Rate constant and number-density inputs.

    ``lambda0`` is calibrated from the trajectory when None.  ``e_coeff``
    is the undetermined coefficient of the density formula; it defaults
    to Euler's number and every run manifest records the choice.
    """

    lambda0: float | None = None
    E0: float = 0.0
    S_E: float = 0.0
    M: float = 1.0
    e_coeff: float = math.e

    def __post_init__(self) -> None:
        violations = []
        if self.lambda0 is not None and not (self.lambda0 >= 0):
            violations.append(f"lambda0 >= 0 required, got {self.lambda0!r}")
        if not (self.S_E >= 0):
            violations.append(f"S_E >= 0 required, got {self.S_E!r}")
        if not (self.M > 0):
            violations.append(f"M > 0 required, got {self.M!r}")
        if violations:
            raise InvalidParams(violations)

    def validate_against(self, M_p: float) -> None:
        if self.M > M_p:
            raise InvalidParams(f"M <= M_p required, got M={self.M!r}, M_p={M_p!r}")


def epsilon(lambda0: float, H: float) -> float:
    """Dimensionless nucleation rate lambda0 / H^4."""
    if not (H > 0):
        raise InvalidParams(f"H > 0 required, got {H!r}")
    return lambda0 / H**4


def calibrate_lambda0(H_at_tp: float) -> float:
    """Rate constant that makes epsilon exactly 1 at the anchor instant."""
    if not (H_at_tp > 0):
        raise InvalidParams(f"H_at_tp > 0 required, got {H_at_tp!r}")
    return H_at_tp**4


def garriga_density(p: NucleationParams, H: float) -> float:
    """Number density of nucleated pairs per unit length in a de Sitter background.

    (1 / 2 pi) sqrt(M^2 + e_coeff E0^2 / H^2) exp(-S_E).
    """
    if not (H > 0):
        raise InvalidParams(f"H > 0 required, got {H!r}")
    radicand = p.M**2 + p.e_coeff * p.E0**2 / H**2
    if radicand < 0:
        raise InvalidParams(f"negative radicand {radicand!r} in density formula")
    return math.sqrt(radicand) / (2.0 * math.pi) * math.exp(-p.S_E)


def resolve_lambda0(ts: TimeSeries, p: NucleationParams, t_p: float) -> float:
    """lambda0 as configured, else calibrated at the first sample with t >= t_p."""
    if p.lambda0 is not None:
        return p.lambda0
    idx = np.nonzero(ts.t >= t_p)[0]
    if idx.size == 0:
        raise InvalidParams(
            f"no sample with t >= t_p={t_p!r}; cannot calibrate lambda0"
        )
    return calibrate_lambda0(float(ts.H[idx[0]]))


def rate_series(ts: TimeSeries, p: NucleationParams, t_p: float = 1.0) -> np.ndarray:
    """epsilon(t) column for a trajectory, auto-calibrating lambda0 if unset."""
    if np.any(ts.H <= 0):
        raise InvalidParams("rate requires H > 0 at every sample")
    lam = resolve_lambda0(ts, p, t_p)
    return lam / ts.H**4
