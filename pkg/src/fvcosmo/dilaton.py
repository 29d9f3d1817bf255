"""Dilaton coupling-length map and the FRW starting-size comparison.

The dilaton value sets every coupling at once, alpha_gauge = e^phi, and
ties the fundamental length to the Planck length via
l_p^2 / lambda_s^2 = e^phi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParams

# CODATA speed of light, cm/s.
C_CM_PER_S = 2.99792458e10

# Quoted FRW starting size for a Planck-time universe, cm (held fixed).
FRW_BENCHMARK_CM = 1e-2

WEAK_COUPLING_THRESHOLD = -1.0


@dataclass(frozen=True)
class DilatonParams:
    """Planck length (natural units by default) and dilaton value."""

    l_p: float = 1.0
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (self.l_p > 0):
            raise InvalidParams(f"l_p > 0 required, got {self.l_p!r}")


def coupling_from_phi(phi: float) -> float:
    """Gauge coupling strength e^phi."""
    return math.exp(phi)


def phi_from_coupling(alpha_gauge: float) -> float:
    """Dilaton value ln(alpha_gauge); inverse of :func:`coupling_from_phi`."""
    if not (alpha_gauge > 0):
        raise InvalidParams(f"alpha_gauge > 0 required, got {alpha_gauge!r}")
    return math.log(alpha_gauge)


def is_weak_coupling(phi: float) -> bool:
    """Whether the dilaton sits in the weak-coupling region (phi << -1)."""
    return phi < WEAK_COUPLING_THRESHOLD


def string_length(p: DilatonParams) -> float:
    """Fundamental length lambda_s = l_p e^{-phi/2}."""
    return p.l_p * math.exp(-0.5 * p.phi)


def frw_size_report(t_p_SI: float) -> dict:
    """Planck length c * t_p against the quoted FRW starting size.

    The FRW figure is a fixed benchmark, not a computed quantity; the
    ratio shows how much head room a sub-FRW starting radius has.
    """
    if not (t_p_SI > 0):
        raise InvalidParams(f"t_p_SI > 0 required, got {t_p_SI!r}")
    l_p_cm = C_CM_PER_S * t_p_SI
    return {
        "t_p_s": t_p_SI,
        "l_p_cm": l_p_cm,
        "frw_size_cm": FRW_BENCHMARK_CM,
        "ratio": FRW_BENCHMARK_CM / l_p_cm,
        "frw_size_source": "quoted benchmark, held fixed",
    }


def dilaton_report(p: DilatonParams) -> dict:
    """Coupling, fundamental length, and regime flag for the run manifest."""
    return {
        "phi": p.phi,
        "l_p": p.l_p,
        "coupling": coupling_from_phi(p.phi),
        "string_length": string_length(p),
        "weak_coupling": is_weak_coupling(p.phi),
    }
