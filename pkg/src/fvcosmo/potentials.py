"""Three-regime inflaton potential, analytic derivatives, and the regime schedule.

The field starts in a driven sine-Gordon landscape

    V_R1(phi) = rho_init + (M_p^2 / 2) (1 - cos phi) + (m^2 / 2) (phi - phi_star)^2

whose cosine wells are tilted by the quadratic driving term.  After the
Planck-time hand-off the potential is a suppressed quadratic

    V_R2(phi) = (m^2 phi^2 / 2) / (1 + A phi^3)

which relaxes into the plain quadratic of chaotic inflation

    V_R3(phi) = m^2 phi^2 / 2.

All quantities are in Planck units (M_p normalized to 1 by default).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .errors import InvalidParams, PoleError

# |1 + A phi^3| below this counts as sitting on the R2 pole.
POLE_TOL = 1e-12


class Regime(enum.Enum):
    """Which of the three potential branches is active."""

    R1 = 1
    R2 = 2
    R3 = 3


@dataclass(frozen=True)
class ModelParams:
    """Physical constants and potential parameters, Planck units.

    ``phi_star`` is derived from (M_p, m) when not given explicitly;
    ``r2_span`` is the configured duration of the suppressed-quadratic
    regime and defaults to ``10 * t_p``.
    """

    m: float
    M_p: float = 1.0
    A: float = 1.0
    phi_star: float | None = None
    phi0_tilde: float = 3.5
    G: float = 1.0
    rho_init: float = 0.0
    t_p: float = 1.0
    delta_t: float = 0.1
    r2_span: float | None = None

    def __post_init__(self) -> None:
        violations = []
        if not (self.M_p > 0):
            violations.append(f"M_p > 0 required, got {self.M_p!r}")
        if not (self.m > 0):
            violations.append(f"m > 0 required, got {self.m!r}")
        if self.M_p > 0 and self.m > 0 and not (self.m < self.M_p):
            violations.append(f"m < M_p required, got m={self.m!r}, M_p={self.M_p!r}")
        if not (self.G > 0):
            violations.append(f"G > 0 required, got {self.G!r}")
        if not (self.t_p > 0):
            violations.append(f"t_p > 0 required, got {self.t_p!r}")
        if not (self.delta_t > 0):
            violations.append(f"delta_t > 0 required, got {self.delta_t!r}")
        if not (self.rho_init >= 0):
            violations.append(f"rho_init >= 0 required, got {self.rho_init!r}")
        if not (self.A >= 0):
            violations.append(f"A >= 0 required, got {self.A!r}")
        if self.r2_span is not None and not (self.r2_span > 0):
            violations.append(f"r2_span > 0 required, got {self.r2_span!r}")
        if violations:
            raise InvalidParams(violations)
        if self.phi_star is None:
            object.__setattr__(self, "phi_star", phi_star(self))

    @property
    def r2_end(self) -> float:
        """Time at which the suppressed-quadratic regime hands off."""
        span = self.r2_span if self.r2_span is not None else 10.0 * self.t_p
        return self.t_p + span


def phi_star(params: ModelParams) -> float:
    """Field value where classical roll and quantum kicks are comparable.

    (3 / 16 pi)^(1/4) * M_p^(3/2) / m^(1/2); reduces to the normalized
    form when M_p = 1.
    """
    if not (params.m > 0):
        raise InvalidParams(f"m > 0 required, got {params.m!r}")
    return (3.0 / (16.0 * math.pi)) ** 0.25 * params.M_p**1.5 / math.sqrt(params.m)


def phi0_threshold(params: ModelParams) -> float:
    """Minimum starting field value for sufficient inflation: sqrt(60 / 2 pi) * M_p."""
    return math.sqrt(60.0 / (2.0 * math.pi)) * params.M_p


def validate_initial_field(params: ModelParams) -> None:
    """Reject starting field values at or below the inflation threshold."""
    thr = phi0_threshold(params)
    if not (params.phi0_tilde > thr):
        raise InvalidParams(
            f"phi0_tilde must exceed the inflation threshold {thr!r}, got {params.phi0_tilde!r}"
        )


def regime_for(t: float, params: ModelParams) -> Regime:
    """Active regime at time t; each boundary belongs to the earlier regime."""
    if not math.isfinite(t):
        raise InvalidParams(f"t must be finite, got {t!r}")
    if t <= params.t_p:
        return Regime.R1
    if t <= params.r2_end:
        return Regime.R2
    return Regime.R3


def eval_potential(regime: Regime, phi: float, params: ModelParams) -> float:
    """Potential energy density of the given regime branch at phi."""
    if regime is Regime.R1:
        d = phi - params.phi_star
        return (
            params.rho_init
            + 0.5 * params.M_p**2 * (1.0 - math.cos(phi))
            + 0.5 * params.m**2 * d * d
        )
    if regime is Regime.R2:
        denom = 1.0 + params.A * phi**3
        if abs(denom) < POLE_TOL:
            raise PoleError(phi)
        return 0.5 * params.m**2 * phi * phi / denom
    return 0.5 * params.m**2 * phi * phi


def eval_dpotential(regime: Regime, phi: float, params: ModelParams) -> float:
    """dV/dphi of the given regime branch, closed form."""
    if regime is Regime.R1:
        return 0.5 * params.M_p**2 * math.sin(phi) + params.m**2 * (phi - params.phi_star)
    if regime is Regime.R2:
        denom = 1.0 + params.A * phi**3
        if abs(denom) < POLE_TOL:
            raise PoleError(phi)
        # quotient rule collapses to m^2 phi (1 - A phi^3 / 2) / (1 + A phi^3)^2
        return params.m**2 * phi * (1.0 - 0.5 * params.A * phi**3) / (denom * denom)
    return params.m**2 * phi
