"""Exception types shared across the simulator.

The CLI maps these onto exit codes: configuration/validation problems
exit 1, numeric failures exit 2, I/O problems exit 3.
"""

from __future__ import annotations


class FvcosmoError(Exception):
    """Base class for all simulator errors."""


class InvalidParams(FvcosmoError):
    """Parameter record violates one or more invariants.

    ``violations`` lists every violated invariant, not just the first.
    """

    def __init__(self, violations: list[str] | str):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = violations
        super().__init__("; ".join(violations))


class ConfigError(FvcosmoError):
    """Scenario file failed to parse or referenced unknown keys."""


class NumericError(FvcosmoError):
    """Base class for failures raised while evaluating or integrating."""


class PoleError(NumericError):
    """Suppressed-quadratic potential evaluated at (or across) its pole."""

    def __init__(self, phi: float, t: float | None = None):
        self.phi = phi
        self.t = t
        where = f"phi={phi!r}" + (f" at t={t!r}" if t is not None else "")
        super().__init__(f"potential pole: 1 + A*phi^3 vanishes near {where}")


class NoExtremumError(NumericError):
    """Extremum scan found no sign change of dV/dphi in the interval."""


class DegenerateVacuaError(NumericError):
    """The two lowest minima are energetically indistinguishable."""


class StepFailureError(NumericError):
    """Adaptive step control could not meet its tolerance."""


class NegativePotentialError(NumericError):
    """Potential went negative under the expansion-rate closure."""

    def __init__(self, phi: float, t: float, value: float):
        self.phi = phi
        self.t = t
        self.value = value
        super().__init__(
            f"V={value!r} < 0 at phi={phi!r}, t={t!r}: expansion-rate closure undefined"
        )


class SingularMapError(NumericError):
    """Conformal-cosmic map degenerate (|a*H| below tolerance)."""
