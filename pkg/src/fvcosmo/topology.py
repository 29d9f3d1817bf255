"""Kink-antikink configurations on a 1-D lattice.

Realizes the soliton pair that bounds the nucleated bubble: saturated
first-order profiles for the cosine part of the well landscape, the
boundary-winding topological charge Q = (phi_right - phi_left) / 2 pi,
and the lattice energy checked against the saturation bound.

Only the periodic cosine term enters here; the quadratic tilt that
splits the vacua is bookkept separately in :mod:`fvcosmo.vacuum`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParams
from .potentials import ModelParams

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class LatticeField:
    """Uniform 1-D grid of field values."""

    x0: float
    dx: float
    values: np.ndarray

    def __post_init__(self) -> None:
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != 1 or vals.size < 2:
            raise InvalidParams(f"lattice needs >= 2 samples, got shape {vals.shape}")
        if not (self.dx > 0):
            raise InvalidParams(f"dx > 0 required, got {self.dx!r}")
        if not np.all(np.isfinite(vals)):
            raise InvalidParams("lattice values must all be finite")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.size)

    def to_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("x,phi\n")
            for xi, vi in zip(self.x, self.values):
                fh.write(f"{float(xi)!r},{float(vi)!r}\n")


def _cosine_potential(phi: float, scale: float) -> float:
    """Periodic part of the landscape, (scale^2 / 2)(1 - cos phi)."""
    return 0.5 * scale * scale * (1.0 - math.cos(phi))


def _saturation_rhs(phi: float, scale: float, orientation: int) -> float:
    """Signed first-order saturation equation dphi/dx = +-sqrt(2 V(phi))."""
    v = _cosine_potential(phi, scale)
    return orientation * math.sqrt(max(2.0 * v, 0.0))


def kink_profile(
    grid: tuple[float, float, int],
    center: float,
    scale: float,
    orientation: int = 1,
) -> LatticeField:
    """Saturated kink (or antikink) profile on the given grid.

    Integrates the first-order saturation equation outward from
    phi(center) = pi with a fixed-step 4th-order scheme; orientation +1
    rises 0 -> 2 pi, -1 falls 2 pi -> 0.
    """
    x0, dx, n = grid
    if n < 2 or not (dx > 0):
        raise InvalidParams(f"grid needs N >= 2 and dx > 0, got N={n!r}, dx={dx!r}")
    if not (scale > 0):
        raise InvalidParams(f"scale > 0 required, got {scale!r}")
    if orientation not in (1, -1):
        raise InvalidParams(f"orientation must be +1 or -1, got {orientation!r}")

    phi_center = math.pi  # midpoint of the branch for either orientation
    xs = x0 + dx * np.arange(n)
    values = np.empty(n)

    # Substep short enough that the profile width (~sqrt(2)/scale) is well resolved.
    h_target = 0.01 / scale

    def advance(phi: float, x_from: float, x_to: float) -> float:
        span = x_to - x_from
        if span == 0.0:
            return phi
        nsub = max(1, math.ceil(abs(span) / h_target))
        h = span / nsub
        for _ in range(nsub):
            k1 = _saturation_rhs(phi, scale, orientation)
            k2 = _saturation_rhs(phi + 0.5 * h * k1, scale, orientation)
            k3 = _saturation_rhs(phi + 0.5 * h * k2, scale, orientation)
            k4 = _saturation_rhs(phi + h * k3, scale, orientation)
            phi = phi + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        # The branch is confined to [0, 2 pi]; clip roundoff excursions.
        return min(max(phi, 0.0), TWO_PI)

    i_right = int(np.searchsorted(xs, center))  # first grid index at or right of center
    phi = phi_center
    x_prev = center
    for i in range(i_right, n):
        phi = advance(phi, x_prev, xs[i])
        values[i] = phi
        x_prev = xs[i]
    phi = phi_center
    x_prev = center
    for i in range(i_right - 1, -1, -1):
        phi = advance(phi, x_prev, xs[i])
        values[i] = phi
        x_prev = xs[i]
    return LatticeField(x0=x0, dx=dx, values=values)


def pair_config(
    grid: tuple[float, float, int], separation: float, scale: float
) -> LatticeField:
    """Kink-antikink superposition with both boundaries settled at 0.

    Superposes a kink at (domain center - separation/2) and an antikink
    at (domain center + separation/2), offset by -2 pi.
    """
    if not (separation > 0):
        raise InvalidParams(f"separation > 0 required, got {separation!r}")
    x0, dx, n = grid
    mid = x0 + 0.5 * dx * (n - 1)
    kink = kink_profile(grid, mid - 0.5 * separation, scale, orientation=1)
    anti = kink_profile(grid, mid + 0.5 * separation, scale, orientation=-1)
    return LatticeField(x0=x0, dx=dx, values=kink.values + anti.values - TWO_PI)


def topological_charge(field: LatticeField) -> float:
    """Boundary winding number (phi_right - phi_left) / 2 pi."""
    return (float(field.values[-1]) - float(field.values[0])) / TWO_PI


def field_energy(field: LatticeField, params: ModelParams) -> float:
    """Lattice energy: gradient term plus trapezoidal cosine-potential term."""
    vals = field.values
    dx = field.dx
    grad = np.diff(vals) / dx
    pot = 0.5 * params.M_p**2 * (1.0 - np.cos(vals))
    return float(np.sum(0.5 * grad * grad * dx) + np.sum(0.5 * (pot[:-1] + pot[1:]) * dx))
