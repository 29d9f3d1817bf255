"""Vacuum structure of the tilted sine-Gordon landscape.

Locates the true and false vacua, computes the energy gap and the two
bracket terms of the energy-splitting identity, solves the inverse
calibration problem (which mass reproduces a requested gap), and reports
the wall scale L = 1/gap (unit proportionality convention).

The gap is always evaluated on the bare landscape, without the constant
initial energy density: that offset shifts both vacua identically and
cancels from every gap by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy.optimize import brentq

from .errors import DegenerateVacuaError, InvalidParams, NoExtremumError
from .potentials import ModelParams, Regime, eval_dpotential, eval_potential

# Default search window brackets the two wells on either side of 2 pi.
DEFAULT_WINDOW = (-math.pi, 3.0 * math.pi)

ROOT_RESIDUAL_TOL = 1e-10
DEGENERACY_TOL = 1e-12
GAP_TOL = 1e-6

# Default mass scan for the inverse gap calibration.
CAL_M_MIN = 1e-3
CAL_N_GRID = 10_000


@dataclass(frozen=True)
class VacuumReport:
    """True/false vacuum locations, gap, bracket bookkeeping, wall scale."""

    phi_F: float
    phi_T: float
    V_F: float
    V_T: float
    gap: float
    bracket_A: float
    bracket_B: float
    bracket_residual: float
    wall_scale: float

    def to_dict(self) -> dict:
        return {
            "phi_F": self.phi_F,
            "phi_T": self.phi_T,
            "V_F": self.V_F,
            "V_T": self.V_T,
            "gap": self.gap,
            "bracket_A": self.bracket_A,
            "bracket_B": self.bracket_B,
            "bracket_residual": self.bracket_residual,
            "wall_scale": self.wall_scale,
            "wall_scale_convention": "L = 1/gap, unit proportionality constant",
        }


def _bare(params: ModelParams) -> ModelParams:
    """Same landscape with the constant density offset removed."""
    if params.rho_init == 0.0:
        return params
    return replace(params, rho_init=0.0)


def find_extrema(
    params: ModelParams,
    interval: tuple[float, float] = DEFAULT_WINDOW,
    scan_points: int = 2001,
) -> list[tuple[float, float, str]]:
    """All extrema of the well landscape in ``interval``.

    Returns (phi, V, kind) triples sorted by phi, kind in {"min", "max"}.
    Roots of dV/dphi are bracketed on a scan grid and refined until the
    slope residual is below 1e-10; classification uses the sign of the
    second difference of V.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not (hi > lo):
        raise InvalidParams(f"interval must be non-empty, got ({lo!r}, {hi!r})")

    def dv(phi: float) -> float:
        return eval_dpotential(Regime.R1, phi, params)

    xs = np.linspace(lo, hi, scan_points)
    fs = 0.5 * params.M_p**2 * np.sin(xs) + params.m**2 * (xs - params.phi_star)

    roots: list[float] = []
    for i in range(scan_points - 1):
        a, b = fs[i], fs[i + 1]
        if a == 0.0:
            roots.append(float(xs[i]))
        elif a * b < 0.0:
            roots.append(brentq(dv, xs[i], xs[i + 1], xtol=1e-14, rtol=8.9e-16))
    if fs[-1] == 0.0:
        roots.append(float(xs[-1]))
    if not roots:
        raise NoExtremumError(
            f"no sign change of dV/dphi in [{lo!r}, {hi!r}] ({scan_points} scan points)"
        )

    out = []
    h = 1e-5
    for r in roots:
        if abs(dv(r)) >= ROOT_RESIDUAL_TOL:
            raise NoExtremumError(f"root refinement stalled at phi={r!r}, |dV|={abs(dv(r))!r}")
        curv = (
            eval_potential(Regime.R1, r - h, params)
            - 2.0 * eval_potential(Regime.R1, r, params)
            + eval_potential(Regime.R1, r + h, params)
        )
        kind = "min" if curv > 0.0 else "max"
        out.append((r, eval_potential(Regime.R1, r, params), kind))
    out.sort(key=lambda e: e[0])
    return out


def bogomolnyi_brackets(
    params: ModelParams, phi_T: float, phi_F: float
) -> tuple[float, float, float]:
    """Bracket terms of the energy-splitting identity and their residual.

    bracket_A = M_p^2 + 2 m^2, bracket_B = 2 M_p^2 phi_T phi_F / 3!, and
    residual = (bracket_A - bracket_B) - 2 * gap.  The residual is
    reported, never forced to zero.
    """
    bare = _bare(params)
    bracket_a = params.M_p**2 + 2.0 * params.m**2
    bracket_b = 2.0 * params.M_p**2 * phi_T * phi_F / 6.0
    gap = eval_potential(Regime.R1, phi_F, bare) - eval_potential(Regime.R1, phi_T, bare)
    residual = (bracket_a - bracket_b) - 2.0 * gap
    return bracket_a, bracket_b, residual


def vacuum_report(
    params: ModelParams, window: tuple[float, float] = DEFAULT_WINDOW
) -> VacuumReport:
    """Locate both vacua in ``window`` and assemble the full report.

    The true vacuum is the global minimum; the false vacuum is the
    lowest-lying remaining minimum (the nearest competitor).
    """
    minima = [e for e in find_extrema(params, window) if e[2] == "min"]
    if len(minima) < 2:
        raise NoExtremumError(
            f"need at least two minima in {window!r}, found {len(minima)}"
        )
    by_depth = sorted(minima, key=lambda e: e[1])
    phi_t = by_depth[0][0]
    phi_f = by_depth[1][0]

    bare = _bare(params)
    gap = eval_potential(Regime.R1, phi_f, bare) - eval_potential(Regime.R1, phi_t, bare)
    if abs(gap) < DEGENERACY_TOL:
        raise DegenerateVacuaError(
            f"vacua at phi={phi_t!r} and phi={phi_f!r} are degenerate (|gap|={abs(gap)!r})"
        )
    bracket_a, bracket_b, residual = bogomolnyi_brackets(params, phi_t, phi_f)
    return VacuumReport(
        phi_F=phi_f,
        phi_T=phi_t,
        V_F=eval_potential(Regime.R1, phi_f, params),
        V_T=eval_potential(Regime.R1, phi_t, params),
        gap=gap,
        bracket_A=bracket_a,
        bracket_B=bracket_b,
        bracket_residual=residual,
        wall_scale=wall_scale(gap),
    )


def wall_scale(gap: float) -> float:
    """Wall scale L = 1/gap under the unit proportionality convention."""
    if not (gap > 0):
        raise InvalidParams(f"gap > 0 required, got {gap!r}")
    return 1.0 / gap


# -- inverse calibration -----------------------------------------------------

def _gap_of_masses(
    ms: np.ndarray,
    template: ModelParams,
    window: tuple[float, float],
    n_phi: int = 512,
    n_bisect: int = 64,
) -> np.ndarray:
    """Vacuum gap for each trial mass, NaN where fewer than two minima exist.

    Vectorized counterpart of vacuum_report's minimum search: wells are
    bracketed as up-crossings of dV/dphi on a phi grid and pinned down by
    bisection, all masses at once.  phi_star is re-derived at every mass.
    """
    ms = np.asarray(ms, dtype=float)
    mp2_half = 0.5 * template.M_p**2
    stars = (3.0 / (16.0 * math.pi)) ** 0.25 * template.M_p**1.5 / np.sqrt(ms)
    phis = np.linspace(window[0], window[1], n_phi)

    dv = mp2_half * np.sin(phis)[None, :] + (ms**2)[:, None] * (
        phis[None, :] - stars[:, None]
    )
    up = (dv[:, :-1] < 0.0) & (dv[:, 1:] >= 0.0)

    n_m = ms.size
    max_wells = int(up.sum(axis=1).max(initial=0))
    gaps = np.full(n_m, np.nan)
    if max_wells < 2:
        return gaps

    lo = np.full((n_m, max_wells), np.nan)
    hi = np.full((n_m, max_wells), np.nan)
    for i in range(n_m):
        idx = np.nonzero(up[i])[0]
        lo[i, : idx.size] = phis[idx]
        hi[i, : idx.size] = phis[idx + 1]

    valid = ~np.isnan(lo)
    m2 = (ms**2)[:, None]
    star = stars[:, None]
    for _ in range(n_bisect):
        mid = 0.5 * (lo + hi)
        fmid = mp2_half * np.sin(mid) + m2 * (mid - star)
        neg = fmid < 0.0
        lo = np.where(valid & neg, mid, lo)
        hi = np.where(valid & ~neg, mid, hi)
    roots = 0.5 * (lo + hi)

    v = mp2_half * 2.0 * np.sin(roots / 2.0) ** 2 + 0.5 * m2 * (roots - star) ** 2
    v = np.where(valid, v, np.inf)
    v.sort(axis=1)
    two = (v[:, 1] if max_wells > 1 else np.full(n_m, np.inf))
    ok = np.isfinite(v[:, 0]) & np.isfinite(two)
    gaps[ok] = two[ok] - v[ok, 0]
    return gaps


def _gap_of_mass(m: float, template: ModelParams, window: tuple[float, float]) -> float:
    return float(_gap_of_masses(np.array([m]), template, window)[0])


def calibrate_mass(
    params_template: ModelParams,
    target_gap: float,
    m_min: float = CAL_M_MIN,
    m_max: float | None = None,
    n_grid: int = CAL_N_GRID,
    window: tuple[float, float] = DEFAULT_WINDOW,
) -> list[float]:
    """Every mass in the scan range whose vacuum gap matches ``target_gap``.

    Scans a uniform mass grid, brackets sign changes of gap(m) - target,
    and bisection-refines each bracket to |gap - target| < 1e-6.  Returns
    an empty list when the target is unreachable anywhere in the range.
    """
    if not (target_gap > 0):
        raise InvalidParams(f"target_gap > 0 required, got {target_gap!r}")
    if m_max is None:
        m_max = 0.999 * params_template.M_p
    if not (0.0 < m_min < m_max < params_template.M_p):
        raise InvalidParams(
            f"mass scan range must satisfy 0 < m_min < m_max < M_p, got ({m_min!r}, {m_max!r})"
        )

    grid = np.linspace(m_min, m_max, n_grid)
    gaps = _gap_of_masses(grid, params_template, window)
    resid = gaps - target_gap

    hits: list[float] = []
    for i in range(n_grid):
        if np.isfinite(resid[i]) and abs(resid[i]) < GAP_TOL:
            hits.append(float(grid[i]))
    for i in range(n_grid - 1):
        a, b = resid[i], resid[i + 1]
        if not (np.isfinite(a) and np.isfinite(b)):
            continue
        if a * b < 0.0:
            lo, hi = float(grid[i]), float(grid[i + 1])
            flo = a
            for _ in range(200):
                mid = 0.5 * (lo + hi)
                fmid = _gap_of_mass(mid, params_template, window) - target_gap
                if abs(fmid) < GAP_TOL:
                    hits.append(mid)
                    break
                if (fmid < 0.0) == (flo < 0.0):
                    lo, flo = mid, fmid
                else:
                    hi = mid
            else:
                continue

    hits.sort()
    spacing = (m_max - m_min) / (n_grid - 1)
    deduped: list[float] = []
    for m in hits:
        if not deduped or m - deduped[-1] > spacing:
            deduped.append(m)
    return deduped
