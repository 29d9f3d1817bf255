"""Coupled scalar-field / expansion-rate dynamics across the regime schedule.

Integrates

    phi'' + 3 H phi' + dV/dphi = 0,        H^2 = (8 pi / 3) G V(phi)

in cosmic time (and the conformal-time twin with friction 2 a H and force
a^2 dV/dphi), switching potential branches on the regime schedule.  The
expansion rate is closed algebraically through the potential, so H is a
derived column, never an integrated state.  ln(a) is the integrated
expansion state, which keeps e-fold bookkeeping exact.

Also provides the constant-slope roll solution, the scale-factor
anchoring map, the order-of-magnitude matching constant, and the
closed-form expansion-rate estimate in conformal time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .errors import (
    InvalidParams,
    NegativePotentialError,
    PoleError,
    SingularMapError,
    StepFailureError,
)
from .potentials import ModelParams, Regime, eval_dpotential, eval_potential, regime_for

CSV_HEADER = "t,phi,phi_dot,a,H,V,epsilon,efolds,regime"


@dataclass(frozen=True)
class CosmoParams:
    """Scale-factor anchors at the end of inflation plus derived matching data.

    ``a0_tilde`` (the anchored starting scale factor) and ``alpha`` (the
    matching constant) are derived when absent; see :func:`resolve_cosmo`.
    """

    a_B: float = 1.0
    H_B: float = 1.0
    t_B: float = 1.0
    alpha: float | None = None
    a0_tilde: float | None = None

    def __post_init__(self) -> None:
        violations = []
        if not (self.a_B > 0):
            violations.append(f"a_B > 0 required, got {self.a_B!r}")
        # H_B = 0 is allowed (frozen expansion); negative rates are not.
        if not (self.H_B >= 0):
            violations.append(f"H_B >= 0 required, got {self.H_B!r}")
        if self.alpha is not None and not (self.alpha > 0):
            violations.append(f"alpha > 0 required, got {self.alpha!r}")
        if self.a0_tilde is not None and not (self.a0_tilde > 0):
            violations.append(f"a0_tilde > 0 required, got {self.a0_tilde!r}")
        if violations:
            raise InvalidParams(violations)


@dataclass(frozen=True)
class FieldState:
    """One instant of the coupled system."""

    t: float
    phi: float
    phi_dot: float
    a: float
    H: float
    regime: Regime

    def __post_init__(self) -> None:
        if not (self.a > 0):
            raise InvalidParams(f"a > 0 required, got {self.a!r}")
        for name in ("t", "phi", "phi_dot", "a", "H"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidParams(f"{name} must be finite, got {getattr(self, name)!r}")


@dataclass(frozen=True)
class RegimeTransition:
    """Logged hand-off between potential branches; H may jump."""

    t: float
    from_regime: Regime
    to_regime: Regime
    H_before: float
    H_after: float

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "from": self.from_regime.name,
            "to": self.to_regime.name,
            "H_before": self.H_before,
            "H_after": self.H_after,
            "H_jump": self.H_after - self.H_before,
        }


@dataclass(frozen=True)
class StepControl:
    """Fixed-step 4th-order integration, optionally with step-doubling control."""

    mode: str = "fixed"
    dt: float = 1e-3
    atol: float = 1e-9
    rtol: float = 1e-9
    sample_stride: int = 1
    max_steps: int = 20_000_000

    def __post_init__(self) -> None:
        if self.mode not in ("fixed", "adaptive"):
            raise InvalidParams(f"mode must be 'fixed' or 'adaptive', got {self.mode!r}")
        if not (self.dt > 0):
            raise InvalidParams(f"dt > 0 required, got {self.dt!r}")
        if self.sample_stride < 1:
            raise InvalidParams(f"sample_stride >= 1 required, got {self.sample_stride!r}")


class TimeSeries:
    """Sampled trajectory: column arrays plus the transition log."""

    def __init__(
        self,
        t: np.ndarray,
        phi: np.ndarray,
        phi_dot: np.ndarray,
        a: np.ndarray,
        H: np.ndarray,
        V: np.ndarray,
        regime: np.ndarray,
        efolds: np.ndarray,
        epsilon: np.ndarray | None = None,
        transitions: tuple[RegimeTransition, ...] = (),
        aux: dict[str, np.ndarray] | None = None,
    ):
        self.t = np.asarray(t, dtype=float)
        self.phi = np.asarray(phi, dtype=float)
        self.phi_dot = np.asarray(phi_dot, dtype=float)
        self.a = np.asarray(a, dtype=float)
        self.H = np.asarray(H, dtype=float)
        self.V = np.asarray(V, dtype=float)
        self.regime = np.asarray(regime, dtype=int)
        self.efolds = np.asarray(efolds, dtype=float)
        self.epsilon = None if epsilon is None else np.asarray(epsilon, dtype=float)
        self.transitions = tuple(transitions)
        self.aux = {} if aux is None else dict(aux)
        n = self.t.size
        cols = [self.phi, self.phi_dot, self.a, self.H, self.V, self.regime, self.efolds]
        if any(c.size != n for c in cols):
            raise InvalidParams("time series columns must share one length")
        if self.epsilon is not None and self.epsilon.size != n:
            raise InvalidParams("epsilon column length mismatch")
        if n >= 2 and not np.all(np.diff(self.t) > 0):
            raise InvalidParams("time series t must be strictly increasing")

    def __len__(self) -> int:
        return int(self.t.size)

    def state(self, i: int) -> FieldState:
        return FieldState(
            t=float(self.t[i]),
            phi=float(self.phi[i]),
            phi_dot=float(self.phi_dot[i]),
            a=float(self.a[i]),
            H=float(self.H[i]),
            regime=Regime(int(self.regime[i])),
        )

    def with_epsilon(self, epsilon: np.ndarray) -> "TimeSeries":
        return TimeSeries(
            self.t, self.phi, self.phi_dot, self.a, self.H, self.V,
            self.regime, self.efolds, epsilon=epsilon,
            transitions=self.transitions, aux=self.aux,
        )

    def to_csv(self, path) -> None:
        eps = self.epsilon
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(CSV_HEADER + "\n")
            for i in range(self.t.size):
                e = "nan" if eps is None else repr(float(eps[i]))
                fh.write(
                    f"{float(self.t[i])!r},{float(self.phi[i])!r},"
                    f"{float(self.phi_dot[i])!r},{float(self.a[i])!r},"
                    f"{float(self.H[i])!r},{float(self.V[i])!r},{e},"
                    f"{float(self.efolds[i])!r},R{int(self.regime[i])}\n"
                )


# -- closed forms -------------------------------------------------------------

def slow_roll_velocity(params: ModelParams) -> float:
    """Constant roll slope -m / sqrt(12 pi G)."""
    return -params.m / math.sqrt(12.0 * math.pi * params.G)


def slow_roll_phi(t: float, params: ModelParams) -> float:
    """Constant-slope roll trajectory phi0_tilde - m t / sqrt(12 pi G)."""
    return params.phi0_tilde + slow_roll_velocity(params) * t


def a0_tilde(cosmo: CosmoParams, t_p: float) -> float:
    """Scale factor anchored back from the end of inflation to t_p."""
    return cosmo.a_B * math.exp(cosmo.H_B * (t_p - cosmo.t_B))


def match_alpha(params: ModelParams, a0: float) -> float:
    """Matching constant alpha solving m / sqrt(12 pi G) = a0 / alpha."""
    if not (params.m > 0):
        raise InvalidParams(f"m > 0 required, got {params.m!r}")
    return a0 * math.sqrt(12.0 * math.pi * params.G) / params.m


def matching_residual(params: ModelParams, cosmo: CosmoParams) -> float:
    """Defect of the order-of-magnitude matching as adopted: m/sqrt(12 pi G) - a0/alpha."""
    if cosmo.a0_tilde is None or cosmo.alpha is None:
        raise InvalidParams("cosmo must be resolved (a0_tilde and alpha set)")
    return -slow_roll_velocity(params) - cosmo.a0_tilde / cosmo.alpha


def matching_residual_first_order(params: ModelParams, cosmo: CosmoParams) -> float:
    """Defect of the strict first-order matching, which carries the initial
    field amplitude: m/sqrt(12 pi G) - phi0_tilde * a0/alpha.

    Nonzero whenever phi0_tilde != 1; surfaced as a diagnostic, never used
    to rescale alpha.
    """
    if cosmo.a0_tilde is None or cosmo.alpha is None:
        raise InvalidParams("cosmo must be resolved (a0_tilde and alpha set)")
    return -slow_roll_velocity(params) - params.phi0_tilde * cosmo.a0_tilde / cosmo.alpha


def resolve_cosmo(cosmo: CosmoParams, params: ModelParams) -> CosmoParams:
    """Fill derived fields: a0_tilde from the anchoring map, alpha from matching."""
    a0 = cosmo.a0_tilde if cosmo.a0_tilde is not None else a0_tilde(cosmo, params.t_p)
    alpha = cosmo.alpha if cosmo.alpha is not None else match_alpha(params, a0)
    return replace(cosmo, a0_tilde=a0, alpha=alpha)


def hubble_closed_form(params: ModelParams, cosmo: CosmoParams, t_conf: float) -> float:
    """Closed-form expansion-rate estimate in conformal time, verbatim form.

    H = (1/3)(a0/alpha)^-1 + (a0/alpha)(m^2/3)(1 - (phi_star/phi0) e^{(a0/alpha) t_conf}).
    The two terms scale oppositely in a0/alpha; the expression is evaluated
    as written and the oddity is surfaced in run manifests.
    """
    if cosmo.a0_tilde is None or cosmo.alpha is None:
        raise InvalidParams("cosmo must be resolved (a0_tilde and alpha set)")
    if cosmo.a0_tilde == 0 or cosmo.alpha == 0:
        raise InvalidParams("a0_tilde and alpha must be nonzero")
    if params.phi0_tilde == 0:
        raise InvalidParams("phi0_tilde must be nonzero")
    r = cosmo.a0_tilde / cosmo.alpha
    ratio = params.phi_star / params.phi0_tilde
    return (1.0 / 3.0) / r + r * (params.m**2 / 3.0) * (1.0 - ratio * math.exp(r * t_conf))


# -- integrators --------------------------------------------------------------

_FRIEDMANN_COEFF = 8.0 * math.pi / 3.0


def _segment_bounds(t0: float, t_end: float, params: ModelParams) -> list[float]:
    """Segment edges: start, any regime boundaries inside, end."""
    edges = [t0]
    for b in (params.t_p, params.r2_end):
        if t0 < b < t_end:
            edges.append(b)
    edges.append(t_end)
    return edges


def _linear_force(params: ModelParams) -> Callable[[float], float]:
    m2 = params.m**2
    star = params.phi_star

    def force(phi: float) -> float:
        return m2 * (phi - star)

    return force


class _RegimeRhs:
    """Potential, force, and expansion rate for one regime segment."""

    def __init__(
        self,
        params: ModelParams,
        regime: Regime,
        kinetic_closure: bool,
        linear_force: bool,
        hubble: float | None,
        potential: tuple[Callable[[float], float], Callable[[float], float]] | None,
    ):
        self.params = params
        self.regime = regime
        self.kinetic = kinetic_closure
        self.hubble = hubble
        self.coeff = _FRIEDMANN_COEFF * params.G
        if potential is not None:
            self.v_of, self.dv_of = potential
        else:
            self.v_of = lambda phi: eval_potential(regime, phi, params)
            self.dv_of = lambda phi: eval_dpotential(regime, phi, params)
        self.force = _linear_force(params) if linear_force else self.dv_of
        # Sign of the suppressed-quadratic denominator at segment entry;
        # a sign flip means the trajectory swept across the pole.
        self._r2_sign: float | None = None

    def _check_r2_pole(self, phi: float, t: float, commit: bool) -> None:
        denom = 1.0 + self.params.A * phi**3
        if abs(denom) < 1e-12:
            raise PoleError(phi, t)
        s = 1.0 if denom > 0 else -1.0
        if self._r2_sign is None:
            if commit:
                self._r2_sign = s
        elif s != self._r2_sign:
            # Denominator changed sign since segment entry: the trajectory
            # stepped across the pole even if no evaluation landed on it.
            raise PoleError(phi, t)

    def guard_pole(self, phi: float, t: float) -> None:
        if self.regime is Regime.R2 and self.params.A != 0.0:
            self._check_r2_pole(phi, t, commit=True)

    def H_of(self, phi: float, phi_dot: float, t: float) -> float:
        if self.regime is Regime.R2 and self.params.A != 0.0:
            self._check_r2_pole(phi, t, commit=False)
        if self.hubble is not None:
            return self.hubble
        v = self.v_of(phi)
        if self.kinetic:
            v = v + 0.5 * phi_dot * phi_dot
        if v < 0.0:
            raise NegativePotentialError(phi, t, v)
        return math.sqrt(self.coeff * v)


def integrate_cosmic(
    params: ModelParams,
    cosmo: CosmoParams,
    initial: FieldState,
    t_end: float,
    control: StepControl | None = None,
    *,
    kinetic_closure: bool = False,
    linear_force: bool = False,
    hubble: float | None = None,
    potential: tuple[Callable[[float], float], Callable[[float], float]] | None = None,
) -> TimeSeries:
    """Advance (phi, phi_dot, ln a) in cosmic time through the regime schedule.

    ``hubble`` forces a constant expansion rate (0.0 gives the static-space
    hook); ``potential`` replaces the regime schedule with explicit
    (V, dV) callables (the constant-potential hook).  Samples every
    ``sample_stride`` accepted steps plus all regime boundaries and the
    endpoint.
    """
    control = control or StepControl()
    if not (t_end > initial.t):
        raise InvalidParams(f"t_end must exceed initial.t, got {t_end!r} <= {initial.t!r}")

    samples_t: list[float] = []
    samples_phi: list[float] = []
    samples_pd: list[float] = []
    samples_lna: list[float] = []
    samples_h: list[float] = []
    samples_v: list[float] = []
    samples_reg: list[int] = []
    transitions: list[RegimeTransition] = []

    lna0 = math.log(initial.a)
    phi, pd, lna = initial.phi, initial.phi_dot, lna0
    t = initial.t
    steps_total = 0

    def sample(rhs: _RegimeRhs, t_s: float, phi_s: float, pd_s: float, lna_s: float) -> None:
        h_s = rhs.H_of(phi_s, pd_s, t_s)
        samples_t.append(t_s)
        samples_phi.append(phi_s)
        samples_pd.append(pd_s)
        samples_lna.append(lna_s)
        samples_h.append(h_s)
        samples_v.append(rhs.v_of(phi_s))
        samples_reg.append(rhs.regime.value)

    edges = _segment_bounds(initial.t, t_end, params)
    prev_rhs: _RegimeRhs | None = None

    for seg_start, seg_end in zip(edges[:-1], edges[1:]):
        regime = regime_for(seg_end, params)  # boundaries belong to the earlier regime
        rhs = _RegimeRhs(params, regime, kinetic_closure, linear_force, hubble, potential)
        rhs.guard_pole(phi, seg_start)

        if prev_rhs is None:
            sample(rhs, t, phi, pd, lna)
        elif prev_rhs.regime is not rhs.regime:
            transitions.append(
                RegimeTransition(
                    t=t,
                    from_regime=prev_rhs.regime,
                    to_regime=rhs.regime,
                    H_before=prev_rhs.H_of(phi, pd, t),
                    H_after=rhs.H_of(phi, pd, t),
                )
            )
        prev_rhs = rhs

        coeff_force = rhs.force
        h_of = rhs.H_of

        def deriv(t_c: float, phi_c: float, pd_c: float):
            h_c = h_of(phi_c, pd_c, t_c)
            return pd_c, -3.0 * h_c * pd_c - coeff_force(phi_c), h_c

        def rk4_step(t_c: float, phi_c: float, pd_c: float, lna_c: float, h: float):
            k1p, k1v, k1l = deriv(t_c, phi_c, pd_c)
            hh = 0.5 * h
            k2p, k2v, k2l = deriv(t_c + hh, phi_c + hh * k1p, pd_c + hh * k1v)
            k3p, k3v, k3l = deriv(t_c + hh, phi_c + hh * k2p, pd_c + hh * k2v)
            k4p, k4v, k4l = deriv(t_c + h, phi_c + h * k3p, pd_c + h * k3v)
            s = h / 6.0
            return (
                phi_c + s * (k1p + 2.0 * (k2p + k3p) + k4p),
                pd_c + s * (k1v + 2.0 * (k2v + k3v) + k4v),
                lna_c + s * (k1l + 2.0 * (k2l + k3l) + k4l),
            )

        if control.mode == "fixed":
            dt = control.dt
            while t < seg_end:
                remaining = seg_end - t
                if remaining <= dt * (1.0 + 1e-12):
                    h, t_next = remaining, seg_end
                else:
                    h, t_next = dt, t + dt
                phi, pd, lna = rk4_step(t, phi, pd, lna, h)
                t = t_next
                rhs.guard_pole(phi, t)
                steps_total += 1
                if steps_total > control.max_steps:
                    raise StepFailureError(f"exceeded max_steps={control.max_steps}")
                if steps_total % control.sample_stride == 0 or t == seg_end:
                    sample(rhs, t, phi, pd, lna)
        else:
            h = min(control.dt, seg_end - t)
            while t < seg_end:
                h = min(h, seg_end - t)
                if h < 1e-13 * max(1.0, abs(t)):
                    raise StepFailureError(f"step underflow at t={t!r}")
                p1, v1, l1 = rk4_step(t, phi, pd, lna, h)
                pm, vm, lm = rk4_step(t, phi, pd, lna, 0.5 * h)
                p2, v2, l2 = rk4_step(t + 0.5 * h, pm, vm, lm, 0.5 * h)
                err = 0.0
                for one, two in ((p1, p2), (v1, v2), (l1, l2)):
                    scale = control.atol + control.rtol * max(abs(one), abs(two))
                    err = max(err, abs(one - two) / scale)
                if err <= 1.0:
                    t_next = seg_end if (seg_end - t) <= h * (1.0 + 1e-12) else t + h
                    phi, pd, lna = p2, v2, l2
                    t = t_next
                    rhs.guard_pole(phi, t)
                    steps_total += 1
                    if steps_total > control.max_steps:
                        raise StepFailureError(f"exceeded max_steps={control.max_steps}")
                    if steps_total % control.sample_stride == 0 or t == seg_end:
                        sample(rhs, t, phi, pd, lna)
                    grow = 0.9 * err ** -0.2 if err > 0 else 5.0
                    h *= min(5.0, max(0.2, grow))
                else:
                    h *= max(0.2, 0.9 * err ** -0.2)

    t_arr = np.array(samples_t)
    lna_arr = np.array(samples_lna)
    return TimeSeries(
        t=t_arr,
        phi=np.array(samples_phi),
        phi_dot=np.array(samples_pd),
        a=np.exp(lna_arr),
        H=np.array(samples_h),
        V=np.array(samples_v),
        regime=np.array(samples_reg),
        efolds=lna_arr - lna0,
        transitions=tuple(transitions),
    )


def integrate_conformal(
    params: ModelParams,
    cosmo: CosmoParams,
    initial: FieldState,
    eta_end: float,
    control: StepControl | None = None,
    *,
    kinetic_closure: bool = False,
    linear_force: bool = False,
) -> TimeSeries:
    """Advance the conformal-time twin: phi'' + 2 a H phi' + a^2 dV/dphi = 0.

    Conformal time starts at 0 and runs to ``eta_end``; cosmic time is
    carried as a state (dt/deta = a), and the de Sitter estimate
    -1/(a H) is attached as the aux column ``t_conf_approx``.
    """
    control = control or StepControl()
    if not (eta_end > 0):
        raise InvalidParams(f"eta_end > 0 required, got {eta_end!r}")

    lna0 = math.log(initial.a)
    state = [initial.phi, initial.phi_dot * initial.a, lna0, initial.t]  # phi, phi', ln a, t
    eta = 0.0

    samples: list[tuple[float, float, float, float, float]] = []  # eta, phi, phi', lna, t
    transitions: list[RegimeTransition] = []

    def make_rhs(regime: Regime) -> _RegimeRhs:
        return _RegimeRhs(params, regime, kinetic_closure, linear_force, None, None)

    rhs = make_rhs(regime_for(initial.t, params))

    def deriv(y: list[float]):
        phi_c, pp_c, lna_c, t_c = y
        a_c = math.exp(lna_c)
        h_c = rhs.H_of(phi_c, pp_c / a_c, t_c)
        ah = a_c * h_c
        return [pp_c, -2.0 * ah * pp_c - a_c * a_c * rhs.force(phi_c), ah, a_c]

    def rk4_step(y: list[float], h: float) -> list[float]:
        k1 = deriv(y)
        y2 = [y[i] + 0.5 * h * k1[i] for i in range(4)]
        k2 = deriv(y2)
        y3 = [y[i] + 0.5 * h * k2[i] for i in range(4)]
        k3 = deriv(y3)
        y4 = [y[i] + h * k3[i] for i in range(4)]
        k4 = deriv(y4)
        return [y[i] + (h / 6.0) * (k1[i] + 2.0 * (k2[i] + k3[i]) + k4[i]) for i in range(4)]

    def check_singular(y: list[float]) -> None:
        a_c = math.exp(y[2])
        h_c = rhs.H_of(y[0], y[1] / a_c, y[3])
        if abs(a_c * h_c) < 1e-12:
            raise SingularMapError(f"|a H| < 1e-12 at t={y[3]!r}")

    check_singular(state)
    samples.append((eta, state[0], state[1], state[2], state[3]))

    boundaries = [b for b in (params.t_p, params.r2_end) if state[3] < b]
    steps_total = 0
    dt = control.dt
    while eta < eta_end:
        h = min(dt, eta_end - eta)
        trial = rk4_step(state, h)
        if boundaries and trial[3] > boundaries[0]:
            # Land the cosmic-time state exactly on the regime boundary.
            t_b = boundaries[0]
            lo, hi = 0.0, h
            landed = trial
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                cand = rk4_step(state, mid)
                if abs(cand[3] - t_b) <= 1e-12 * max(1.0, abs(t_b)):
                    landed, h = cand, mid
                    break
                if cand[3] > t_b:
                    hi = mid
                else:
                    lo, landed, h = mid, cand, mid
            trial = landed
            trial[3] = t_b
            boundaries.pop(0)
            new_rhs = make_rhs(regime_for(t_b + 1e-15 * max(1.0, t_b), params))
            a_b = math.exp(trial[2])
            transitions.append(
                RegimeTransition(
                    t=t_b,
                    from_regime=rhs.regime,
                    to_regime=new_rhs.regime,
                    H_before=rhs.H_of(trial[0], trial[1] / a_b, t_b),
                    H_after=new_rhs.H_of(trial[0], trial[1] / a_b, t_b),
                )
            )
            state = trial
            eta = eta + h
            rhs = new_rhs
        else:
            state = trial
            eta = eta_end if (eta_end - eta) <= h * (1.0 + 1e-12) else eta + h
        check_singular(state)
        rhs.guard_pole(state[0], state[3])
        steps_total += 1
        if steps_total > control.max_steps:
            raise StepFailureError(f"exceeded max_steps={control.max_steps}")
        if steps_total % control.sample_stride == 0 or eta >= eta_end:
            samples.append((eta, state[0], state[1], state[2], state[3]))

    etas = np.array([s[0] for s in samples])
    phis = np.array([s[1] for s in samples])
    pps = np.array([s[2] for s in samples])
    lnas = np.array([s[3] for s in samples])
    ts = np.array([s[4] for s in samples])
    a_arr = np.exp(lnas)

    regs = np.array([regime_for(float(tv), params).value for tv in ts])
    v_arr = np.array(
        [eval_potential(Regime(int(r)), float(p), params) for r, p in zip(regs, phis)]
    )
    if kinetic_closure:
        v_closure = v_arr + 0.5 * (pps / a_arr) ** 2
    else:
        v_closure = v_arr
    h_arr = np.sqrt(_FRIEDMANN_COEFF * params.G * v_closure)

    return TimeSeries(
        t=ts,
        phi=phis,
        phi_dot=pps / a_arr,
        a=a_arr,
        H=h_arr,
        V=v_arr,
        regime=regs,
        efolds=lnas - lna0,
        transitions=tuple(transitions),
        aux={
            "eta": etas,
            "phi_prime": pps,
            "t_conf_approx": -1.0 / (a_arr * h_arr),
        },
    )
