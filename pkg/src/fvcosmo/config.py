"""Scenario files: flat key=value text with dotted section prefixes.

Example::

    name = canonical
    model.m = 0.17896576
    model.phi0_tilde = 3.5
    integration.t_end = 50.0

Parsing is strict: unknown keys and duplicate keys are errors, and a
scenario that violates any parameter invariant reports every violation
at once.  Loading resolves all derived quantities (phi_star, a0_tilde,
alpha, the starting field velocity) so the echoed scenario is complete.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

from .dilaton import DilatonParams
from .dynamics import (
    CosmoParams,
    FieldState,
    StepControl,
    resolve_cosmo,
    slow_roll_velocity,
)
from .errors import ConfigError, InvalidParams
from .nucleation import NucleationParams
from .potentials import (
    ModelParams,
    eval_potential,
    regime_for,
    validate_initial_field,
)


@dataclass(frozen=True)
class Toggles:
    """Run-mode switches for the documented reading ambiguities."""

    kinetic_energy_in_hubble: bool = False
    linear_force: bool = False


@dataclass(frozen=True)
class IntegrationSettings:
    t_start: float = 0.0
    t_end: float = 50.0
    mode: str = "fixed"
    dt: float = 1e-3
    atol: float = 1e-9
    rtol: float = 1e-9
    sample_stride: int = 10
    phi_dot0: float | None = None  # None -> constant-slope roll value
    a0: float | None = None  # None -> anchored starting scale factor

    def step_control(self) -> StepControl:
        return StepControl(
            mode=self.mode,
            dt=self.dt,
            atol=self.atol,
            rtol=self.rtol,
            sample_stride=self.sample_stride,
        )


@dataclass(frozen=True)
class Scenario:
    """One fully-resolved run configuration."""

    name: str
    model: ModelParams
    cosmo: CosmoParams
    nucleation: NucleationParams
    dilaton: DilatonParams
    integration: IntegrationSettings
    toggles: Toggles = field(default_factory=Toggles)

    def resolved_phi_dot0(self) -> float:
        if self.integration.phi_dot0 is not None:
            return self.integration.phi_dot0
        return slow_roll_velocity(self.model)

    def resolved_a0(self) -> float:
        if self.integration.a0 is not None:
            return self.integration.a0
        return self.cosmo.a0_tilde

    def initial_state(self) -> FieldState:
        t0 = self.integration.t_start
        regime = regime_for(t0, self.model)
        phi0 = self.model.phi0_tilde
        pd0 = self.resolved_phi_dot0()
        v = eval_potential(regime, phi0, self.model)
        if self.toggles.kinetic_energy_in_hubble:
            v = v + 0.5 * pd0 * pd0
        h0 = math.sqrt(8.0 * math.pi / 3.0 * self.model.G * v)
        return FieldState(t=t0, phi=phi0, phi_dot=pd0, a=self.resolved_a0(), H=h0, regime=regime)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "model": {
                "m": self.model.m,
                "M_p": self.model.M_p,
                "A": self.model.A,
                "phi_star": self.model.phi_star,
                "phi0_tilde": self.model.phi0_tilde,
                "G": self.model.G,
                "rho_init": self.model.rho_init,
                "t_p": self.model.t_p,
                "delta_t": self.model.delta_t,
                "r2_span": self.model.r2_span,
                "r2_end": self.model.r2_end,
            },
            "cosmo": {
                "a_B": self.cosmo.a_B,
                "H_B": self.cosmo.H_B,
                "t_B": self.cosmo.t_B,
                "alpha": self.cosmo.alpha,
                "a0_tilde": self.cosmo.a0_tilde,
            },
            "nucleation": {
                "lambda0": self.nucleation.lambda0,
                "E0": self.nucleation.E0,
                "S_E": self.nucleation.S_E,
                "M": self.nucleation.M,
                "e_coeff": self.nucleation.e_coeff,
            },
            "dilaton": {"l_p": self.dilaton.l_p, "phi": self.dilaton.phi},
            "integration": {
                "t_start": self.integration.t_start,
                "t_end": self.integration.t_end,
                "mode": self.integration.mode,
                "dt": self.integration.dt,
                "atol": self.integration.atol,
                "rtol": self.integration.rtol,
                "sample_stride": self.integration.sample_stride,
                "phi_dot0": self.resolved_phi_dot0(),
                "a0": self.resolved_a0(),
            },
            "toggles": {
                "kinetic_energy_in_hubble": self.toggles.kinetic_energy_in_hubble,
                "linear_force": self.toggles.linear_force,
            },
        }


def _parse_float(text: str) -> float:
    value = float(text)
    if math.isnan(value):
        raise ValueError("nan is not a valid value")
    return value


def _parse_optional_float(text: str) -> float | None:
    if text.lower() in ("auto", "none"):
        return None
    return _parse_float(text)


def _parse_int(text: str) -> int:
    return int(text)


def _parse_bool(text: str) -> bool:
    low = text.lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"expected a boolean, got {text!r}")


def _parse_str(text: str) -> str:
    return text


def _parse_mode(text: str) -> str:
    if text not in ("fixed", "adaptive"):
        raise ValueError(f"mode must be 'fixed' or 'adaptive', got {text!r}")
    return text


# key -> (section, field, parser)
KEY_REGISTRY: dict[str, tuple[str, str, object]] = {
    "name": ("", "name", _parse_str),
    "model.m": ("model", "m", _parse_float),
    "model.M_p": ("model", "M_p", _parse_float),
    "model.A": ("model", "A", _parse_float),
    "model.phi_star": ("model", "phi_star", _parse_optional_float),
    "model.phi0_tilde": ("model", "phi0_tilde", _parse_float),
    "model.G": ("model", "G", _parse_float),
    "model.rho_init": ("model", "rho_init", _parse_float),
    "model.t_p": ("model", "t_p", _parse_float),
    "model.delta_t": ("model", "delta_t", _parse_float),
    "model.r2_span": ("model", "r2_span", _parse_optional_float),
    "cosmo.a_B": ("cosmo", "a_B", _parse_float),
    "cosmo.H_B": ("cosmo", "H_B", _parse_float),
    "cosmo.t_B": ("cosmo", "t_B", _parse_float),
    "cosmo.alpha": ("cosmo", "alpha", _parse_optional_float),
    "cosmo.a0_tilde": ("cosmo", "a0_tilde", _parse_optional_float),
    "nucleation.lambda0": ("nucleation", "lambda0", _parse_optional_float),
    "nucleation.E0": ("nucleation", "E0", _parse_float),
    "nucleation.S_E": ("nucleation", "S_E", _parse_float),
    "nucleation.M": ("nucleation", "M", _parse_float),
    "nucleation.e_coeff": ("nucleation", "e_coeff", _parse_float),
    "dilaton.l_p": ("dilaton", "l_p", _parse_float),
    "dilaton.phi": ("dilaton", "phi", _parse_float),
    "integration.t_start": ("integration", "t_start", _parse_float),
    "integration.t_end": ("integration", "t_end", _parse_float),
    "integration.mode": ("integration", "mode", _parse_mode),
    "integration.dt": ("integration", "dt", _parse_float),
    "integration.atol": ("integration", "atol", _parse_float),
    "integration.rtol": ("integration", "rtol", _parse_float),
    "integration.sample_stride": ("integration", "sample_stride", _parse_int),
    "integration.phi_dot0": ("integration", "phi_dot0", _parse_optional_float),
    "integration.a0": ("integration", "a0", _parse_optional_float),
    "toggles.kinetic_energy_in_hubble": ("toggles", "kinetic_energy_in_hubble", _parse_bool),
    "toggles.linear_force": ("toggles", "linear_force", _parse_bool),
}


def parse_config_text(text: str, source: str = "<config>") -> dict[str, str]:
    """key=value lines to a raw mapping; every malformed line is reported."""
    mapping: dict[str, str] = {}
    problems: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            problems.append(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in KEY_REGISTRY:
            problems.append(f"{source}:{lineno}: unknown key {key!r}")
            continue
        if key in mapping:
            problems.append(f"{source}:{lineno}: duplicate key {key!r}")
            continue
        if not value:
            problems.append(f"{source}:{lineno}: empty value for key {key!r}")
            continue
        mapping[key] = value
    if problems:
        raise ConfigError("\n".join(problems))
    return mapping


def build_scenario(mapping: dict[str, str], default_name: str = "scenario") -> Scenario:
    """Typed, validated, fully resolved Scenario from a raw mapping."""
    parsed: dict[str, dict] = {"": {}, "model": {}, "cosmo": {}, "nucleation": {},
                               "dilaton": {}, "integration": {}, "toggles": {}}
    problems: list[str] = []
    for key, raw in mapping.items():
        section, fname, parser = KEY_REGISTRY[key]
        try:
            parsed[section][fname] = parser(raw)
        except ValueError as exc:
            problems.append(f"key {key!r}: {exc}")
    if problems:
        raise ConfigError("\n".join(problems))

    name = parsed[""].get("name", default_name)
    if not name:
        problems.append("name must be non-empty")

    if "m" not in parsed["model"]:
        problems.append("model.m is required")
    if problems:
        raise ConfigError("\n".join(problems))

    violations: list[str] = []
    model = cosmo = nuc = dil = integ = None
    try:
        model = ModelParams(**parsed["model"])
    except InvalidParams as exc:
        violations.extend(f"model: {v}" for v in exc.violations)
    try:
        cosmo = CosmoParams(**parsed["cosmo"])
    except InvalidParams as exc:
        violations.extend(f"cosmo: {v}" for v in exc.violations)
    try:
        nuc = NucleationParams(**parsed["nucleation"])
    except InvalidParams as exc:
        violations.extend(f"nucleation: {v}" for v in exc.violations)
    try:
        dil = DilatonParams(**parsed["dilaton"])
    except InvalidParams as exc:
        violations.extend(f"dilaton: {v}" for v in exc.violations)
    try:
        integ = IntegrationSettings(**parsed["integration"])
        if not (integ.t_end > integ.t_start):
            violations.append(
                f"integration: t_end > t_start required, got {integ.t_end!r} <= {integ.t_start!r}"
            )
        integ.step_control()
    except InvalidParams as exc:
        violations.extend(f"integration: {v}" for v in exc.violations)
    toggles = Toggles(**parsed["toggles"])

    if model is not None:
        try:
            validate_initial_field(model)
        except InvalidParams as exc:
            violations.extend(f"model: {v}" for v in exc.violations)
        if nuc is not None:
            try:
                nuc.validate_against(model.M_p)
            except InvalidParams as exc:
                violations.extend(f"nucleation: {v}" for v in exc.violations)
    if violations:
        raise ConfigError("\n".join(violations))

    cosmo = resolve_cosmo(cosmo, model)
    return Scenario(
        name=name, model=model, cosmo=cosmo, nucleation=nuc,
        dilaton=dil, integration=integ, toggles=toggles,
    )


def load_scenario(path) -> Scenario:
    """Parse, validate, and resolve a scenario file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from exc
    mapping = parse_config_text(text, source=str(path))
    return build_scenario(mapping, default_name=path.stem)
