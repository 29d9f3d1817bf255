"""Run orchestration: single runs, parameter sweeps, and run reports.

A run writes a self-describing directory: vacuum.json, potential.csv,
series.csv, two SVG figures, and manifest.json.  Manifests carry the
fully resolved scenario, every calibration and ambiguity choice, the
regime-transition log, and a checksum inventory of all other outputs;
they embed no timestamps or absolute paths, so re-running a scenario
reproduces every file byte for byte.
"""

from __future__ import annotations

import csv
import hashlib
import itertools
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import Scenario, build_scenario
from .dilaton import dilaton_report, frw_size_report
from .dynamics import integrate_cosmic, matching_residual, matching_residual_first_order
from .errors import FvcosmoError, NumericError, PoleError
from .nucleation import rate_series, resolve_lambda0
from .potentials import Regime, eval_potential
from .vacuum import DEFAULT_WINDOW, vacuum_report

PLANCK_TIME_SI_S = 1e-42  # nominal SI Planck time used for the size comparison

HUBBLE_CLOSED_FORM_NOTE = (
    "closed-form rate estimate sums a term scaling as alpha/a0 with one scaling "
    "as a0/alpha; evaluated verbatim, no rebalancing applied"
)


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to audit or byte-reproduce one run."""

    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, indent=2, sort_keys=True) + "\n"

    @property
    def ok(self) -> bool:
        return self.data.get("error") is None


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_potential_csv(scenario: Scenario, path: Path, n: int = 1201) -> None:
    lo, hi = DEFAULT_WINDOW
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("phi,V\n")
        for i in range(n):
            phi = lo + (hi - lo) * i / (n - 1)
            v = eval_potential(Regime.R1, phi, scenario.model)
            fh.write(f"{phi!r},{v!r}\n")


def run(scenario: Scenario, out_dir) -> RunManifest:
    """Execute one scenario into ``out_dir``; numeric failures re-raise after
    the manifest (with the failure context) has been written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    manifest: dict = {
        "tool": {"name": "fvcosmo", "version": __version__},
        "scenario": scenario.to_dict(),
        "choices": {
            "e_coeff": scenario.nucleation.e_coeff,
            "force_mode": "linear" if scenario.toggles.linear_force else "potential_gradient",
            "hubble_closure": (
                "kinetic_inclusive"
                if scenario.toggles.kinetic_energy_in_hubble
                else "potential_only"
            ),
            "wall_scale_convention": "L = 1/gap, unit proportionality constant",
            "initial_density_applied_in": "R1",
        },
        "resolved": {},
        "diagnostics": {},
        "outputs": {},
        "error": None,
    }
    written: list[Path] = []
    error: FvcosmoError | None = None

    try:
        vac = vacuum_report(scenario.model)
        vacuum_path = out / "vacuum.json"
        vacuum_path.write_text(
            json.dumps(vac.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )
        written.append(vacuum_path)

        potential_path = out / "potential.csv"
        _write_potential_csv(scenario, potential_path)
        written.append(potential_path)

        series = integrate_cosmic(
            scenario.model,
            scenario.cosmo,
            scenario.initial_state(),
            scenario.integration.t_end,
            scenario.integration.step_control(),
            kinetic_closure=scenario.toggles.kinetic_energy_in_hubble,
            linear_force=scenario.toggles.linear_force,
        )
        lambda0 = resolve_lambda0(series, scenario.nucleation, scenario.model.t_p)
        series = series.with_epsilon(rate_series(series, scenario.nucleation, scenario.model.t_p))

        series_path = out / "series.csv"
        series.to_csv(series_path)
        written.append(series_path)

        manifest["resolved"] = {
            "m": scenario.model.m,
            "m_source": "config",
            "phi_star": scenario.model.phi_star,
            "a0_tilde": scenario.cosmo.a0_tilde,
            "alpha": scenario.cosmo.alpha,
            "lambda0": lambda0,
            "lambda0_source": (
                "config" if scenario.nucleation.lambda0 is not None else "calibrated_at_t_p"
            ),
        }
        first_tp = int(np.nonzero(series.t >= scenario.model.t_p)[0][0])
        manifest["diagnostics"] = {
            "gap": vac.gap,
            "bracket_residual": vac.bracket_residual,
            "matching_residual": matching_residual(scenario.model, scenario.cosmo),
            "matching_residual_first_order": matching_residual_first_order(
                scenario.model, scenario.cosmo
            ),
            "hubble_closed_form_note": HUBBLE_CLOSED_FORM_NOTE,
            "epsilon_at_t_p": float(series.epsilon[first_tp]),
            "epsilon_final": float(series.epsilon[-1]),
            "efolds_total": float(series.efolds[-1]),
            "H_final": float(series.H[-1]),
            "transitions": [tr.to_dict() for tr in series.transitions],
            "dilaton": dilaton_report(scenario.dilaton),
            "frw_comparison": frw_size_report(PLANCK_TIME_SI_S),
        }

        from . import plots  # deferred: pulls in matplotlib

        potential_svg = out / "potential.svg"
        plots.plot_potential(potential_path, vacuum_path, potential_svg)
        written.append(potential_svg)
        series_svg = out / "series.svg"
        plots.plot_series(series_path, series_svg)
        written.append(series_svg)
    except NumericError as exc:
        error = exc
        record = {"type": type(exc).__name__, "message": str(exc)}
        if isinstance(exc, PoleError):
            record["t"] = exc.t
            record["phi"] = exc.phi
        manifest["error"] = record

    manifest["outputs"] = {
        p.name: {"sha256": _sha256(p), "bytes": p.stat().st_size} for p in written
    }
    (out / "manifest.json").write_text(RunManifest(manifest).to_json(), encoding="utf-8")
    if error is not None:
        raise error
    return RunManifest(manifest)


# -- sweeps -------------------------------------------------------------------

def parse_grid_spec(spec: str) -> tuple[str, list[str]]:
    """One sweep axis: 'key=v1,v2,...' or 'key=lo:hi:n' (inclusive linspace)."""
    if "=" not in spec:
        raise FvcosmoError(f"grid spec must look like key=..., got {spec!r}")
    key, _, body = spec.partition("=")
    key = key.strip()
    body = body.strip()
    if ":" in body:
        parts = body.split(":")
        if len(parts) != 3:
            raise FvcosmoError(f"range spec must be lo:hi:n, got {body!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if n < 1:
            raise FvcosmoError(f"range spec needs n >= 1, got {n}")
        values = [repr(float(v)) for v in np.linspace(lo, hi, n)]
    else:
        values = [v.strip() for v in body.split(",") if v.strip()]
        if not values:
            raise FvcosmoError(f"empty value list in grid spec {spec!r}")
    return key, values


def _sweep_point(args: tuple[dict, str, str, list[tuple[str, str]]]) -> dict:
    base_mapping, name, out_dir, overrides = args
    mapping = dict(base_mapping)
    for key, value in overrides:
        mapping[key] = value
    row: dict = {"name": name}
    row.update({key: value for key, value in overrides})
    try:
        scenario = build_scenario(mapping, default_name=name)
        manifest = run(scenario, out_dir)
        diag = manifest.data["diagnostics"]
        row.update(
            gap=repr(diag["gap"]),
            efolds=repr(diag["efolds_total"]),
            H_final=repr(diag["H_final"]),
            epsilon_drift=repr(diag["epsilon_final"] - diag["epsilon_at_t_p"]),
            status="ok",
        )
    except FvcosmoError as exc:
        row.update(
            gap="nan", efolds="nan", H_final="nan", epsilon_drift="nan",
            status=f"error:{type(exc).__name__}",
        )
    return row


def sweep(
    base_mapping: dict[str, str],
    grid_specs: list[str],
    out_dir,
    workers: int = 1,
    base_name: str = "sweep",
) -> tuple[Path, int]:
    """Run every grid point into its own directory and write a summary CSV.

    Returns (summary path, number of failed points).  Point ordering, and
    therefore the summary, is deterministic regardless of worker count.
    """
    axes = [parse_grid_spec(s) for s in grid_specs]
    if not axes:
        raise FvcosmoError("sweep needs at least one grid spec")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)

    points: list[tuple[dict, str, str, list[tuple[str, str]]]] = []
    for idx, combo in enumerate(itertools.product(*[vals for _, vals in axes])):
        overrides = [(axes[k][0], combo[k]) for k in range(len(axes))]
        name = f"{base_name}-{idx:04d}"
        points.append((base_mapping, name, str(out / f"run-{idx:04d}"), overrides))

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, points))
    else:
        rows = [_sweep_point(p) for p in points]

    fieldnames = ["index", "name"] + [key for key, _ in axes] + [
        "gap", "efolds", "H_final", "epsilon_drift", "status",
    ]
    summary_path = out / "sweep_summary.csv"
    with open(summary_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fieldnames, lineterminator="\n")
        writer.writeheader()
        for idx, row in enumerate(rows):
            writer.writerow({"index": idx, **row})
    failed = sum(1 for row in rows if row["status"] != "ok")
    return summary_path, failed


def verify_run_dir(run_dir) -> dict:
    """Check a run directory's checksums against its manifest.

    Returns {"manifest": ..., "checks": {file: "ok"|"mismatch"|"missing"}}.
    """
    run_path = Path(run_dir)
    manifest_path = run_path / "manifest.json"
    data = json.loads(manifest_path.read_text(encoding="utf-8"))
    checks: dict[str, str] = {}
    for name, entry in data.get("outputs", {}).items():
        target = run_path / name
        if not target.exists():
            checks[name] = "missing"
        elif _sha256(target) != entry["sha256"]:
            checks[name] = "mismatch"
        else:
            checks[name] = "ok"
    return {"manifest": data, "checks": checks}
