"""Command-line interface.

Subcommands: vacuum, simulate, sweep, report, calibrate.
Exit codes: 0 success, 1 validation problem, 2 numeric failure, 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .config import load_scenario, parse_config_text
from .errors import ConfigError, FvcosmoError, InvalidParams, NumericError
from .runner import run, sweep, verify_run_dir
from .vacuum import CAL_M_MIN, CAL_N_GRID, calibrate_mass, vacuum_report

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERIC = 2
EXIT_IO = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fvcosmo",
        description="False-vacuum to chaotic-inflation scenario simulator.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_vac = sub.add_parser("vacuum", help="analyze the well landscape of a scenario")
    p_vac.add_argument("config", help="scenario file (key = value lines)")
    p_vac.add_argument("--out", help="also write the report JSON here")

    p_sim = sub.add_parser("simulate", help="run one scenario end to end")
    p_sim.add_argument("config")
    p_sim.add_argument("--out", required=True, help="output directory")

    p_sweep = sub.add_parser("sweep", help="run a parameter grid")
    p_sweep.add_argument("config")
    p_sweep.add_argument(
        "--grid", action="append", required=True,
        help="axis spec: key=v1,v2,... or key=lo:hi:n (repeatable)",
    )
    p_sweep.add_argument("--out", required=True)
    p_sweep.add_argument("--workers", type=int, default=1)

    p_rep = sub.add_parser("report", help="summarize and verify a run directory")
    p_rep.add_argument("run_dir")

    p_cal = sub.add_parser("calibrate", help="solve for masses matching a vacuum gap")
    p_cal.add_argument("config")
    p_cal.add_argument("--target-gap", type=float, required=True)
    p_cal.add_argument("--out", help="also write the calibration JSON here")
    return parser


def _cmd_vacuum(args) -> int:
    scenario = load_scenario(args.config)
    report = vacuum_report(scenario.model)
    text = json.dumps(report.to_dict(), indent=2, sort_keys=True)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def _cmd_simulate(args) -> int:
    scenario = load_scenario(args.config)
    manifest = run(scenario, args.out)
    print(f"run '{scenario.name}' -> {args.out}")
    for name, entry in sorted(manifest.data["outputs"].items()):
        print(f"  {name}  sha256={entry['sha256'][:12]}...  {entry['bytes']} bytes")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    path = Path(args.config)
    mapping = parse_config_text(path.read_text(encoding="utf-8"), source=str(path))
    summary_path, failed = sweep(
        mapping, args.grid, args.out, workers=args.workers, base_name=path.stem
    )
    print(f"sweep summary -> {summary_path}")
    if failed:
        print(f"{failed} grid point(s) failed", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


def _cmd_report(args) -> int:
    result = verify_run_dir(args.run_dir)
    data = result["manifest"]
    scen = data["scenario"]
    print(f"run      : {scen['name']}")
    print(f"tool     : {data['tool']['name']} {data['tool']['version']}")
    if data.get("error"):
        print(f"status   : FAILED ({data['error']['type']}: {data['error']['message']})")
    else:
        diag = data["diagnostics"]
        print("status   : ok")
        print(f"gap      : {diag['gap']}")
        print(f"efolds   : {diag['efolds_total']}")
        print(f"H_final  : {diag['H_final']}")
        print(f"eps(t_p) : {diag['epsilon_at_t_p']}")
    bad = False
    for name, state in sorted(result["checks"].items()):
        print(f"  {name}: {state}")
        bad = bad or state != "ok"
    if bad:
        print("checksum verification failed", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def _cmd_calibrate(args) -> int:
    scenario = load_scenario(args.config)
    template = scenario.model
    masses = calibrate_mass(template, args.target_gap)
    matches = []
    for m in masses:
        rep = vacuum_report(replace(template, m=m, phi_star=None))
        matches.append({"m": m, "gap": rep.gap, "wall_scale": rep.wall_scale})
    doc = {
        "target_gap": args.target_gap,
        "scan": {"m_min": CAL_M_MIN, "m_max": 0.999 * template.M_p, "n_grid": CAL_N_GRID},
        "matches": matches,
        "certified_empty": not matches,
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "vacuum": _cmd_vacuum,
        "simulate": _cmd_simulate,
        "sweep": _cmd_sweep,
        "report": _cmd_report,
        "calibrate": _cmd_calibrate,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, InvalidParams) as exc:
        print(f"validation error:\n{exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except FvcosmoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
