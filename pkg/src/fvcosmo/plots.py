"""Static SVG figures for run directories.

Figures are projections of already-written output files (series.csv,
potential.csv, vacuum.json): nothing is recomputed here.  Output is byte
deterministic: fixed hash salt, no embedded creation date.
"""

from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402  (backend must be pinned first)

matplotlib.rcParams["svg.hashsalt"] = "fvcosmo"

_SAVE_KW = {"format": "svg", "metadata": {"Date": None}}


def _read_csv_columns(path) -> dict[str, list]:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        cols: dict[str, list] = {name: [] for name in reader.fieldnames}
        for row in reader:
            for name, value in row.items():
                cols[name].append(value)
    return cols


def plot_potential(potential_csv, vacuum_json, out_path) -> None:
    """Landscape curve with both vacua marked."""
    cols = _read_csv_columns(potential_csv)
    phi = [float(v) for v in cols["phi"]]
    vv = [float(v) for v in cols["V"]]
    vac = json.loads(Path(vacuum_json).read_text(encoding="utf-8"))

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.plot(phi, vv, lw=1.2, color="tab:blue")
    ax.plot([vac["phi_T"]], [vac["V_T"]], "o", color="tab:green", label="true vacuum")
    ax.plot([vac["phi_F"]], [vac["V_F"]], "o", color="tab:red", label="false vacuum")
    ax.set_xlabel(r"$\varphi$")
    ax.set_ylabel(r"$V(\varphi)$")
    ax.set_title(f"well landscape, gap = {vac['gap']:.6g}")
    ax.legend(loc="best")
    fig.tight_layout()
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)


def plot_series(series_csv, out_path) -> None:
    """Four stacked panels: field, expansion rate, scale factor, rate column."""
    cols = _read_csv_columns(series_csv)
    t = [float(v) for v in cols["t"]]
    panels = [
        ("phi", r"$\varphi$", "linear"),
        ("H", r"$H$", "linear"),
        ("a", r"$a$", "log"),
        ("epsilon", r"$\epsilon$", "log"),
    ]
    fig, axes = plt.subplots(4, 1, figsize=(6.0, 8.0), sharex=True)
    for ax, (name, label, scale) in zip(axes, panels):
        ax.plot(t, [float(v) for v in cols[name]], lw=1.0, color="tab:blue")
        ax.set_ylabel(label)
        ax.set_yscale(scale)
    axes[-1].set_xlabel("t")
    fig.tight_layout()
    fig.savefig(out_path, **_SAVE_KW)
    plt.close(fig)
