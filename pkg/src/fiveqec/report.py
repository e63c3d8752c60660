"""Report generation: CSV tables, plot-ready JSON and rendered figures.

Reads every ``*.json`` record in a results directory and writes, next to
the delimited tables, matplotlib renderings of the standard views: the
stabilizer-expectation bar chart of a prepared state, the syndrome grid
heat map, and process-matrix bars.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import HARDWARE_REFERENCE, ResultRecord

PREPARE_COLUMNS = ("state", "fidelity", "fidelity_in_code_space",
                   "code_space_probability", "syndrome_success_probability")


def load_records(directory) -> list[ResultRecord]:
    directory = Path(directory)
    records = []
    for path in sorted(directory.glob("*.json")):
        try:
            records.append(ResultRecord.load(path))
        except (KeyError, TypeError, json.JSONDecodeError):
            raise ValueError(f"not a result record: {path}")
    return records


def _write_csv(path: Path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def fidelity_table(records) -> tuple[tuple, list[list]]:
    rows = []
    for rec in records:
        if rec.experiment.startswith("prepare-"):
            rows.append([rec.metrics.get(c) for c in PREPARE_COLUMNS])
    return PREPARE_COLUMNS, rows


def simulation_table(records) -> tuple[tuple, list[list]]:
    """One row per record: the headline metric of each experiment."""
    header = ("experiment", "noise", "metric", "value")
    rows = []
    for rec in records:
        noise_mode = rec.config.get("noise", "?")
        if rec.experiment.startswith("prepare-"):
            rows.append([rec.experiment, noise_mode, "fidelity",
                         rec.metrics["fidelity"]])
        elif rec.experiment == "decode":
            for key, val in sorted(rec.metrics.items()):
                rows.append([rec.experiment, noise_mode, key, val])
        elif rec.experiment.startswith("logical-qpt-"):
            rows.append([rec.experiment, noise_mode,
                         "process_fidelity_in_code_space",
                         rec.metrics["process_fidelity_in_code_space"]])
        elif rec.experiment.startswith("syndrome-grid"):
            rows.append([rec.experiment, noise_mode, "num_detected",
                         rec.metrics["num_detected"]])
        elif rec.experiment == "compile":
            rows.append([rec.experiment, noise_mode, "verification_distance",
                         rec.metrics["verification_distance"]])
    return header, rows


def plot_stabilizer_bars(record: ResultRecord, path: Path) -> None:
    labels = record.arrays["stabilizer_labels"]
    values = record.arrays["stabilizer_expectations"]
    # drop the trivial identity term, constant one
    pairs = [(l, v) for l, v in zip(labels, values) if l != "g0"]
    fig, ax = plt.subplots(figsize=(10, 3.2))
    ax.bar(range(len(pairs)), [v for _, v in pairs], color="#3b6fb6")
    ax.axhline(0.0, color="k", lw=0.8)
    ax.set_xticks(range(len(pairs)))
    ax.set_xticklabels([l for l, _ in pairs], rotation=90, fontsize=6)
    ax.set_ylabel("expectation")
    ax.set_ylim(-1.05, 1.05)
    ax.set_title(f"Stabilizer expectations ({record.metrics['state']})")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_syndrome_grid(record: ResultRecord, path: Path) -> None:
    grid = np.array(record.arrays["grid"])
    labels = record.arrays["error_labels"]
    fig_h = max(2.5, 0.18 * len(labels) + 1.2)
    fig, ax = plt.subplots(figsize=(4.2, fig_h))
    im = ax.imshow(grid, cmap="RdBu", vmin=-1, vmax=1, aspect="auto")
    ax.set_xticks(range(4))
    ax.set_xticklabels([f"g{i + 1}" for i in range(4)])
    ax.set_yticks(range(len(labels)))
    ax.set_yticklabels(labels, fontsize=5)
    ax.set_title(f"Syndromes, weight-{record.metrics['error_weight']} errors")
    fig.colorbar(im, ax=ax, label="expectation")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def plot_chi_matrix(record: ResultRecord, path: Path) -> None:
    chi = np.array(record.arrays["chi_real"])
    basis = record.arrays["chi_basis"]
    fig, ax = plt.subplots(figsize=(4.4, 3.4))
    im = ax.imshow(chi, cmap="RdBu", vmin=-1, vmax=1)
    for (i, j), val in np.ndenumerate(chi):
        ax.text(j, i, f"{val:.2f}", ha="center", va="center", fontsize=8)
    ax.set_xticks(range(4))
    ax.set_yticks(range(4))
    ax.set_xticklabels(basis)
    ax.set_yticklabels(basis)
    ax.set_title(f"Re(chi), {record.experiment}")
    fig.colorbar(im, ax=ax)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def generate_report(records_dir, out_dir=None) -> dict:
    """Tables, plot data and figures for every record in a directory.

    Returns a manifest of everything written; an empty directory yields an
    explicit "no records" status instead of an error.
    """
    records_dir = Path(records_dir)
    out_dir = Path(out_dir) if out_dir else records_dir / "report"
    out_dir.mkdir(parents=True, exist_ok=True)
    records = load_records(records_dir)
    manifest = {"records": len(records), "tables": [], "figures": [],
                "status": "ok" if records else "no records",
                "hardware_reference": HARDWARE_REFERENCE}
    if not records:
        (out_dir / "summary.json").write_text(
            json.dumps(manifest, indent=1, sort_keys=True) + "\n",
            encoding="utf-8")
        return manifest

    header, rows = fidelity_table(records)
    if rows:
        _write_csv(out_dir / "fidelity_table.csv", header, rows)
        manifest["tables"].append("fidelity_table.csv")
    header, rows = simulation_table(records)
    _write_csv(out_dir / "simulation_table.csv", header, rows)
    manifest["tables"].append("simulation_table.csv")

    plot_data = {}
    for rec in records:
        if rec.experiment.startswith("prepare-"):
            name = f"stabilizers_{rec.metrics['state']}.png"
            plot_stabilizer_bars(rec, out_dir / name)
            manifest["figures"].append(name)
            plot_data[rec.experiment] = {
                "labels": rec.arrays["stabilizer_labels"],
                "expectations": rec.arrays["stabilizer_expectations"],
            }
        elif rec.experiment.startswith("syndrome-grid"):
            name = rec.experiment + ".png"
            plot_syndrome_grid(rec, out_dir / name)
            manifest["figures"].append(name)
            plot_data[rec.experiment] = {
                "error_labels": rec.arrays["error_labels"],
                "grid": rec.arrays["grid"],
            }
        elif "chi_real" in rec.arrays:
            name = rec.experiment + "_chi.png"
            plot_chi_matrix(rec, out_dir / name)
            manifest["figures"].append(name)
            plot_data[rec.experiment] = {"chi_real": rec.arrays["chi_real"],
                                         "chi_imag": rec.arrays["chi_imag"]}
    (out_dir / "plot_data.json").write_text(
        json.dumps(plot_data, indent=1, sort_keys=True) + "\n",
        encoding="utf-8")
    (out_dir / "summary.json").write_text(
        json.dumps(manifest, indent=1, sort_keys=True) + "\n",
        encoding="utf-8")
    return manifest
