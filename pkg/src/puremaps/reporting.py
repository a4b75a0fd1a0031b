"""File outputs for classification runs: delimited samples and figures.

Renders a transition-probability scatter (input vs output, per sampled
same-block pair) and a verdict summary chart next to a pairs.csv holding
the raw sampled numbers. These accompany the JSON report; they never
replace it.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .raymaps import ClassificationReport, _boxed
from .states import random_pure_state, transition_probability

_STATUS_COLORS = {
    "holds": "#2a9d3f",
    "fails": "#c43131",
    "undetermined": "#888888",
    "structurally_true": "#2a9d3f",
    "unverified": "#888888",
}


def sample_tp_rows(m, samples: int = 200, seed: int = 0) -> list[dict]:
    """Same-block pair samples with their input and output probabilities."""
    box = _boxed(m)
    src = box.source_algebra
    rng = np.random.default_rng([seed, 1])
    rows = []
    for b in range(src.num_blocks):
        for _ in range(samples):
            x = random_pure_state(src, b, rng)
            y = random_pure_state(src, b, rng)
            tp_in = transition_probability(x, y)
            try:
                ox, oy = box(x), box(y)
            except Exception:
                return rows
            tp_out = transition_probability(ox, oy)
            rows.append(
                {
                    "source_block": b,
                    "tp_in": tp_in,
                    "tp_out": tp_out,
                    "gap": abs(tp_in - tp_out),
                    "out_block0": ox.block,
                    "out_block1": oy.block,
                }
            )
    return rows


def write_report_files(
    m,
    report: ClassificationReport,
    out_dir: str,
    samples: int = 200,
    seed: int = 0,
) -> list[str]:
    """Write pairs.csv, tp_scatter.png and verdict_summary.png; return paths."""
    os.makedirs(out_dir, exist_ok=True)
    rows = sample_tp_rows(m, samples=samples, seed=seed)
    written = []

    csv_path = os.path.join(out_dir, "pairs.csv")
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(
            fh,
            fieldnames=["source_block", "tp_in", "tp_out", "gap", "out_block0", "out_block1"],
        )
        writer.writeheader()
        writer.writerows(rows)
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=(5, 5))
    if rows:
        ax.scatter(
            [r["tp_in"] for r in rows],
            [r["tp_out"] for r in rows],
            s=8,
            alpha=0.5,
            color="#1f5fa8",
        )
    ax.plot([0, 1], [0, 1], color="#999999", lw=1, ls="--")
    ax.set_xlabel("transition probability in")
    ax.set_ylabel("transition probability out")
    ax.set_title("same-block pair transport")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.02)
    scatter_path = os.path.join(out_dir, "tp_scatter.png")
    fig.tight_layout()
    fig.savefig(scatter_path, dpi=120)
    plt.close(fig)
    written.append(scatter_path)

    checks = [
        ("orthogonal", report.orthogonal.status),
        ("co_orthogonal", report.co_orthogonal.status),
        ("bi_orthogonal", report.bi_orthogonal.status),
        ("fibre_preserving", report.fibre_preserving.status),
        ("locally_injective", report.locally_injective.status),
        ("locally_tp_preserving", report.locally_tp_preserving.status),
        ("locally_solid", report.locally_solid),
    ]
    fig, ax = plt.subplots(figsize=(6, 3))
    ys = np.arange(len(checks))[::-1]
    for y, (name, status) in zip(ys, checks):
        ax.barh(y, 1.0, color=_STATUS_COLORS.get(status, "#888888"), height=0.7)
        ax.text(0.02, y, f"{name}: {status}", va="center", fontsize=9, color="white")
    ax.set_xlim(0, 1)
    ax.set_yticks([])
    ax.set_xticks([])
    ax.set_title(f"verdicts (n={report.sample_count}, seed={report.seed})")
    summary_path = os.path.join(out_dir, "verdict_summary.png")
    fig.tight_layout()
    fig.savefig(summary_path, dpi=120)
    plt.close(fig)
    written.append(summary_path)
    return written
