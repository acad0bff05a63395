"""CSV and figure output for the strategy benchmark."""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

FIELDS = [
    "seed", "instance", "context", "param", "kind", "strategy",
    "sfm_calls", "mcf_calls", "iterations", "optimum", "ground_size", "range",
]


def write_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=FIELDS, lineterminator="\n")
        w.writeheader()
        for row in rows:
            w.writerow({k: row[k] for k in FIELDS})


def render(rows: list[dict], path) -> Path:
    """Per-context SFM calls of both strategies, one panel per parameter kind."""
    path = Path(path)
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6), sharey=True)
    for ax, param in zip(axes, ("alpha", "delta")):
        sub = [r for r in rows if r["param"] == param]
        for strategy, marker in (("strong-map", "o"), ("baseline", "s")):
            pts = [(r["range"], r["sfm_calls"]) for r in sub if r["strategy"] == strategy]
            if pts:
                xs, ys = zip(*pts)
                ax.scatter(xs, ys, marker=marker, s=18, alpha=0.7, label=strategy)
        ax.set_xscale("symlog")
        ax.set_xlabel(f"{param} range")
        ax.set_title(param)
        ax.grid(alpha=0.3)
    axes[0].set_ylabel("SFM calls per search")
    axes[0].legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
    return path
