"""Plot nfl-lab CSV output with matplotlib.

    python plot.py sweep out/fig3            # grid.csv + bounds.csv of a sweep
    python plot.py thresholds thresholds.csv # output of `nfl-lab thresholds`
    python plot.py bounds bounds.csv         # output of `nfl-lab bounds`

Column contract:
    grid.csv        d,r,t,n_unitaries,n_sets,mean_risk,sample_std,stderr,learner
    bounds.csv      kind,d,r,t,value,stderr      (stderr empty for closed forms)
    thresholds.csv  kind,d,t,threshold_real,threshold_ceil
"""

import csv
import sys
from collections import defaultdict
from pathlib import Path

import matplotlib.pyplot as plt


def rows(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def group(records, key):
    out = defaultdict(list)
    for rec in records:
        out[rec[key]].append(rec)
    return out


def draw_bounds(ax, records, quantum=True):
    for kind, recs in group(records, "kind").items():
        if kind == "quantum_nfl" and not quantum:
            continue
        for r, pts in group(recs, "r").items():
            pts.sort(key=lambda p: int(p["t"]))
            label = f"{kind} (r={r})" if kind == "quantum_nfl" else kind
            ax.plot([int(p["t"]) for p in pts], [float(p["value"]) for p in pts], "--", lw=1, label=label)


def sweep(directory):
    directory = Path(directory)
    grid = rows(directory / "grid.csv")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for r, pts in sorted(group(grid, "r").items(), key=lambda kv: int(kv[0])):
        pts.sort(key=lambda p: int(p["t"]))
        ax.errorbar(
            [int(p["t"]) for p in pts],
            [float(p["mean_risk"]) for p in pts],
            yerr=[float(p["stderr"]) for p in pts],
            fmt="o",
            ms=3,
            label=f"r={r}",
        )
    draw_bounds(ax, rows(directory / "bounds.csv"), quantum=True)
    ax.set_xlabel("training pairs t")
    ax.set_ylabel("average risk")
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(directory / "risk.png", dpi=150)

    fig, ax = plt.subplots(figsize=(7, 4.5))
    for r, pts in sorted(group(grid, "r").items(), key=lambda kv: int(kv[0])):
        pts.sort(key=lambda p: int(p["t"]))
        ax.plot([int(p["t"]) for p in pts], [float(p["sample_std"]) for p in pts], "o-", ms=3, label=f"r={r}")
    ax.set_xlabel("training pairs t")
    ax.set_ylabel("risk standard deviation")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(directory / "fluctuations.png", dpi=150)


def thresholds(path):
    fig, ax = plt.subplots(figsize=(6, 4))
    for kind, pts in group(rows(path), "kind").items():
        pts.sort(key=lambda p: int(p["t"]))
        ax.plot([int(p["t"]) for p in pts], [float(p["threshold_real"]) for p in pts], "o-", ms=3, label=kind)
    ax.set_xlabel("training pairs t")
    ax.set_ylabel("Schmidt rank needed to beat the classical bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(Path(path).with_suffix(".png"), dpi=150)


def bounds(path):
    fig, ax = plt.subplots(figsize=(6, 4))
    draw_bounds(ax, rows(path))
    ax.set_xlabel("training pairs t")
    ax.set_ylabel("bound on average risk")
    ax.legend(fontsize=7)
    fig.tight_layout()
    fig.savefig(Path(path).with_suffix(".png"), dpi=150)


if __name__ == "__main__":
    if len(sys.argv) != 3 or sys.argv[1] not in ("sweep", "thresholds", "bounds"):
        sys.exit(__doc__)
    {"sweep": sweep, "thresholds": thresholds, "bounds": bounds}[sys.argv[1]](sys.argv[2])
