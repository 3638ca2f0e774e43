//! Emitted plot scripts.
//!
//! Plots are never rendered here: each command ships raw CSV plus a small
//! Python script that rebuilds the log-log figures from the CSV columns
//! alone, keeping the binary headless and the outputs diff-able.

/// Script regenerating the scaling figures from `regime.csv` (and
/// `memorizer.csv` when present).
pub fn scaling_script() -> String {
    r#"#!/usr/bin/env python3
"""Rebuild scaling figures from the CSV files next to this script."""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    with open(os.path.join(here, name), newline="") as fh:
        rows = list(csv.DictReader(fh))
    return rows


def column(rows, name):
    out = []
    for row in rows:
        cell = row.get(name, "")
        out.append(float(cell) if cell not in ("", None) else float("nan"))
    return out


rows = read_csv("regime.csv")
fig, ax = plt.subplots(figsize=(6, 4.5))
t = column(rows, "t")
for name, label in [("bound_t", "data branch"), ("bound_n", "parameter branch"), ("bound", "max")]:
    ys = column(rows, name)
    pairs = [(x, y) for x, y in zip(t, ys) if y == y and y > 0]
    if pairs:
        ax.loglog([p[0] for p in pairs], [p[1] for p in pairs], marker="o", label=label)
ax.set_xlabel("training tokens t")
ax.set_ylabel("excess cross-entropy lower bound (bits/token)")
ax.legend()
ax.grid(True, which="both", alpha=0.3)
fig.tight_layout()
fig.savefig(os.path.join(here, "regime.png"), dpi=150)

if os.path.exists(os.path.join(here, "memorizer.csv")):
    rows = read_csv("memorizer.csv")
    fig, ax = plt.subplots(figsize=(6, 4.5))
    t = column(rows, "t")
    mean = column(rows, "excess_mean")
    err = column(rows, "excess_stderr")
    exact = column(rows, "exact_expectation")
    ax.errorbar(t, mean, yerr=[3 * e for e in err], fmt="o", label="memorizer excess (3 sigma)")
    ax.loglog(t, exact, "-", label="exact expectation")
    ax.set_xscale("log")
    ax.set_yscale("log")
    ax.set_xlabel("training tokens t")
    ax.set_ylabel("excess cross entropy (bits/token)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "memorizer.png"), dpi=150)

print("wrote figures next to the CSV inputs")
"#
    .to_string()
}

/// Script plotting an occupancy curve CSV (exact `occupancy.csv` or the
/// simulated `vocabulary.csv`).
pub fn occupancy_script() -> String {
    r#"#!/usr/bin/env python3
"""Rebuild occupancy figures from the CSV files next to this script."""
import csv
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    with open(os.path.join(here, name), newline="") as fh:
        return list(csv.DictReader(fh))


fig, ax = plt.subplots(figsize=(6, 4.5))
plotted = False
if os.path.exists(os.path.join(here, "occupancy.csv")):
    rows = read_csv("occupancy.csv")
    t = [float(r["t"]) for r in rows if float(r["t"]) > 0]
    v = [float(r["V"]) for r in rows if float(r["t"]) > 0]
    ax.loglog(t, v, "-o", label="exact V(t)")
    plotted = True
if os.path.exists(os.path.join(here, "vocabulary.csv")):
    rows = read_csv("vocabulary.csv")
    t = [float(r["t"]) for r in rows]
    v = [float(r["value"]) for r in rows]
    e = [3 * float(r["stderr"]) for r in rows]
    ax.errorbar(t, v, yerr=e, fmt="s", label="simulated V(t) (3 sigma)")
    ax.set_xscale("log")
    ax.set_yscale("log")
    plotted = True
if plotted:
    ax.set_xlabel("tokens t")
    ax.set_ylabel("distinct types V(t)")
    ax.legend()
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    fig.savefig(os.path.join(here, "occupancy.png"), dpi=150)
    print("wrote occupancy.png")
else:
    print("no occupancy.csv or vocabulary.csv found")
"#
    .to_string()
}
