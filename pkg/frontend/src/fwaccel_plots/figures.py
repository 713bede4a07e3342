"""Build the three benchmark figure grids from harness trace CSVs.

Input: a results directory of ``trace_r{r}_delta{d}.csv`` files following the
harness schema (one row per outer iteration per run).  Output: multi-panel
matplotlib figures -- one panel per (r, delta) cell, one seed-averaged curve
per algorithm, log-scale error axis.

The error-vs-LOO aggregation mirrors the harness convention: each run is a
right-continuous step function of its cumulative LOO-equivalent count,
sampled on a shared geometric budget grid and averaged pointwise.
"""

import glob
import os
import re
import warnings
from dataclasses import dataclass, field

import matplotlib
import numpy as np
import pandas as pd

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

__all__ = [
    "CSV_COLUMNS",
    "FigureSpec",
    "GRIDS",
    "discover_cells",
    "load_cell",
    "mean_iteration_curve",
    "mean_loo_curve",
    "sample_step",
    "build_figure",
    "render_figures",
]

CSV_COLUMNS = [
    "algorithm", "seed", "n", "r", "delta", "beta", "r_hat",
    "outer_iter", "error", "fo_calls", "loo_calls", "sparse_proj_calls",
    "loo_equiv_calls", "inner_iters", "branch", "certificate",
    "cert_recomputed", "omega", "nu", "dist_half_sq",
]

_NUMERIC = ["seed", "n", "r", "delta", "beta", "r_hat", "outer_iter", "error",
            "fo_calls", "loo_calls", "sparse_proj_calls", "loo_equiv_calls",
            "inner_iters"]

GRIDS = ("outer-axis", "loo-axis", "loo-axis-subset")

_FILE_RE = re.compile(r"trace_r(\d+)_delta([0-9.eE+-]+)\.csv$")

SUBSET_R = (10, 20, 40)
SUBSET_DELTA = 1.0
SUBSET_ALGOS = ("afista-afw", "cgs")


@dataclass
class FigureSpec:
    """What to render: input directory, which grid(s), output paths."""

    results_dir: str
    grids: tuple = GRIDS
    out_dir: str = "figures"
    fmt: str = "png"
    log_y: bool = True
    out_paths: dict = field(default_factory=dict)

    def __post_init__(self):
        for grid in self.grids:
            if grid not in GRIDS:
                raise ValueError(f"unknown grid {grid!r}; choose from {GRIDS}")

    def path_for(self, grid):
        if grid in self.out_paths:
            return self.out_paths[grid]
        return os.path.join(self.out_dir, f"{grid}.{self.fmt}")


def load_cell(path):
    """Load one trace CSV, validating the schema.  Malformed input is a
    hard error naming the file."""
    try:
        df = pd.read_csv(path, dtype=str)
    except Exception as exc:
        raise ValueError(f"malformed trace CSV {path}: {exc}") from exc
    if list(df.columns) != CSV_COLUMNS:
        raise ValueError(
            f"malformed trace CSV {path}: header {list(df.columns)!r} does "
            f"not match the harness schema")
    try:
        for col in _NUMERIC:
            df[col] = pd.to_numeric(df[col])
    except (ValueError, TypeError) as exc:
        raise ValueError(f"malformed trace CSV {path}: column {col!r} is not "
                         f"numeric: {exc}") from exc
    if df[_NUMERIC].isna().any().any():
        raise ValueError(f"malformed trace CSV {path}: missing numeric values")
    return df


def discover_cells(results_dir):
    """Map (r, delta) -> CSV path for every trace file in the directory."""
    cells = {}
    for path in sorted(glob.glob(os.path.join(results_dir, "trace_r*_delta*.csv"))):
        m = _FILE_RE.search(os.path.basename(path))
        if m:
            cells[(int(m.group(1)), float(m.group(2)))] = path
    if not cells:
        raise ValueError(f"no trace CSVs found in {results_dir}")
    return cells


def mean_iteration_curve(df, algorithm):
    """Seed-averaged error vs. outer iteration for one algorithm."""
    sub = df[df["algorithm"] == algorithm]
    if sub.empty:
        return None
    horizons = sub.groupby("seed")["outer_iter"].max()
    if horizons.nunique() != 1:
        raise ValueError(f"algorithm {algorithm!r}: seeds have mismatched "
                         f"horizons {sorted(horizons.unique())}")
    mean = sub.groupby("outer_iter")["error"].mean()
    return mean.index.to_numpy(dtype=float), mean.to_numpy(dtype=float)


def sample_step(xs, ys, grid):
    """Right-continuous step function through (xs, ys), sampled on grid."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    idx = np.searchsorted(xs, grid, side="right") - 1
    idx = np.clip(idx, 0, len(xs) - 1)
    return ys[idx]


def mean_loo_curve(df, algorithm, n_points=200):
    """Seed-averaged error vs. cumulative LOO-equivalent calls."""
    sub = df[df["algorithm"] == algorithm]
    if sub.empty:
        return None
    runs = [g.sort_values("outer_iter") for _, g in sub.groupby("seed")]
    lo = max(min(g["loo_equiv_calls"].iloc[0] for g in runs), 1)
    hi = max(g["loo_equiv_calls"].iloc[-1] for g in runs)
    grid = np.unique(np.geomspace(lo, max(hi, lo + 1), n_points))
    sampled = [sample_step(g["loo_equiv_calls"], g["error"], grid)
               for g in runs]
    return grid, np.mean(sampled, axis=0)


def _algorithms(df):
    order = ["afista-afw", "afista-sp-afw", "afista-sp-fw", "afista-exact",
             "cgs", "fw"]
    present = list(df["algorithm"].unique())
    return [a for a in order if a in present] + \
        [a for a in present if a not in order]


def _panel(ax, df, grid, algorithms, log_y):
    for algo in algorithms:
        curve = (mean_iteration_curve(df, algo) if grid == "outer-axis"
                 else mean_loo_curve(df, algo))
        if curve is None:
            continue
        ax.plot(curve[0], curve[1], label=algo)
    if log_y:
        ax.set_yscale("log")
    if grid != "outer-axis":
        ax.set_xscale("log")


def build_figure(spec, grid):
    """Assemble one panel grid; returns (figure, list of plotted cells)."""
    cells = discover_cells(spec.results_dir)
    if grid == "loo-axis-subset":
        wanted = [(r, SUBSET_DELTA) for r in SUBSET_R]
        r_values, delta_values = list(SUBSET_R), [SUBSET_DELTA]
        nrows, ncols = 1, len(wanted)
    else:
        r_values = sorted({r for r, _ in cells})
        delta_values = sorted({d for _, d in cells})
        wanted = [(r, d) for r in r_values for d in delta_values]
        nrows, ncols = len(r_values), len(delta_values)

    fig, axes = plt.subplots(nrows, ncols, squeeze=False,
                             figsize=(4.0 * ncols, 3.0 * nrows))
    plotted = []
    for i, (r, delta) in enumerate(wanted):
        ax = axes[i // ncols][i % ncols]
        ax.set_title(f"r={r}, delta={delta:g}")
        if (r, delta) not in cells:
            warnings.warn(f"missing trace CSV for cell r={r} delta={delta:g}; "
                          f"panel skipped")
            ax.set_axis_off()
            continue
        df = load_cell(cells[(r, delta)])
        algorithms = (list(SUBSET_ALGOS) if grid == "loo-axis-subset"
                      else _algorithms(df))
        _panel(ax, df, grid, algorithms, spec.log_y)
        xlabel = ("outer iteration" if grid == "outer-axis"
                  else "LOO-equivalent calls")
        ax.set_xlabel(xlabel)
        ax.set_ylabel("error")
        ax.legend(fontsize="small")
        plotted.append((r, delta))
    fig.tight_layout()
    return fig, plotted


def render_figures(spec):
    """Render every requested grid; returns the written image paths."""
    paths = []
    for grid in spec.grids:
        fig, _ = build_figure(spec, grid)
        path = spec.path_for(grid)
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        fig.savefig(path, dpi=150)
        plt.close(fig)
        paths.append(path)
    return paths
