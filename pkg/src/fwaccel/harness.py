"""Experiment orchestration: parameter grids, call accounting, CSV emission.

One sparse projection of sparsity ``r_hat`` is accounted as ``r_hat`` LOO
calls; the ``loo_equiv_calls`` column carries that convention so error
curves can be compared on a common oracle budget.
"""

import csv
import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .accel import RunTrace, Schedule, TraceRow, afista_run
from .inner import afw_solver, cgs_run, exact_projection_solver, spfw_solver, vanilla_fw_run
from .objective import generate_instance
from .sets import Simplex

__all__ = [
    "ExperimentConfig",
    "ALGORITHMS",
    "run_algorithm",
    "run_cell",
    "run_experiment",
    "emit_csv",
    "write_manifest",
    "aggregate_runs",
    "sample_step",
    "loo_axis_average",
    "CSV_COLUMNS",
]

ALGORITHMS = ("afista-afw", "afista-sp-afw", "afista-sp-fw", "afista-exact",
              "cgs", "fw")

DEFAULT_R_VALUES = (10, 20, 40, 80)
DEFAULT_DELTA_VALUES = (0.0, 0.1, 1.0)


@dataclass
class ExperimentConfig:
    n: int = 200
    r_values: tuple = DEFAULT_R_VALUES
    delta_values: tuple = DEFAULT_DELTA_VALUES
    beta: float = 100.0
    T: int = 2000
    seeds: tuple = tuple(range(10))
    algorithms: tuple = ("afista-afw", "afista-sp-afw", "afista-sp-fw", "cgs", "fw")
    r_hat: object = "equal-to-r"  # int, or "equal-to-r"
    workers: int = 1

    def __post_init__(self):
        if self.n < 1 or self.T < 2 or self.beta <= 0:
            raise ValueError("n, T, beta must be positive (T >= 2)")
        if not self.algorithms:
            raise ValueError("at least one algorithm required")
        for algo in self.algorithms:
            if algo not in ALGORITHMS:
                raise ValueError(f"unknown algorithm {algo!r}")
        if not all(1 <= r <= self.n for r in self.r_values):
            raise ValueError("r values must lie in [1, n]")
        if any(d < 0 for d in self.delta_values):
            raise ValueError("delta values must be nonnegative")

    def resolve_r_hat(self, r):
        return r if self.r_hat == "equal-to-r" else int(self.r_hat)


def run_algorithm(algo, instance, T, x0=None, r_hat=None):
    """Run one algorithm on one instance from the simplex barycenter."""
    fset = Simplex(instance.n)
    obj = instance.objective()
    if x0 is None:
        x0 = np.full(instance.n, 1.0 / instance.n)
    meta = {"n": instance.n, "r": instance.r, "delta": instance.delta,
            "beta": instance.beta}
    if algo == "fw":
        return vanilla_fw_run(obj, fset, T, x0, f_star=instance.f_star,
                              seed=instance.seed, meta=meta)
    if algo == "cgs":
        return cgs_run(obj, fset, T, x0, f_star=instance.f_star,
                       seed=instance.seed, meta=meta)
    schedule = Schedule(T=T, beta=instance.beta, D0=fset.diameter)
    if algo == "afista-afw":
        solver, rh = afw_solver(), 0
    elif algo == "afista-sp-afw":
        rh = instance.r if r_hat is None else r_hat
        solver = spfw_solver(rh, loop_kind="AFW")
    elif algo == "afista-sp-fw":
        rh = instance.r if r_hat is None else r_hat
        solver = spfw_solver(rh, loop_kind="FW")
    elif algo == "afista-exact":
        solver, rh = exact_projection_solver(), 0
    else:
        raise ValueError(f"unknown algorithm {algo!r}")
    return afista_run(obj, fset, solver, schedule, x0, f_star=instance.f_star,
                      algorithm=algo, seed=instance.seed, meta=meta, r_hat=rh)


def run_cell(args):
    """Run all configured algorithms on one (r, delta, seed) instance."""
    config, r, delta, seed = args
    instance = generate_instance(config.n, r, delta, config.beta, seed)
    r_hat = config.resolve_r_hat(r)
    return [run_algorithm(algo, instance, config.T, r_hat=r_hat)
            for algo in config.algorithms]


def run_experiment(config, log=None):
    """Run the full grid; deterministic given the config.

    Solver aborts are recorded on the affected trace; the experiment
    continues.
    """
    tasks = [(config, r, delta, seed)
             for r in config.r_values
             for delta in config.delta_values
             for seed in config.seeds]
    traces = []
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            for batch in pool.map(run_cell, tasks):
                traces.extend(batch)
                if log:
                    for tr in batch:
                        log(_describe(tr))
    else:
        for task in tasks:
            for tr in run_cell(task):
                traces.append(tr)
                if log:
                    log(_describe(tr))
    traces.sort(key=lambda tr: (tr.meta.get("r", 0), tr.meta.get("delta", 0.0),
                                tr.seed, tr.algorithm))
    return traces


def _describe(tr):
    status = "aborted" if tr.aborted else f"final_error={tr.final_error():.3e}"
    return (f"{tr.algorithm} r={tr.meta.get('r')} delta={tr.meta.get('delta')} "
            f"seed={tr.seed}: {status}")


CSV_COLUMNS = [
    "algorithm", "seed", "n", "r", "delta", "beta", "r_hat",
    "outer_iter", "error", "fo_calls", "loo_calls", "sparse_proj_calls",
    "loo_equiv_calls", "inner_iters", "branch", "certificate",
    "cert_recomputed", "omega", "nu", "dist_half_sq",
]


def _fmt(x):
    if isinstance(x, float):
        return f"{x:.17g}"
    return str(x)


def emit_csv(traces, out_dir):
    """Write one CSV per (r, delta) cell; UTF-8, LF, 17 significant digits.

    Wall-clock is deliberately not emitted: CSVs must be byte-identical
    across reruns of the same config.
    """
    os.makedirs(out_dir, exist_ok=True)
    cells = {}
    for tr in traces:
        key = (tr.meta.get("r"), tr.meta.get("delta"))
        cells.setdefault(key, []).append(tr)
    paths = []
    for (r, delta), cell in sorted(cells.items(), key=lambda kv: (kv[0][0] or 0,
                                                                  kv[0][1] or 0.0)):
        path = os.path.join(out_dir, f"trace_r{r}_delta{delta:g}.csv")
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(CSV_COLUMNS)
                for tr in cell:
                    m = tr.meta
                    for row in tr.rows:
                        writer.writerow([
                            tr.algorithm, tr.seed, m.get("n"), m.get("r"),
                            _fmt(float(m.get("delta", 0.0))),
                            _fmt(float(m.get("beta", 0.0))), tr.r_hat,
                            row.outer_iter, _fmt(row.error), row.fo, row.loo,
                            row.sparse_proj, row.loo_equiv, row.inner_iters,
                            row.branch, _fmt(row.certificate),
                            _fmt(row.cert_recomputed), _fmt(row.omega),
                            _fmt(row.nu), _fmt(row.dist_half_sq),
                        ])
        except OSError as exc:
            raise OSError(f"failed writing trace CSV at {path}: {exc}") from exc
        paths.append(path)
    return paths


def write_manifest(config, out_dir, extra=None):
    payload = {
        "config": dataclasses.asdict(config),
        "library_version": __version__,
        **(extra or {}),
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True, default=list)
        fh.write("\n")
    return path


def aggregate_runs(traces):
    """Arithmetic mean of the error curve across seeds (shared T required)."""
    if not traces:
        raise ValueError("no traces to aggregate")
    T = traces[0].T
    if any(tr.T != T for tr in traces):
        raise ValueError("traces have mismatched horizons")
    errs = np.stack([tr.errors() for tr in traces])
    return np.arange(1, T + 1), errs.mean(axis=0)


def sample_step(xs, ys, grid):
    """Sample the right-continuous step function through (xs, ys) on a grid.

    Holds the first value before the first breakpoint and the last value
    after the last one.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    idx = np.searchsorted(xs, grid, side="right") - 1
    idx = np.clip(idx, 0, len(xs) - 1)
    return ys[idx]


def loo_axis_average(traces, n_points=200):
    """Seed-average of error vs. cumulative LOO-equivalent budget.

    Each run's step function is sampled on a shared geometric budget grid and
    averaged pointwise.
    """
    if not traces:
        raise ValueError("no traces to aggregate")
    lo = min(tr.rows[0].loo_equiv for tr in traces)
    hi = max(tr.rows[-1].loo_equiv for tr in traces)
    lo = max(lo, 1)
    grid = np.unique(np.geomspace(lo, max(hi, lo + 1), n_points))
    sampled = [sample_step([row.loo_equiv for row in tr.rows],
                           [row.error for row in tr.rows], grid)
               for tr in traces]
    return grid, np.mean(sampled, axis=0)
