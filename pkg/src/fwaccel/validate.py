"""Self-contained invariant checks, runnable from the command line.

Each check is deterministic (fixed seeds) and returns (name, passed, detail).
These are quick smoke-level versions of the full test suite.
"""

import itertools
import tempfile

import numpy as np

from .accel import Schedule, afista_run, lambda_of, nu_of, omega_gap
from .harness import ExperimentConfig, emit_csv, run_experiment
from .inner import afw_solve, afw_solver, exact_projection_solver, spfw_solver
from .objective import generate_instance
from .sets import L1Ball, Simplex, Spectrahedron

__all__ = ["run_all", "CHECKS"]


def check_loo_minimality():
    rng = np.random.default_rng(7)
    worst = 0.0
    for n in (2, 4, 6):
        fset = Simplex(n)
        eye = np.eye(n)
        for _ in range(200):
            g = rng.standard_normal(n)
            u = fset.loo(g)
            worst = max(worst, float(u @ g) - float((eye @ g).min()))
    return worst <= 1e-10, f"max excess {worst:.2e}"


def check_sparse_matches_exact_at_max():
    rng = np.random.default_rng(11)
    worst = 0.0
    for _ in range(100):
        n = 6
        x = rng.standard_normal(n)
        fset = Simplex(n)
        worst = max(worst, float(np.linalg.norm(
            fset.sparse_project(x, n - 1) - fset.project(x))))
        X = rng.standard_normal((4, 4))
        X = 0.5 * (X + X.T)
        sp = Spectrahedron(4)
        worst = max(worst, float(np.linalg.norm(
            sp.sparse_project(X, 4) - sp.project(X))))
    return worst <= 1e-9, f"max deviation {worst:.2e}"


def check_projection_nonexpansive():
    rng = np.random.default_rng(13)
    worst = 0.0
    for fset, shape in ((Simplex(8), (8,)), (L1Ball(8), (8,)),
                        (Spectrahedron(4), (4, 4))):
        for _ in range(100):
            x = rng.standard_normal(shape)
            y = rng.standard_normal(shape)
            px, py = fset.project(x), fset.project(y)
            worst = max(worst, float(np.linalg.norm(px - py)
                                     - np.linalg.norm(x - y)))
            worst = max(worst, float(np.linalg.norm(fset.project(px) - px)))
    return worst <= 1e-9, f"max violation {worst:.2e}"


def check_generator():
    a = generate_instance(30, 5, 0.5, 10.0, seed=3)
    b = generate_instance(30, 5, 0.5, 10.0, seed=3)
    if not (np.array_equal(a.A, b.A) and np.array_equal(a.b, b.b)
            and np.array_equal(a.x_star, b.x_star)):
        return False, "generator not deterministic"
    g = a.A @ a.x_star + a.b
    on = np.max(np.abs(g[a.support]))
    off = np.min(np.delete(g, a.support))
    ok = on <= 1e-9 and abs(off - 0.5) <= 1e-9
    return ok, f"|grad| on support {on:.2e}, off-support min {off:.6f}"


def check_schedule():
    sched = Schedule(T=50, beta=2.0, D0=1.0)
    lams = [lambda_of(t) for t in range(1, 51)]
    nus = [nu_of(t, sched) for t in range(1, 51)]
    ok = (all(b > a for a, b in itertools.pairwise(lams))
          and lams[0] == 1.0
          and all(b <= a for a, b in itertools.pairwise(nus))
          and all(v > 0 for v in nus))
    return ok, "lambda increasing, nu positive nonincreasing"


def _small_run(solver, r_hat=0):
    inst = generate_instance(20, 3, 1.0, 10.0, seed=5)
    fset = Simplex(20)
    sched = Schedule(T=40, beta=inst.beta, D0=fset.diameter)
    x0 = np.full(20, 1.0 / 20)
    return inst, afista_run(inst.objective(), fset, solver, sched, x0,
                            f_star=inst.f_star, r_hat=r_hat)


def check_certificates():
    worst = -np.inf
    for solver, rh in ((afw_solver(), 0), (spfw_solver(3, "AFW"), 3),
                       (spfw_solver(3, "FW"), 3), (exact_projection_solver(), 0)):
        _, trace = _small_run(solver, r_hat=rh)
        for row in trace.rows:
            worst = max(worst, row.cert_recomputed - row.nu)
    return worst <= 1e-9, f"max recomputed certificate excess {worst:.2e}"


def check_envelope():
    ok = True
    detail = []
    for solver, rh in ((afw_solver(), 0), (exact_projection_solver(), 0)):
        inst, trace = _small_run(solver, r_hat=rh)
        D0 = Simplex(20).diameter
        for row in trace.rows:
            if row.outer_iter < 2:
                continue
            lam = lambda_of(row.outer_iter)
            if row.error > 1.5 * inst.beta * D0 ** 2 / lam ** 2 + 1e-9:
                ok = False
                detail.append(f"h bound broken at t={row.outer_iter}")
            if row.dist_half_sq > 4.0 * D0 ** 2 / lam ** 2 + 1e-9:
                ok = False
                detail.append(f"d bound broken at t={row.outer_iter}")
    return ok, "; ".join(detail) or "h_t and d_t inside the schedule envelope"


def check_counters():
    _, trace = _small_run(spfw_solver(3, "AFW"), r_hat=3)
    ok = all(row.fo == row.outer_iter for row in trace.rows)
    ok = ok and all(row.loo_equiv == row.loo + 3 * row.sparse_proj
                    for row in trace.rows)
    return ok, "FO = t and LOO-equivalents = LOO + r_hat * sparse_proj"


def check_determinism():
    config = ExperimentConfig(n=15, r_values=(3,), delta_values=(1.0,),
                              beta=10.0, T=10, seeds=(0, 1),
                              algorithms=("afista-afw", "fw"))
    outputs = []
    for _ in range(2):
        with tempfile.TemporaryDirectory() as tmp:
            paths = emit_csv(run_experiment(config), tmp)
            outputs.append([open(p, "rb").read() for p in paths])
    return outputs[0] == outputs[1], "double run produces byte-identical CSVs"


CHECKS = [
    ("loo-minimality", check_loo_minimality),
    ("sparse-project-max-r-equals-exact", check_sparse_matches_exact_at_max),
    ("projection-idempotent-nonexpansive", check_projection_nonexpansive),
    ("instance-generator", check_generator),
    ("schedules", check_schedule),
    ("certificate-soundness", check_certificates),
    ("convergence-envelope", check_envelope),
    ("call-accounting", check_counters),
    ("determinism", check_determinism),
]


def run_all(log=print):
    """Run every check; returns True when all pass."""
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok = all_ok and ok
        if log:
            log(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    return all_ok
