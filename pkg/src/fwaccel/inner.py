"""Inner solvers for the outer-loop subproblems, plus the two baselines.

Four routines produce certified approximate minimizers of the rescaled model
``Phi_t`` over the feasible set:

* ``afw_solve`` -- away-step Frank-Wolfe with an explicit active set
  (polytopes only).
* ``spfw_solve`` -- try one sparse projection first; if its gap check fails,
  fall back to plain FW or away-step FW iterations on ``Phi_t``.
* ``exact_projection_solver`` -- exact projection, for testing only.

``vanilla_fw_run`` and ``cgs_run`` are the standalone baselines.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .accel import RunTrace, TraceRow, inner_dual_gap, omega_gap
from .sets import CapabilityError, CountingSet

__all__ = [
    "InnerResult",
    "InnerSolverAbort",
    "afw_solve",
    "spfw_solve",
    "afw_solver",
    "spfw_solver",
    "exact_projection_solver",
    "recompute_certificate",
    "vanilla_fw_run",
    "cgs_run",
]

WEIGHT_TOL = 1e-12


class InnerSolverAbort(RuntimeError):
    """Inner solve exceeded its safety cap; carries the iteration count."""

    def __init__(self, message, iterations=0):
        super().__init__(message)
        self.iterations = iterations


@dataclass
class InnerResult:
    x: np.ndarray
    branch: str
    certificate: float
    inner_iterations: int
    loo_calls: int
    sparse_proj_calls: int = 0
    w: np.ndarray = None
    active_set: dict = field(default=None)
    drop_steps: int = 0


def _iteration_cap(n, nu):
    return int(10 * n * max(1.0, math.log(max(1.0 / nu, math.e))) + 1e4)


def _afw_loop(sub, cset, nu, w, active, cap, on_iterate=None):
    """Algorithm core: away-step FW on Phi_t until its Wolfe gap <= nu.

    ``active`` maps vertex keys to positive weights summing to one, with
    w equal to the weighted vertex sum.  Returns (w, active, iterations,
    drop_steps, certificate).  ``on_iterate(w, active, drops)`` is invoked
    after every completed step (diagnostics only).
    """
    curv = sub.curv
    drops = 0
    i = 0
    while True:
        i += 1
        if i > cap:
            raise InnerSolverAbort(
                f"away-step FW exceeded {cap} iterations (nu={nu:.3e})", i - 1)
        g = sub.grad_Phi(w)
        ukey = cset.loo_key(g)
        wg = float(np.vdot(w, g))
        u_score = cset.vertex_score(ukey, g)
        gap = wg - u_score
        if gap <= nu:
            return w, active, i, drops, gap

        zkey = max(active, key=lambda k: cset.vertex_score(k, g))
        z_score = cset.vertex_score(zkey, g)
        fw_desc = u_score - wg          # <u - w, g>
        away_desc = wg - z_score        # <w - z, g>
        if len(active) == 1 or fw_desc < away_desc:
            # Frank-Wolfe direction
            u = cset.vertex(ukey)
            s = u - w
            gamma_max = 1.0
            slope = fw_desc
        else:
            z = cset.vertex(zkey)
            s = w - z
            rho = active[zkey]
            gamma_max = rho / (1.0 - rho)
            slope = away_desc
        ss = float(np.vdot(s, s))
        if curv * ss <= 1e-14 * ss or ss == 0.0:
            gamma = gamma_max if slope < 0 else 0.0
        else:
            gamma = min(max(-slope / (curv * ss), 0.0), gamma_max)

        if gamma_max == 1.0:
            if gamma >= 1.0:
                active = {ukey: 1.0}
                w = cset.vertex(ukey)
            else:
                for k in list(active):
                    active[k] *= (1.0 - gamma)
                active[ukey] = active.get(ukey, 0.0) + gamma
                w = w + gamma * s
        else:
            scale = 1.0 + gamma
            for k in list(active):
                active[k] *= scale
            active[zkey] -= gamma  # rho_z' = (1+gamma)*rho_z - gamma
            if gamma >= gamma_max:
                del active[zkey]
                drops += 1
            w = w + gamma * s

        # prune numerical dust and renormalize
        dead = [k for k, v in active.items() if v <= WEIGHT_TOL]
        for k in dead:
            del active[k]
        total = sum(active.values())
        if abs(total - 1.0) > 1e-13:
            inv = 1.0 / total
            for k in active:
                active[k] *= inv

        if on_iterate is not None:
            on_iterate(w, active, drops)


def _fw_loop(sub, cset, nu, w, cap):
    """Plain FW with exact line search on Phi_t until its Wolfe gap <= nu."""
    curv = sub.curv
    i = 0
    while True:
        i += 1
        if i > cap:
            raise InnerSolverAbort(
                f"FW loop exceeded {cap} iterations (nu={nu:.3e})", i - 1)
        g = sub.grad_Phi(w)
        u = cset.loo(g)
        s = u - w
        gap = -float(np.vdot(s, g))
        if gap <= nu:
            return w, i, gap
        ss = float(np.vdot(s, s))
        if curv * ss <= 1e-14 * ss or ss == 0.0:
            gamma = 1.0
        else:
            gamma = min(max(gap / (curv * ss), 0.0), 1.0)
        w = w + gamma * s


def afw_solve(sub, cset, nu, cap=None, on_iterate=None):
    """Away-step FW solve of the iteration-t subproblem (Algorithm for polytopes).

    Initializes from the vertex minimizing ``<., grad_Phi(x_prev)>`` (fresh
    start every call; this is what restricts the run to the optimal face once
    identification kicks in).
    """
    if not getattr(cset, "is_polytope", False):
        raise CapabilityError("away-step FW requires a polytope domain")
    loo_before = cset.loo_calls if isinstance(cset, CountingSet) else None
    key = cset.loo_key(sub.grad_Phi(sub.x_prev))
    w = cset.vertex(key)
    active = {key: 1.0}
    if cap is None:
        cap = _iteration_cap(w.size, nu)
    w, iters, drops, cert, active = _run_afw(sub, cset, nu, w, active, cap,
                                              on_iterate)
    loo_used = (cset.loo_calls - loo_before) if loo_before is not None else iters + 1
    return InnerResult(x=sub.mix(w), branch="afw-loop", certificate=cert,
                       inner_iterations=iters, loo_calls=loo_used, w=w,
                       active_set=active, drop_steps=drops)


def _run_afw(sub, cset, nu, w, active, cap, on_iterate=None):
    w, active, iters, drops, cert = _afw_loop(sub, cset, nu, w, active, cap,
                                              on_iterate)
    return w, iters, drops, cert, active


def spfw_solve(sub, cset, nu, r_hat, loop_kind="FW", cap=None):
    """Sparse-projection-first solve of the iteration-t subproblem.

    Step 1 sparse-projects the unconstrained minimizer of ``phi_t``; a single
    LOO call checks the printed acceptance inner product against ``nu``.  On
    failure the Phi_t loop runs, warm-started at the sparse projection.
    """
    beta = sub.beta
    p = sub.y_prev - sub.grad_snapshot / beta
    x = cset.sparse_project(p, r_hat)
    d = x - p  # = grad_phi(x) / beta
    u = cset.loo(d)
    check = float(np.vdot(x - u, d))
    if check <= nu:
        return InnerResult(x=x, branch="sparse-projection-hit", certificate=check,
                           inner_iterations=0, loo_calls=1, sparse_proj_calls=1)

    if cap is None:
        cap = _iteration_cap(x.size, nu)
    if loop_kind == "AFW":
        if not getattr(cset, "is_polytope", False):
            raise CapabilityError("AFW loop requires a polytope domain")
        active = cset.decompose(x)
        w, iters, drops, cert, active = _run_afw(sub, cset, nu, x.copy(), active, cap)
        return InnerResult(x=sub.mix(w), branch="afw-loop", certificate=cert,
                           inner_iterations=iters, loo_calls=1 + iters,
                           sparse_proj_calls=1, w=w, active_set=active,
                           drop_steps=drops)
    elif loop_kind == "FW":
        w, iters, cert = _fw_loop(sub, cset, nu, x.copy(), cap)
        return InnerResult(x=sub.mix(w), branch="fw-loop", certificate=cert,
                           inner_iterations=iters, loo_calls=1 + iters,
                           sparse_proj_calls=1, w=w)
    raise ValueError(f"unknown loop kind {loop_kind!r}")


def afw_solver():
    """Inner-solver adapter for the outer loop."""
    def solve(sub, cset, nu):
        return afw_solve(sub, cset, nu)
    return solve


def spfw_solver(r_hat, loop_kind="FW"):
    def solve(sub, cset, nu):
        return spfw_solve(sub, cset, nu, r_hat, loop_kind=loop_kind)
    return solve


def exact_projection_solver():
    """Exact minimizer of phi_t via Euclidean projection (testing only)."""
    def solve(sub, cset, nu):
        p = sub.y_prev - sub.grad_snapshot / sub.beta
        x = cset.base.project(p) if isinstance(cset, CountingSet) else cset.project(p)
        fset = cset.base if isinstance(cset, CountingSet) else cset
        cert = omega_gap(sub, x, fset)
        return InnerResult(x=x, branch="exact-projection", certificate=cert,
                           inner_iterations=0, loo_calls=0)
    return solve


def recompute_certificate(sub, fset, result):
    """Recompute a result's stopping quantity with a fresh, uncounted LOO call."""
    if result.branch == "sparse-projection-hit":
        p = sub.y_prev - sub.grad_snapshot / sub.beta
        d = result.x - p
        u = fset.loo(d)
        return float(np.vdot(result.x - u, d))
    if result.branch in ("afw-loop", "fw-loop"):
        return inner_dual_gap(sub, result.w, fset)
    if result.branch == "exact-projection":
        return omega_gap(sub, result.x, fset)
    raise ValueError(f"unknown branch {result.branch!r}")


def vanilla_fw_run(obj, fset, T, x0, f_star=None, seed=0, meta=None):
    """Standard Frank-Wolfe with exact line search: one FO and one LOO per step."""
    import time
    x = np.array(x0, dtype=float)
    counting = CountingSet(fset)
    trace = RunTrace(algorithm="fw", seed=seed, meta=dict(meta or {}))
    t0 = time.perf_counter_ns()
    for t in range(1, T + 1):
        g = obj.gradient(x)
        u = counting.loo(g)
        s = u - x
        gap = -float(np.vdot(s, g))
        gamma = obj.line_search(x, s, 1.0)
        x = x + gamma * s
        fx = obj.value(x)
        err = fx - f_star if f_star is not None else fx
        d = gamma * s
        trace.rows.append(TraceRow(
            outer_iter=t, error=float(err), fo=t, loo=counting.loo_calls,
            sparse_proj=0, loo_equiv=counting.loo_calls, inner_iters=1,
            branch="fw", certificate=gap, cert_recomputed=gap, omega=np.nan,
            nu=np.nan, dist_half_sq=0.5 * float(np.vdot(d, d)),
            wall_ns=time.perf_counter_ns() - t0))
    return trace


def cgs_run(obj, fset, N, x0, f_star=None, seed=0, meta=None, cap_scale=100.0):
    """Conditional gradient sliding baseline (smooth convex parameter choices).

    Outer iteration k uses the accelerated three-point scheme with
    gamma_k = 3/(k+2); each prox subproblem
    min <g, u> + (beta_k/2)||u - x_{k-1}||^2 with beta_k = 3*beta/(k+1)
    is solved by conditional gradient steps to Wolfe-gap tolerance
    eta_k = beta*D^2/(N*k).  FO calls: one per outer iteration; LOO calls:
    all conditional-gradient steps.
    """
    import time
    beta = obj.beta
    D = fset.diameter
    x = np.array(x0, dtype=float)
    y = x.copy()
    counting = CountingSet(fset)
    trace = RunTrace(algorithm="cgs", seed=seed, meta=dict(meta or {}))
    t0 = time.perf_counter_ns()
    for k in range(1, N + 1):
        gamma_k = 3.0 / (k + 2.0)
        beta_k = 3.0 * beta / (k + 1.0)
        eta_k = beta * D * D / (N * k) if D > 0 else np.inf
        z = (1.0 - gamma_k) * y + gamma_k * x
        g = obj.gradient(z)
        x_center = x
        u = x.copy()
        cap = int(cap_scale * beta_k * D * D / eta_k + 1e3) if D > 0 else 1
        it = 0
        gap = 0.0
        while True:
            it += 1
            if it > cap:
                trace.aborted = True
                trace.abort_reason = f"iteration {k}: sliding loop exceeded {cap}"
                return trace
            gs = g + beta_k * (u - x_center)
            v = counting.loo(gs)
            s = v - u
            gap = -float(np.vdot(s, gs))
            if gap <= eta_k:
                break
            ss = float(np.vdot(s, s))
            alpha = 1.0 if ss == 0.0 else min(max(gap / (beta_k * ss), 0.0), 1.0)
            u = u + alpha * s
        x = u
        y_new = (1.0 - gamma_k) * y + gamma_k * x
        d = y_new - y
        y = y_new
        fy = obj.value(y)
        err = fy - f_star if f_star is not None else fy
        trace.rows.append(TraceRow(
            outer_iter=k, error=float(err), fo=k, loo=counting.loo_calls,
            sparse_proj=0, loo_equiv=counting.loo_calls, inner_iters=it,
            branch="cgs", certificate=gap, cert_recomputed=gap, omega=np.nan,
            nu=eta_k, dist_half_sq=0.5 * float(np.vdot(d, d)),
            wall_ns=time.perf_counter_ns() - t0))
    return trace
