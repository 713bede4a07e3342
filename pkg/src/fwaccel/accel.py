"""Accelerated outer loop with inexact subproblem solves.

The outer loop is a momentum (FISTA-style) scheme whose per-iteration
subproblem -- minimizing the quadratic model ``phi_t`` over the feasible set
-- is only solved approximately.  Acceptance of an iterate is certified by the
gap function ``omega_t``; equivalently (and how the inner solvers actually
work) by the Wolfe gap of the rescaled model ``Phi_t``.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from .sets import CountingSet

__all__ = [
    "Schedule",
    "lambda_of",
    "nu_of",
    "y_update",
    "horizon_for_accuracy",
    "InnerSubproblem",
    "omega_gap",
    "inner_dual_gap",
    "TraceRow",
    "RunTrace",
    "afista_run",
]

DEFAULT_A = 5.0


def lambda_of(t, a=DEFAULT_A):
    """Momentum sequence value at iteration t >= 1: (t + a - 1) / a."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if a < 2:
        raise ValueError("a must be >= 2")
    return (t + a - 1.0) / a


@dataclass
class Schedule:
    """Tolerance schedule for a fixed horizon T."""

    T: int
    beta: float
    D0: float
    a: float = DEFAULT_A

    def __post_init__(self):
        if self.T < 2:
            raise ValueError("T must be >= 2")
        if self.a < 2:
            raise ValueError("a must be >= 2")
        if self.beta <= 0 or self.D0 <= 0:
            raise ValueError("beta and D0 must be positive")

    def lam(self, t):
        return lambda_of(t, self.a)

    def nu(self, t):
        return nu_of(t, self)


def nu_of(t, schedule):
    """Subproblem tolerance: beta*D0^2 / (lambda_t^2 * t * (1 + ln T))."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if t > schedule.T:
        raise ValueError(f"t={t} exceeds schedule horizon T={schedule.T}")
    lam = lambda_of(t, schedule.a)
    return schedule.beta * schedule.D0 ** 2 / (lam ** 2 * t * (1.0 + np.log(schedule.T)))


def horizon_for_accuracy(eps, beta, D0, a=DEFAULT_A):
    """Smallest horizon T with 1.5*beta*D0^2/lambda_T^2 <= eps (and T >= 2)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    lam_target = np.sqrt(1.5 * beta * D0 ** 2 / eps)
    T = int(np.ceil(a * lam_target - a + 1))
    return max(T, 2)


def y_update(x_curr, x_prev, t, a=DEFAULT_A):
    """Momentum extrapolation: y_t = x_t + ((lam_t - 1)/lam_{t+1}) (x_t - x_{t-1}).

    The result may leave the feasible set; subproblems tolerate that.
    """
    coef = (lambda_of(t, a) - 1.0) / lambda_of(t + 1, a)
    return x_curr + coef * (x_curr - x_prev)


class InnerSubproblem:
    """The iteration-t quadratic pair (phi_t, Phi_t).

    phi_t(x) = <x - y, g> + (beta/2) ||x - y||^2 with g the gradient snapshot
    at the extrapolated point y.  Phi_t is the lam_t-rescaled model whose
    Wolfe gap certifies acceptance (it is beta/lam^2-smooth and strongly
    convex).
    """

    def __init__(self, grad_snapshot, y_prev, x_prev, lam, beta):
        self.grad_snapshot = np.asarray(grad_snapshot, dtype=float)
        self.y_prev = np.asarray(y_prev, dtype=float)
        self.x_prev = np.asarray(x_prev, dtype=float)
        self.lam = float(lam)
        self.beta = float(beta)
        inv = 1.0 / self.lam
        self.inv_lam = inv
        self.curv = beta * inv * inv  # Hessian of Phi_t is curv * I
        # Phi_t(w) quadratic center term: w + shift
        self.shift = self.lam * ((1.0 - inv) * self.x_prev - self.y_prev)
        self._grad_base = inv * self.grad_snapshot + self.curv * self.shift

    def phi(self, x):
        d = x - self.y_prev
        return float(np.vdot(d, self.grad_snapshot) + 0.5 * self.beta * np.vdot(d, d))

    def grad_phi(self, x):
        return self.grad_snapshot + self.beta * (x - self.y_prev)

    def Phi(self, w):
        c = w + self.shift
        return float(self.inv_lam * np.vdot(w - self.y_prev, self.grad_snapshot)
                     + 0.5 * self.curv * np.vdot(c, c))

    def grad_Phi(self, w):
        return self._grad_base + self.curv * w

    def mix(self, w):
        """Map an inner iterate to the outer iterate: (1-1/lam) x_prev + (1/lam) w."""
        return (1.0 - self.inv_lam) * self.x_prev + self.inv_lam * w


def omega_gap(sub, x, fset):
    """Acceptance gap of an outer candidate x.

    max over w in K of <x - [(1-1/lam) x_prev + (1/lam) w], grad_phi(x)>,
    evaluated with a single LOO call (the max is attained at a vertex).
    """
    g = sub.grad_phi(x)
    u = fset.loo(g)
    base = x - (1.0 - sub.inv_lam) * sub.x_prev
    return float(np.vdot(base, g) - sub.inv_lam * np.vdot(u, g))


def inner_dual_gap(sub, w, fset):
    """Wolfe gap of Phi_t at a feasible inner point w (one LOO call)."""
    g = sub.grad_Phi(w)
    u = fset.loo(g)
    return float(np.vdot(w - u, g))


@dataclass
class TraceRow:
    outer_iter: int
    error: float
    fo: int
    loo: int
    sparse_proj: int
    loo_equiv: int
    inner_iters: int
    branch: str
    certificate: float
    cert_recomputed: float
    omega: float
    nu: float
    dist_half_sq: float
    wall_ns: int


@dataclass
class RunTrace:
    algorithm: str
    seed: int
    meta: dict
    r_hat: int = 0
    rows: list = field(default_factory=list)
    aborted: bool = False
    abort_reason: str = ""

    @property
    def T(self):
        return len(self.rows)

    def errors(self):
        return np.array([row.error for row in self.rows])

    def final_error(self):
        return self.rows[-1].error if self.rows else np.nan

    def iterations_to(self, eps):
        """First outer iteration with error <= eps, or None."""
        for row in self.rows:
            if row.error <= eps:
                return row.outer_iter
        return None


def afista_run(obj, fset, inner_solver, schedule, x0, f_star=None,
               algorithm="afista", seed=0, meta=None, r_hat=0,
               recompute_diagnostics=True):
    """Run the accelerated outer loop for ``schedule.T`` iterations.

    ``inner_solver(sub, counting_set, nu)`` must return an ``InnerResult``
    whose certificate is at most ``nu``.  One gradient evaluation (FO call)
    is made per outer iteration, at the extrapolated point.

    Diagnostics recorded per iteration (independent of the solver's internal
    bookkeeping, and not counted against the oracle budgets): the recomputed
    stopping quantity of the returned iterate and its omega gap.
    """
    from .inner import InnerSolverAbort, recompute_certificate

    x_prev = np.array(x0, dtype=float)
    y_prev = x_prev.copy()
    counting = CountingSet(fset)
    trace = RunTrace(algorithm=algorithm, seed=seed, meta=dict(meta or {}),
                     r_hat=r_hat)
    fo = 0
    t0 = time.perf_counter_ns()
    for t in range(1, schedule.T + 1):
        lam = schedule.lam(t)
        nu = schedule.nu(t)
        gy = obj.gradient(y_prev)
        fo += 1
        sub = InnerSubproblem(gy, y_prev, x_prev, lam, schedule.beta)
        try:
            res = inner_solver(sub, counting, nu)
        except InnerSolverAbort as exc:
            trace.aborted = True
            trace.abort_reason = f"iteration {t}: {exc}"
            break
        x_t = res.x

        if recompute_diagnostics:
            omega = omega_gap(sub, x_t, fset)
            cert2 = recompute_certificate(sub, fset, res)
        else:
            omega = np.nan
            cert2 = res.certificate
        fx = obj.value(x_t)
        err = fx - f_star if f_star is not None else fx
        d = x_t - x_prev
        trace.rows.append(TraceRow(
            outer_iter=t,
            error=float(err),
            fo=fo,
            loo=counting.loo_calls,
            sparse_proj=counting.sparse_proj_calls,
            loo_equiv=counting.loo_calls + r_hat * counting.sparse_proj_calls,
            inner_iters=res.inner_iterations,
            branch=res.branch,
            certificate=res.certificate,
            cert_recomputed=cert2,
            omega=omega,
            nu=nu,
            dist_half_sq=0.5 * float(np.vdot(d, d)),
            wall_ns=time.perf_counter_ns() - t0,
        ))
        y_prev = y_update(x_t, x_prev, t, schedule.a)
        x_prev = x_t
    return trace
