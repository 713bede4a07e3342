"""Smooth objectives, the quadratic test objective, and the instance generator.

Generated instances are convex quadratics f(x) = 0.5 x'Ax + b'x over the unit
simplex with a planted optimum: a known support S of size r, zero gradient on
S and gradient exactly delta off S, which controls the strict complementarity
measure of the instance.
"""

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SmoothObjective",
    "QuadraticObjective",
    "QuadraticInstance",
    "generate_instance",
    "exact_line_search",
    "golden_section",
    "finite_diff_check",
    "save_instance",
    "load_instance",
]

# Minimum planted weight on the support, before renormalization; keeps the
# optimum strictly inside its face.
MIN_SUPPORT_WEIGHT = 1e-3


class SmoothObjective:
    """A smooth convex objective: value, gradient, and smoothness constant."""

    beta = None

    def value(self, x):
        raise NotImplementedError

    def gradient(self, x):
        raise NotImplementedError

    def value_and_gradient(self, x):
        return self.value(x), self.gradient(x)

    def line_search(self, w, s, gamma_max):
        """Minimize f(w + gamma*s) over [0, gamma_max]; generic golden-section."""
        return golden_section(lambda g: self.value(w + g * s), 0.0, gamma_max)


class QuadraticObjective(SmoothObjective):
    """f(x) = 0.5 x'Ax + b'x with symmetric PSD A."""

    def __init__(self, A, b, beta=None):
        A = np.asarray(A, dtype=float)
        b = np.asarray(b, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1] or b.shape != (A.shape[0],):
            raise ValueError("A must be square and b conforming")
        self.A = A
        self.b = b
        self.n = A.shape[0]
        self.beta = float(beta) if beta is not None else float(
            np.linalg.eigvalsh(A).max())

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.n,):
            raise ValueError(f"expected shape ({self.n},), got {x.shape}")
        return x

    def value(self, x):
        x = self._check(x)
        return float(0.5 * x @ (self.A @ x) + self.b @ x)

    def gradient(self, x):
        x = self._check(x)
        return self.A @ x + self.b

    def value_and_gradient(self, x):
        x = self._check(x)
        g = self.A @ x + self.b
        return float(0.5 * x @ (g + self.b)), g

    def incremental_gradient(self, g, gamma, j):
        """Gradient after the vertex step x' = (1-gamma) x + gamma e_j.

        Given g = Ax + b, returns Ax' + b using one column read of A.
        """
        return (1.0 - gamma) * g + gamma * (self.A[:, j] + self.b)

    def line_search(self, w, s, gamma_max):
        return exact_line_search(self, w, s, gamma_max)

    def curvature_along(self, s):
        return float(s @ (self.A @ s))


def exact_line_search(obj, w, s, gamma_max):
    """Closed-form minimizer of a quadratic along w + gamma*s, clamped to [0, gamma_max]."""
    if gamma_max < 0:
        raise ValueError("gamma_max must be nonnegative")
    s = np.asarray(s, dtype=float)
    slope = float(np.vdot(s, obj.gradient(w)))
    curv = obj.curvature_along(s)
    ss = float(np.vdot(s, s))
    if curv <= 1e-14 * ss:
        return gamma_max if slope < 0 else 0.0
    return float(np.clip(-slope / curv, 0.0, gamma_max))


def golden_section(fun, lo, hi, tol=1e-10, max_iter=200):
    """Golden-section minimization of a unimodal 1-d function on [lo, hi]."""
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fun(c), fun(d)
    for _ in range(max_iter):
        if b - a < tol:
            break
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fun(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fun(d)
    return 0.5 * (a + b)


def finite_diff_check(obj, x, h=1e-6):
    """Max relative deviation between analytic and central-difference gradients."""
    x = np.asarray(x, dtype=float)
    g = obj.gradient(x)
    scale = max(np.max(np.abs(g)), 1.0)
    worst = 0.0
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        num = (obj.value(x + e) - obj.value(x - e)) / (2 * h)
        worst = max(worst, abs(num - g[i]) / scale)
    return worst


@dataclass
class QuadraticInstance:
    """A generated quadratic over the unit simplex with a planted optimum."""

    A: np.ndarray
    b: np.ndarray
    x_star: np.ndarray
    f_star: float
    n: int
    r: int
    delta: float
    beta: float
    seed: int
    support: np.ndarray = field(default=None)

    def objective(self):
        return QuadraticObjective(self.A, self.b, beta=self.beta)


def generate_instance(n, r, delta, beta, seed):
    """Build a quadratic instance over the simplex with planted sparsity ``r``
    and complementarity measure ``delta``.

    A = Q diag(lam) Q' with Q a seeded random orthogonal matrix, the largest
    eigenvalue pinned to ``beta`` and the rest uniform in (0, beta].  The
    optimum has ``r`` strictly positive entries on a random support S, and
    b = -A x* + delta z* with z* the off-support indicator, so the gradient at
    x* is 0 on S and exactly delta off S.
    """
    if not (1 <= r <= n):
        raise ValueError(f"r={r} must satisfy 1 <= r <= n={n}")
    if beta <= 0:
        raise ValueError("beta must be positive")
    if delta < 0:
        raise ValueError("delta must be nonnegative")
    rng = np.random.default_rng(seed)

    M = rng.standard_normal((n, n))
    Q, _ = np.linalg.qr(M)
    lam = np.empty(n)
    lam[0] = beta
    if n > 1:
        # uniform in (0, beta]: flip [0, beta) draws
        lam[1:] = beta - rng.uniform(0.0, beta, size=n - 1)
    A = (Q * lam) @ Q.T
    A = 0.5 * (A + A.T)

    support = np.sort(rng.choice(n, size=r, replace=False))
    w = rng.dirichlet(np.ones(r))
    w = np.maximum(w, MIN_SUPPORT_WEIGHT)
    w = w / w.sum()
    x_star = np.zeros(n)
    x_star[support] = w

    z_star = np.ones(n)
    z_star[support] = 0.0
    b = -A @ x_star + delta * z_star
    f_star = float(0.5 * x_star @ (A @ x_star) + b @ x_star)

    return QuadraticInstance(A=A, b=b, x_star=x_star, f_star=f_star, n=n, r=r,
                             delta=float(delta), beta=float(beta), seed=int(seed),
                             support=support)


def save_instance(instance, path):
    """Serialize an instance to a self-describing .npz file."""
    np.savez(path,
             A=instance.A, b=instance.b, x_star=instance.x_star,
             support=instance.support,
             meta=np.array([instance.n, instance.r, instance.delta,
                            instance.beta, instance.seed, instance.f_star]))


def load_instance(path):
    with np.load(path) as data:
        n, r, delta, beta, seed, f_star = data["meta"]
        return QuadraticInstance(A=data["A"], b=data["b"], x_star=data["x_star"],
                                 f_star=float(f_star), n=int(n), r=int(r),
                                 delta=float(delta), beta=float(beta),
                                 seed=int(seed), support=data["support"])
