"""Feasible sets and their oracles.

Each set exposes up to three oracle families:

* ``loo(g)`` -- linear optimization: an extreme point minimizing ``<u, g>``.
* ``project(x)`` -- exact Euclidean projection onto the set.
* ``sparse_project(x, r)`` -- Euclidean projection restricted to points of
  sparsity at most ``r`` (face dimension for polytopes, rank for matrix
  domains).

All oracles are pure functions of their inputs; the set objects hold no
mutable state.
"""

import numpy as np

__all__ = [
    "Simplex",
    "L1Ball",
    "VPolytope",
    "Spectrahedron",
    "NuclearBall",
    "CapabilityError",
    "project_simplex",
    "project_l1_ball",
    "CountingSet",
]

# Relative tolerance for support / rank counting.
SUPPORT_RTOL = 1e-9


class CapabilityError(NotImplementedError):
    """Raised when a set does not support the requested oracle."""


def _check_finite(g, shape):
    g = np.asarray(g, dtype=float)
    if g.shape != shape:
        raise ValueError(f"expected shape {shape}, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise ValueError("non-finite entries in oracle input")
    return g


def project_simplex(v, z=1.0):
    """Project ``v`` onto the simplex {y >= 0, sum(y) = z} (sort and threshold)."""
    v = np.asarray(v, dtype=float)
    n = v.size
    u = np.sort(v)[::-1]
    cssv = np.cumsum(u) - z
    ind = np.arange(1, n + 1)
    rho = np.count_nonzero(u - cssv / ind > 0)
    theta = cssv[rho - 1] / rho
    return np.maximum(v - theta, 0.0)


def project_l1_ball(v, z=1.0):
    """Project ``v`` onto the l1 ball of radius ``z``."""
    v = np.asarray(v, dtype=float)
    if np.abs(v).sum() <= z:
        return v.copy()
    w = project_simplex(np.abs(v), z)
    return np.sign(v) * w


class FeasibleSet:
    """Base class: common bookkeeping for set descriptors."""

    #: Euclidean diameter of the set.
    diameter = None

    def loo(self, g):
        raise CapabilityError(f"{type(self).__name__} has no linear optimization oracle")

    def project(self, x):
        raise CapabilityError(f"{type(self).__name__} has no exact projection oracle")

    def sparse_project(self, x, r):
        raise CapabilityError(f"{type(self).__name__} has no sparse projection oracle")

    def sparsity_of(self, x):
        raise CapabilityError(f"{type(self).__name__} has no sparsity measure")

    def contains(self, x, tol=1e-9):
        raise CapabilityError(f"{type(self).__name__} has no membership test")

    @property
    def max_sparsity(self):
        raise CapabilityError(f"{type(self).__name__} has no sparsity measure")

    def _check_sparsity(self, r):
        if not (0 <= r <= self.max_sparsity):
            raise ValueError(f"sparsity value {r} outside [0, {self.max_sparsity}]")


class Simplex(FeasibleSet):
    """The unit simplex in R^n: x >= 0, sum(x) = 1."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.shape = (n,)
        self.diameter = np.sqrt(2.0) if n > 1 else 0.0
        self.is_polytope = True

    def __repr__(self):
        return f"Simplex({self.n})"

    @property
    def max_sparsity(self):
        return self.n - 1

    def loo(self, g):
        g = _check_finite(g, self.shape)
        u = np.zeros(self.n)
        u[np.argmin(g)] = 1.0  # argmin takes the lowest index on ties
        return u

    def loo_key(self, g):
        g = _check_finite(g, self.shape)
        return int(np.argmin(g))

    def vertex(self, key):
        u = np.zeros(self.n)
        u[key] = 1.0
        return u

    def vertex_score(self, key, g):
        return g[key]

    def decompose(self, x):
        """Convex vertex decomposition of a feasible point: its support."""
        idx = np.nonzero(x > 0)[0]
        return {int(j): float(x[j]) for j in idx}

    def project(self, x):
        x = _check_finite(x, self.shape)
        return project_simplex(x)

    def sparse_project(self, x, r):
        x = _check_finite(x, self.shape)
        self._check_sparsity(r)
        k = r + 1
        if k >= self.n:
            return project_simplex(x)
        # keep the r+1 largest signed entries, project them, zero the rest
        keep = np.argpartition(x, self.n - k)[self.n - k:]
        y = np.zeros(self.n)
        y[keep] = project_simplex(x[keep])
        return y

    def sparsity_of(self, x):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise ValueError("sparsity measure requires a feasible point")
        tol = SUPPORT_RTOL * max(np.max(x), 1e-300)
        return int(np.count_nonzero(x > tol)) - 1

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.all(x >= -tol) and abs(x.sum() - 1.0) <= tol)


class L1Ball(FeasibleSet):
    """The unit l1 ball in R^n."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.shape = (n,)
        self.diameter = 2.0
        self.is_polytope = True

    def __repr__(self):
        return f"L1Ball({self.n})"

    @property
    def max_sparsity(self):
        return self.n - 1

    def loo_key(self, g):
        g = _check_finite(g, self.shape)
        j = int(np.argmax(np.abs(g)))
        sign = -1.0 if g[j] > 0 else 1.0
        return (sign, j)

    def vertex(self, key):
        sign, j = key
        u = np.zeros(self.n)
        u[j] = sign
        return u

    def vertex_score(self, key, g):
        sign, j = key
        return sign * g[j]

    def loo(self, g):
        return self.vertex(self.loo_key(g))

    def decompose(self, x):
        idx = np.nonzero(x)[0]
        return {(1.0 if x[j] > 0 else -1.0, int(j)): float(abs(x[j])) for j in idx}

    def project(self, x):
        x = _check_finite(x, self.shape)
        return project_l1_ball(x)

    def sparse_project(self, x, r):
        x = _check_finite(x, self.shape)
        self._check_sparsity(r)
        k = r + 1
        if k >= self.n:
            return project_l1_ball(x)
        keep = np.argpartition(np.abs(x), self.n - k)[self.n - k:]
        y = np.zeros(self.n)
        y[keep] = project_l1_ball(x[keep])
        return y

    def sparsity_of(self, x):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise ValueError("sparsity measure requires a feasible point")
        a = np.abs(x)
        tol = SUPPORT_RTOL * max(np.max(a), 1e-300)
        return max(int(np.count_nonzero(a > tol)) - 1, 0)

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        return bool(np.abs(x).sum() <= 1.0 + tol)


class VPolytope(FeasibleSet):
    """Polytope given as the convex hull of an explicit vertex list."""

    def __init__(self, vertices):
        V = np.asarray(vertices, dtype=float)
        if V.ndim != 2 or V.shape[0] == 0:
            raise ValueError("vertex list must be a nonempty 2-d array")
        for i in range(V.shape[0]):
            for j in range(i + 1, V.shape[0]):
                if np.array_equal(V[i], V[j]):
                    raise ValueError("vertices must be pairwise distinct")
        self.vertices = V
        self.n = V.shape[1]
        self.shape = (self.n,)
        d2 = 0.0
        for i in range(V.shape[0]):
            d = np.linalg.norm(V[i + 1:] - V[i], axis=1)
            if d.size:
                d2 = max(d2, float(d.max()))
        self.diameter = d2
        self.is_polytope = True

    def __repr__(self):
        return f"VPolytope({self.vertices.shape[0]} vertices in R^{self.n})"

    def loo_key(self, g):
        g = _check_finite(g, self.shape)
        return int(np.argmin(self.vertices @ g))

    def vertex(self, key):
        return self.vertices[key].copy()

    def vertex_score(self, key, g):
        return float(self.vertices[key] @ g)

    def loo(self, g):
        return self.vertex(self.loo_key(g))


def _sym(x):
    return 0.5 * (x + x.T)


class Spectrahedron(FeasibleSet):
    """Symmetric positive semidefinite n x n matrices with unit trace."""

    def __init__(self, n):
        if n < 1:
            raise ValueError("n must be positive")
        self.n = n
        self.shape = (n, n)
        self.diameter = np.sqrt(2.0) if n > 1 else 0.0
        self.is_polytope = False

    def __repr__(self):
        return f"Spectrahedron({self.n})"

    @property
    def max_sparsity(self):
        return self.n

    def loo(self, g):
        g = _check_finite(g, self.shape)
        w, v = np.linalg.eigh(_sym(g))
        u = v[:, 0]  # eigenvector of the smallest eigenvalue
        return np.outer(u, u)

    def project(self, x):
        x = _check_finite(x, self.shape)
        w, v = np.linalg.eigh(_sym(x))
        lam = project_simplex(w)
        return _sym((v * lam) @ v.T)

    def sparse_project(self, x, r):
        x = _check_finite(x, self.shape)
        if not (1 <= r <= self.n):
            raise ValueError(f"rank {r} outside [1, {self.n}]")
        if r == self.n:
            return self.project(x)
        w, v = np.linalg.eigh(_sym(x))
        # keep the top r signed eigenvalues, project them onto the r-simplex
        w_top, v_top = w[-r:], v[:, -r:]
        lam = project_simplex(w_top)
        return _sym((v_top * lam) @ v_top.T)

    def sparsity_of(self, x):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise ValueError("sparsity measure requires a feasible point")
        w = np.linalg.eigvalsh(_sym(x))
        tol = SUPPORT_RTOL * max(np.max(np.abs(w)), 1e-300)
        return int(np.count_nonzero(w > tol))

    def contains(self, x, tol=1e-8):
        x = np.asarray(x, dtype=float)
        if not np.allclose(x, x.T, atol=1e-8):
            return False
        w = np.linalg.eigvalsh(_sym(x))
        return bool(w.min() >= -tol and abs(np.trace(x) - 1.0) <= tol)


class NuclearBall(FeasibleSet):
    """Real m x n matrices with nuclear norm (sum of singular values) at most 1."""

    def __init__(self, m, n):
        if m < 1 or n < 1:
            raise ValueError("dimensions must be positive")
        self.m = m
        self.n = n
        self.shape = (m, n)
        self.diameter = np.sqrt(2.0) if min(m, n) > 1 else 2.0
        self.is_polytope = False

    def __repr__(self):
        return f"NuclearBall({self.m},{self.n})"

    @property
    def max_sparsity(self):
        return min(self.m, self.n)

    def loo(self, g):
        g = _check_finite(g, self.shape)
        u, s, vt = np.linalg.svd(g)
        return -np.outer(u[:, 0], vt[0])

    def project(self, x):
        x = _check_finite(x, self.shape)
        u, s, vt = np.linalg.svd(x, full_matrices=False)
        s_proj = project_l1_ball(s)
        return (u * s_proj) @ vt

    def sparse_project(self, x, r):
        x = _check_finite(x, self.shape)
        if not (1 <= r <= self.max_sparsity):
            raise ValueError(f"rank {r} outside [1, {self.max_sparsity}]")
        u, s, vt = np.linalg.svd(x, full_matrices=False)
        s_top = s[:r]
        if s_top.sum() > 1.0:
            s_top = project_simplex(s_top)
        return (u[:, :r] * s_top) @ vt[:r]

    def sparsity_of(self, x):
        x = np.asarray(x, dtype=float)
        if not self.contains(x):
            raise ValueError("sparsity measure requires a feasible point")
        s = np.linalg.svd(x, compute_uv=False)
        tol = SUPPORT_RTOL * max(s.max(), 1e-300)
        return int(np.count_nonzero(s > tol))

    def contains(self, x, tol=1e-9):
        x = np.asarray(x, dtype=float)
        s = np.linalg.svd(x, compute_uv=False)
        return bool(s.sum() <= 1.0 + tol)


class CountingSet:
    """Wrapper counting oracle calls made through it; delegates everything else."""

    def __init__(self, base):
        self.base = base
        self.loo_calls = 0
        self.sparse_proj_calls = 0

    def loo(self, g):
        self.loo_calls += 1
        return self.base.loo(g)

    def loo_key(self, g):
        self.loo_calls += 1
        return self.base.loo_key(g)

    def sparse_project(self, x, r):
        self.sparse_proj_calls += 1
        return self.base.sparse_project(x, r)

    def __getattr__(self, name):
        return getattr(self.base, name)
