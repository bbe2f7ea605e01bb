"""Reference samplers and brute-force oracles shared by the tests."""
from __future__ import annotations

import math

import numpy as np

from quantum_circulant.graph import MetricGraph, validate_spec


def picket_fence(n: int, offset: float = 0.0) -> np.ndarray:
    return offset + np.arange(n, dtype=float)


def poisson_sequence(n: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.cumsum(rng.exponential(1.0, n))


def random_jump_set(rng: np.random.Generator, n: int, min_d: int = 2) -> list[int]:
    """Random connected jump set with at least ``min_d`` jumps."""
    pool = np.arange(1, (n - 1) // 2 + 1)
    while True:
        d = int(rng.integers(min_d, pool.size + 1))
        a = sorted(rng.choice(pool, size=d, replace=False).tolist())
        if math.gcd(*a, n) == 1:
            return a


def random_symmetric_graphs(count: int, seed: int, n_range=(5, 15)) -> list[MetricGraph]:
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        n = int(rng.integers(n_range[0], n_range[1] + 1))
        if (n - 1) // 2 < 2:
            continue
        spec = validate_spec(n, random_jump_set(rng, n))
        out.append(MetricGraph.symmetric(spec, rng.uniform(1.0, 1.5, spec.d)))
    return out


def dense_matrix(g: MetricGraph, k: float) -> np.ndarray:
    """Secular matrix built edge by edge from its definition."""
    M = np.zeros((g.n, g.n))
    for (u, v), L in zip(g.spec.edges, g.lengths):
        M[u, v] += 1.0 / math.sin(k * L)
        M[v, u] += 1.0 / math.sin(k * L)
        M[u, u] -= math.cos(k * L) / math.sin(k * L)
        M[v, v] -= math.cos(k * L) / math.sin(k * L)
    return M


def dense_scan_roots(g: MetricGraph, kmax: float, step: float = 1e-4) -> np.ndarray:
    """Sign changes of det M on a uniform grid, cut at the Dirichlet points, refined by bisection.

    Independent of the solver: plain numpy determinants, no inertia counting.
    Adequate only for incommensurate lengths, where roots are simple, and
    for spectra without levels below 1e-3.
    """
    lengths = np.asarray(g.lengths)
    poles = np.sort(np.concatenate([np.arange(1, int(kmax * L / math.pi) + 1) * math.pi / L
                                    for L in lengths]))
    # det M changes sign right at k = 0 (the constant eigenfunction); start just above it
    cuts = np.concatenate([[1e-3], poles[poles < kmax], [kmax]])

    def det(k):
        x = np.multiply.outer(np.atleast_1d(k), lengths)
        csc, cot = 1.0 / np.sin(x), np.cos(x) / np.sin(x)
        M = np.zeros((x.shape[0], g.n, g.n))
        u, v = g.spec.edges[:, 0], g.spec.edges[:, 1]
        for e in range(lengths.size):
            M[:, u[e], v[e]] += csc[:, e]
            M[:, v[e], u[e]] += csc[:, e]
            M[:, u[e], u[e]] -= cot[:, e]
            M[:, v[e], v[e]] -= cot[:, e]
        return np.linalg.det(M)

    roots = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        pad = 1e-9 * max(b - a, 1e-300)
        grid = np.linspace(a + pad, b - pad, max(3, int((b - a) / step) + 2))
        vals = det(grid)
        idx = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
        for i in idx:
            lo, hi, flo = grid[i], grid[i + 1], vals[i]
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = det(mid)[0]
                if np.sign(fm) == np.sign(flo):
                    lo, flo = mid, fm
                else:
                    hi = mid
                if hi - lo < 1e-14 * kmax:
                    break
            roots.append(0.5 * (lo + hi))
    return np.array(roots)


def brute_j_multiplicity(n: int, a_g: int, m: int) -> int:
    """|J| by scanning every j: 2 j a_g = q n with q odd for odd m, even for even m."""
    count = 0
    for j in range(n):
        num = 2 * j * a_g
        if num % n:
            continue
        q = num // n
        if q % 2 == m % 2:
            count += 1
    return count


def matrix_tree_count(g: MetricGraph) -> float:
    """Weighted spanning-tree sum with edge weights 1/L (any cofactor of the weighted Laplacian)."""
    lap = np.zeros((g.n, g.n))
    for (u, v), L in zip(g.spec.edges, g.lengths):
        w = 1.0 / L
        lap[u, u] += w
        lap[v, v] += w
        lap[u, v] -= w
        lap[v, u] -= w
    return float(np.linalg.det(lap[1:, 1:]))
