"""Circulant graph combinatorics, edge metrics, Dirichlet points and Weyl counts.

Vertices are numbered ``0..n-1`` internally.  Edges are stored class-major:
edge ``h * n + i`` joins vertex ``i`` to ``(i + a[h]) % n`` and belongs to jump
class ``h`` (0-based).  Results never depend on the orientation.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property, reduce
from typing import Sequence

import numpy as np

from .errors import (
    Disconnected,
    EmptyJumpSet,
    GraphError,
    InvalidMetric,
    InvalidProbability,
    JumpOutOfRange,
    NonPrimeWarning,
    NotStrictlyIncreasing,
)

RANDOM_SPEC_RETRIES = 16
DEFAULT_LENGTH_INTERVAL = (1.0, 1.5)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % p for p in range(3, math.isqrt(n) + 1, 2))


@dataclass(frozen=True)
class CirculantSpec:
    """Combinatorial circulant graph C_n(a)."""

    n: int
    a: tuple[int, ...]

    @property
    def d(self) -> int:
        return len(self.a)

    @property
    def n_edges(self) -> int:
        return self.n * self.d

    @cached_property
    def edges(self) -> np.ndarray:
        """(E, 2) array of 0-based endpoints in canonical order."""
        i = np.arange(self.n)
        rows = [np.column_stack([i, (i + ah) % self.n]) for ah in self.a]
        return np.vstack(rows)

    @cached_property
    def edge_class(self) -> np.ndarray:
        return np.repeat(np.arange(self.d), self.n)

    @cached_property
    def incidence(self) -> np.ndarray:
        """(E, n) 0/1 matrix marking both endpoints of every edge."""
        inc = np.zeros((self.n_edges, self.n))
        e = np.arange(self.n_edges)
        inc[e, self.edges[:, 0]] = 1.0
        inc[e, self.edges[:, 1]] = 1.0
        return inc

    def neighbors(self, i: int) -> list[int]:
        out = set()
        for ah in self.a:
            out.add((i + ah) % self.n)
            out.add((i - ah) % self.n)
        return sorted(out)

    def __str__(self) -> str:
        return f"C_{self.n}({','.join(map(str, self.a))})"


def validate_spec(n: int, a: Sequence[int]) -> CirculantSpec:
    """Check the jump set and return a :class:`CirculantSpec`.

    Requires ``0 < a_1 < ... < a_d < n/2`` and ``gcd(a, n) == 1``.  The
    double edge case ``a_d == n/2`` is rejected.
    """
    n = int(n)
    a = tuple(int(x) for x in a)
    if n < 3:
        raise GraphError(f"need n >= 3, got {n}")
    if not a:
        raise EmptyJumpSet("jump set is empty")
    if any(y <= x for x, y in zip(a, a[1:])):
        raise NotStrictlyIncreasing(f"jumps must be strictly increasing: {list(a)}")
    if a[0] <= 0 or 2 * a[-1] >= n:
        raise JumpOutOfRange(f"jumps must satisfy 0 < a_h < n/2 = {n / 2}: {list(a)}")
    g = reduce(math.gcd, a, n)
    if g != 1:
        raise Disconnected(f"gcd(a, n) = {g}; C_{n}({','.join(map(str, a))}) is disconnected")
    return CirculantSpec(n, a)


def random_spec(n: int, p: float, seed: int) -> CirculantSpec:
    """Draw a jump set by an independent Bernoulli(p) trial on 1..(n-1)//2.

    Empty or disconnected draws are redrawn up to 16 times.  A
    :class:`NonPrimeWarning` is issued for composite ``n``.
    """
    if not (0.0 < p <= 1.0):
        raise InvalidProbability(f"p must lie in (0, 1], got {p}")
    if not _is_prime(n):
        warnings.warn(f"n = {n} is not prime; subspectra may contain Dirichlet levels",
                      NonPrimeWarning, stacklevel=2)
    rng = np.random.default_rng(seed)
    candidates = np.arange(1, (n - 1) // 2 + 1)
    for _ in range(RANDOM_SPEC_RETRIES):
        a = candidates[rng.random(candidates.size) < p]
        if a.size and reduce(math.gcd, a.tolist(), n) == 1:
            return validate_spec(n, a.tolist())
    raise EmptyJumpSet(f"no valid jump set after {RANDOM_SPEC_RETRIES} draws (n={n}, p={p})")


def _frozen(x) -> np.ndarray:
    arr = np.array(x, dtype=float)
    arr.setflags(write=False)
    return arr


def _check_lengths(x: np.ndarray, size: int, what: str) -> None:
    if x.shape != (size,):
        raise InvalidMetric(f"expected {size} {what} lengths, got shape {x.shape}")
    if not np.all(np.isfinite(x)) or np.any(x <= 0):
        raise InvalidMetric(f"{what} lengths must be finite and positive")


@dataclass(frozen=True, eq=False)
class MetricGraph:
    """A circulant graph with edge lengths.

    ``class_lengths`` is set exactly when the metric respects the cyclic
    symmetry (one length per jump class).  ``lengths`` always holds the
    per-edge lengths in canonical edge order.
    """

    spec: CirculantSpec
    lengths: np.ndarray
    class_lengths: np.ndarray | None = field(default=None)

    @classmethod
    def symmetric(cls, spec: CirculantSpec, ell: Sequence[float]) -> "MetricGraph":
        ell = _frozen(ell)
        _check_lengths(ell, spec.d, "class")
        return cls(spec, _frozen(np.repeat(ell, spec.n)), ell)

    @classmethod
    def generic(cls, spec: CirculantSpec, lengths: Sequence[float]) -> "MetricGraph":
        lengths = _frozen(lengths)
        _check_lengths(lengths, spec.n_edges, "edge")
        return cls(spec, lengths, None)

    @classmethod
    def random_generic(cls, spec: CirculantSpec, lo: float = DEFAULT_LENGTH_INTERVAL[0],
                       hi: float = DEFAULT_LENGTH_INTERVAL[1], seed: int | None = None) -> "MetricGraph":
        rng = np.random.default_rng(seed)
        return cls.generic(spec, rng.uniform(lo, hi, spec.n_edges))

    @classmethod
    def random_symmetric(cls, spec: CirculantSpec, lo: float = DEFAULT_LENGTH_INTERVAL[0],
                         hi: float = DEFAULT_LENGTH_INTERVAL[1], seed: int | None = None) -> "MetricGraph":
        rng = np.random.default_rng(seed)
        return cls.symmetric(spec, rng.uniform(lo, hi, spec.d))

    @property
    def is_symmetric(self) -> bool:
        return self.class_lengths is not None

    @property
    def n(self) -> int:
        return self.spec.n

    @property
    def d(self) -> int:
        return self.spec.d

    @property
    def total_length(self) -> float:
        if self.class_lengths is not None:
            return self.spec.n * math.fsum(self.class_lengths)
        return math.fsum(self.lengths)

    def scaled(self, factor: float) -> "MetricGraph":
        if self.class_lengths is not None:
            return MetricGraph.symmetric(self.spec, self.class_lengths * factor)
        return MetricGraph.generic(self.spec, self.lengths * factor)

    def as_generic(self) -> "MetricGraph":
        """Forget the symmetry; same per-edge lengths."""
        return MetricGraph(self.spec, self.lengths, None)


@dataclass(frozen=True)
class DirichletPoint:
    """A point m*pi/L of the Dirichlet set.

    ``source`` is the jump class for symmetric metrics and the edge id for
    generic ones; ``by_class`` tells which.
    """

    k: float
    source: int
    m: int
    by_class: bool


def _families(g: MetricGraph) -> tuple[np.ndarray, bool]:
    if g.class_lengths is not None:
        return np.asarray(g.class_lengths), True
    return np.asarray(g.lengths), False


def dirichlet_points(g: MetricGraph, kmax: float) -> list[DirichletPoint]:
    """All m*pi/L <= kmax, one family per edge class (symmetric) or edge (generic)."""
    if not kmax > 0:
        raise ValueError("kmax must be positive")
    lengths, by_class = _families(g)
    pts = []
    for src, L in enumerate(lengths):
        for m in range(1, int(math.floor(kmax * L / math.pi)) + 1):
            pts.append(DirichletPoint(m * math.pi / L, src, m, by_class))
    pts.sort(key=lambda p: (p.k, p.source))
    return pts


def dirichlet_array(lengths: np.ndarray, kmin: float, kmax: float) -> np.ndarray:
    """Sorted k values m*pi/L in (kmin, kmax] over all given lengths."""
    out = []
    for L in np.asarray(lengths, dtype=float):
        m0 = int(math.floor(kmin * L / math.pi)) + 1
        m1 = int(math.floor(kmax * L / math.pi))
        if m1 >= m0:
            out.append(np.arange(m0, m1 + 1) * (math.pi / L))
    if not out:
        return np.empty(0)
    return np.sort(np.concatenate(out))


def weyl_estimate(g: MetricGraph, a: float, b: float) -> tuple[float, float]:
    """Expected eigenvalue count in (a, b) and the bound on its remainder.

    Symmetric metrics use ``n*d + n + d``; generic ones the tighter
    ``n*d + n`` (edges plus vertices).
    """
    if not (0 <= a <= b):
        raise ValueError(f"need 0 <= a <= b, got ({a}, {b})")
    expected = (b - a) * g.total_length / math.pi
    n, d = g.n, g.d
    bound = n * d + n + (d if g.is_symmetric else 0)
    return expected, float(bound)
