"""Secular matrix M(k), the representation factors p_j(k) and their poles.

For symmetric metrics every class h enters a representation j through the
phase ``c_h = cos(2 pi j a_h / n)``.  The cases ``c_h = +1`` and ``c_h = -1``
are detected with integer arithmetic and evaluated through the reduced
half-angle forms (``tan(k l/2)`` and ``-cot(k l/2)``), which also makes the
j = 0 and j = n/2 factors special cases of one formula.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import _hyper
from .errors import PoleHit, TooCloseToPole
from .graph import MetricGraph

POLE_GUARD = 1e-12


@dataclass(frozen=True)
class RepIndex:
    """Irreducible representation S_j folded onto 0 <= j <= n//2."""

    j: int
    weight: int

    @classmethod
    def of(cls, n: int, j: int) -> "RepIndex":
        j = int(j) % n
        j = min(j, n - j)
        return cls(j, 1 if j == 0 or 2 * j == n else 2)


def representations(n: int) -> list[RepIndex]:
    return [RepIndex.of(n, j) for j in range(n // 2 + 1)]


@dataclass(frozen=True)
class SecularMatrixValue:
    k: float
    entries: np.ndarray
    nearest_pole_distance: float


@dataclass(frozen=True)
class Pole:
    k: float
    classes: tuple[int, ...]

    @property
    def coincident(self) -> bool:
        return len(self.classes) > 1


def _as_rep(g: MetricGraph, rep) -> RepIndex:
    return rep if isinstance(rep, RepIndex) else RepIndex.of(g.n, rep)


def _require_symmetric(g: MetricGraph) -> np.ndarray:
    if g.class_lengths is None:
        raise ValueError("operation needs a symmetric (per jump class) metric")
    return np.asarray(g.class_lengths)


def class_phases(g: MetricGraph, j: int) -> tuple[np.ndarray, np.ndarray]:
    """cos(2 pi j a_h / n) per class, plus an exact flag in {+1, -1, 0}."""
    n = g.n
    r = np.array([(j * ah) % n for ah in g.spec.a])
    flag = np.zeros(r.size, dtype=int)
    flag[r == 0] = 1
    if n % 2 == 0:
        flag[r == n // 2] = -1
    c = np.cos(2.0 * np.pi * r / n)
    c[flag == 1] = 1.0
    c[flag == -1] = -1.0
    return c, flag


# ---------------------------------------------------------------------------
# M(k)
# ---------------------------------------------------------------------------

def _edge_trig(g: MetricGraph, k: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    x = np.multiply.outer(k, g.lengths)
    s = np.sin(x)
    return 1.0 / s, np.cos(x) / s, s


def secular_matrices(g: MetricGraph, k) -> np.ndarray:
    """Stack of M(k) for an array of k, shape (..., n, n). No pole guard."""
    k = np.asarray(k, dtype=float)
    csc, cot, _ = _edge_trig(g, k.ravel())
    n = g.n
    u, v = g.spec.edges[:, 0], g.spec.edges[:, 1]
    out = np.zeros((k.size, n, n))
    out[:, u, v] = csc
    out[:, v, u] = csc
    idx = np.arange(n)
    out[:, idx, idx] = -cot @ g.spec.incidence
    return out.reshape(k.shape + (n, n))


def _guard(g: MetricGraph, k: float) -> float:
    x = k * g.lengths
    dist = np.abs(x - np.pi * np.round(x / np.pi))
    if np.min(np.abs(np.sin(x))) < POLE_GUARD:
        raise TooCloseToPole(f"k = {k!r} is within the guard band of the Dirichlet set")
    return float(np.min(dist / x))


def assemble_M(g: MetricGraph, k: float) -> SecularMatrixValue:
    if not k > 0:
        raise ValueError("k must be positive")
    dist = _guard(g, k)
    m = secular_matrices(g, np.array([k]))[0]
    m.setflags(write=False)
    return SecularMatrixValue(float(k), m, dist)


def _ldl_logdet(a: np.ndarray) -> tuple[float, float]:
    """(sign, log|det|) from a Bunch-Kaufman factorization of symmetric ``a``."""
    _, dmat, _ = scipy.linalg.ldl(a, lower=True)
    n = dmat.shape[0]
    sign, logabs, i = 1.0, 0.0, 0
    while i < n:
        if i + 1 < n and dmat[i + 1, i] != 0.0:
            blk = dmat[i, i] * dmat[i + 1, i + 1] - dmat[i + 1, i] * dmat[i, i + 1]
            i += 2
        else:
            blk = dmat[i, i]
            i += 1
        if blk == 0.0:
            return 0.0, -math.inf
        sign *= math.copysign(1.0, blk)
        logabs += math.log(abs(blk))
    return sign, logabs


def log_det_M(g: MetricGraph, k: float) -> tuple[float, float]:
    return _ldl_logdet(assemble_M(g, k).entries)


def det_M(g: MetricGraph, k: float) -> float:
    sign, logabs = log_det_M(g, k)
    return sign * math.exp(logabs)


# ---------------------------------------------------------------------------
# p_j(k)
# ---------------------------------------------------------------------------

def p_values(g: MetricGraph, j: int, k) -> np.ndarray:
    """p_j at an array of k without any pole guard."""
    ell = _require_symmetric(g)
    c, flag = class_phases(g, j)
    k = np.asarray(k, dtype=float)
    out = np.zeros(k.shape)
    for h in range(ell.size):
        xh = k * ell[h]
        if flag[h] == 1:
            out += np.tan(xh / 2)
        elif flag[h] == -1:
            out -= 1.0 / np.tan(xh / 2)
        else:
            s = np.sin(xh)
            out += (c[h] - np.cos(xh)) / s
    return 2.0 * out


def _p_guard(g: MetricGraph, j: int, k: np.ndarray) -> np.ndarray:
    """Smallest distance-to-pole indicator per k (|sin| of the pole-carrying factor)."""
    ell = np.asarray(g.class_lengths)
    _, flag = class_phases(g, j)
    x = np.multiply.outer(k, ell)
    ind = np.where(flag == 1, np.abs(np.cos(x / 2)),
                   np.where(flag == -1, np.abs(np.sin(x / 2)), np.abs(np.sin(x))))
    return ind.min(axis=-1)


def eval_p(g: MetricGraph, rep, k):
    """p_j(k) with a pole check; ``rep`` is a RepIndex or an integer j."""
    rep = _as_rep(g, rep)
    _require_symmetric(g)
    karr = np.asarray(k, dtype=float)
    if np.any(_p_guard(g, rep.j, karr) < POLE_GUARD):
        raise PoleHit(f"k hits a pole of p_{rep.j}")
    val = p_values(g, rep.j, karr)
    return float(val) if val.ndim == 0 else val


def _class_poles(L: float, flag: int, kmin: float, kmax: float) -> np.ndarray:
    # flag +1: odd multiples, -1: even multiples, 0: all multiples of pi/L
    step = math.pi / L
    m0 = int(math.floor(kmin / step)) + 1
    m1 = int(math.floor(kmax / step))
    m = np.arange(m0, m1 + 1) if m1 >= m0 else np.empty(0, dtype=int)
    if flag == 1:
        m = m[m % 2 == 1]
    elif flag == -1:
        m = m[m % 2 == 0]
    return m * step


def pole_array(g: MetricGraph, j: int, kmin: float, kmax: float, rtol: float = 1e-13) -> np.ndarray:
    """Sorted poles of p_j in (kmin, kmax]; coincident ones merged."""
    ell = _require_symmetric(g)
    _, flag = class_phases(g, j)
    parts = [_class_poles(L, f, kmin, kmax) for L, f in zip(ell, flag)]
    allp = np.sort(np.concatenate(parts)) if parts else np.empty(0)
    if allp.size < 2:
        return allp
    keep = np.concatenate([[True], np.diff(allp) > rtol * allp[1:]])
    return allp[keep]


def poles_p(g: MetricGraph, rep, kmax: float) -> list[Pole]:
    """Poles of p_j in (0, kmax] with the classes that produce them."""
    rep = _as_rep(g, rep)
    ell = _require_symmetric(g)
    _, flag = class_phases(g, rep.j)
    tagged = []
    for h, (L, f) in enumerate(zip(ell, flag)):
        tagged.extend((k, h) for k in _class_poles(L, f, 0.0, kmax))
    tagged.sort()
    out: list[Pole] = []
    for k, h in tagged:
        if out and abs(k - out[-1].k) <= 1e-13 * k:
            out[-1] = Pole(out[-1].k, out[-1].classes + (h,))
        else:
            out.append(Pole(float(k), (h,)))
    return out


def factorized_det(g: MetricGraph, k: float) -> float:
    """det M(k) assembled from the p_j factors (circulant determinant identity)."""
    n = g.n
    vals = [eval_p(g, rep, k) for rep in representations(n)]
    out = 1.0
    for rep, v in zip(representations(n), vals):
        out *= v ** rep.weight
    return out


# ---------------------------------------------------------------------------
# imaginary axis
# ---------------------------------------------------------------------------

def fhat_symmetric(g: MetricGraph, j: int, t) -> np.ndarray:
    ell = _require_symmetric(g)
    c, flag = class_phases(g, j)
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape)
    for h, L in enumerate(ell):
        if flag[h] == 1:
            out += np.tanh(t * L / 2)
        elif flag[h] == -1:
            out += _hyper.coth(t * L / 2)
        else:
            out += _hyper.coth(t * L) - c[h] * _hyper.csch(t * L)
    return out


def scaled_mhat(g: MetricGraph, t: float) -> np.ndarray:
    """t * Mhat(t): diagonal -sum t coth(tL), off-diagonal t csch(tL); finite at t = 0."""
    L = np.asarray(g.lengths)
    x = t * L
    diag_part = -_hyper.xcoth(x) / L
    off = _hyper.xcsch(x) / L
    n = g.n
    u, v = g.spec.edges[:, 0], g.spec.edges[:, 1]
    a = np.zeros((n, n))
    a[u, v] = off
    a[v, u] = off
    d = np.zeros(n)
    np.add.at(d, u, diag_part)
    np.add.at(d, v, diag_part)
    a[np.arange(n), np.arange(n)] = d
    return a


def eval_fhat(g: MetricGraph, rep, t: float) -> float:
    """Imaginary-axis secular function.

    ``rep`` given (symmetric metric): fhat_j(t).  ``rep`` None: det[t Mhat(t)],
    the t-scaled determinant that stays finite as t -> 0.
    """
    if not t > 0:
        raise ValueError("t must be positive")
    if rep is None:
        sign, logabs = np.linalg.slogdet(scaled_mhat(g, t))
        return float(sign * math.exp(logabs))
    rep = _as_rep(g, rep)
    return float(fhat_symmetric(g, rep.j, t))
