"""Spectrum assembly for symmetric and generic circulant metrics, plus unfolding.

Symmetric metrics: each p_j increases strictly between consecutive poles, so
every inter-pole interval holds exactly one root and plain bisection on the
sign of p_j converges to it.  Dirichlet levels are added from the
multiplicity rule.

Generic metrics: M(k) is non-decreasing in k between poles (its k-derivative
is a sum of positive semidefinite edge blocks) and gains exactly one negative
eigenvalue at every pole crossing.  The number of eigenvalues in (0, k) is
therefore ``n - 1 + sum_e floor(k L_e / pi) - neg(M(k))``, an exact integer
count used to isolate roots before refining them on the sign of det M.
"""
from __future__ import annotations

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .errors import (
    DimensionTooSmall,
    EmptySpectrum,
    MonotonicityViolation,
    SymmetricMetricWarning,
    WeylCountMismatch,
)
from .graph import MetricGraph, dirichlet_array, weyl_estimate
from .secular import RepIndex, class_phases, p_values, pole_array, representations, secular_matrices

REP, DIRICHLET, GENERIC = 0, 1, 2
KIND_NAMES = {REP: "rep", DIRICHLET: "dirichlet", GENERIC: "generic"}
ROOT_RTOL = 1e-12
_CHUNK = 4096


def max_workers() -> int:
    try:
        return max(1, int(os.environ.get("CIRC_THREADS", "1")))
    except ValueError:
        return 1


@dataclass(frozen=True)
class SpectrumEntry:
    k: float
    multiplicity: int
    kind: str
    rep_index: int | None = None
    edge_class: int | None = None
    harmonic_m: int | None = None


@dataclass(frozen=True)
class WeylCheck:
    kmin: float
    kmax: float
    expected: float
    count: int
    bound: float

    @property
    def residual(self) -> float:
        return self.count - self.expected

    @property
    def ok(self) -> bool:
        return abs(self.residual) <= self.bound


class Spectrum:
    """Sorted k-values with multiplicities and provenance, stored column-wise.

    Iterating yields :class:`SpectrumEntry` objects; the numpy columns are
    available directly for bulk work.
    """

    def __init__(self, graph, k, multiplicity, kind, rep_index=None, edge_class=None,
                 harmonic_m=None, kmin=0.0, kmax=None, weyl=None):
        k = np.asarray(k, dtype=float)
        size = k.size

        def col(x, fill):
            if x is None:
                return np.full(size, fill, dtype=np.int64)
            return np.broadcast_to(np.asarray(x, dtype=np.int64), (size,)).copy()

        order = np.argsort(k, kind="stable")
        self.graph = graph
        self.k = k[order]
        self.multiplicity = col(multiplicity, 1)[order]
        self.kind = col(kind, GENERIC)[order]
        self.rep_index = col(rep_index, -1)[order]
        self.edge_class = col(edge_class, -1)[order]
        self.harmonic_m = col(harmonic_m, -1)[order]
        self.kmin = float(kmin)
        self.kmax = float(kmax) if kmax is not None else (float(self.k[-1]) if size else 0.0)
        self.weyl = weyl

    def __len__(self) -> int:
        return self.k.size

    def __getitem__(self, i) -> SpectrumEntry:
        def opt(x):
            return None if x < 0 else int(x)
        return SpectrumEntry(float(self.k[i]), int(self.multiplicity[i]), KIND_NAMES[int(self.kind[i])],
                             opt(self.rep_index[i]), opt(self.edge_class[i]), opt(self.harmonic_m[i]))

    def __iter__(self) -> Iterator[SpectrumEntry]:
        return (self[i] for i in range(len(self)))

    @property
    def entries(self) -> list[SpectrumEntry]:
        return list(self)

    def total(self) -> int:
        return int(self.multiplicity.sum())

    def count(self, a: float, b: float) -> int:
        """Eigenvalues (with multiplicity) with a < k <= b."""
        sel = (self.k > a) & (self.k <= b)
        return int(self.multiplicity[sel].sum())

    def levels(self) -> np.ndarray:
        return np.repeat(self.k, self.multiplicity)

    def _columns(self):
        return (self.k, self.multiplicity, self.kind, self.rep_index, self.edge_class, self.harmonic_m)

    @classmethod
    def concatenate(cls, graph, parts, kmin=0.0, kmax=None, merge_rtol=ROOT_RTOL) -> "Spectrum":
        """Join spectra; levels closer than ``merge_rtol * kmax`` are merged, summing multiplicities."""
        cols = [np.concatenate([p._columns()[i] for p in parts]) if parts else np.empty(0)
                for i in range(6)]
        s = cls(graph, *cols, kmin=kmin, kmax=kmax)
        if len(s) > 1:
            scale = merge_rtol * max(s.kmax, 1.0)
            start = np.concatenate([[True], np.diff(s.k) > scale])
            if not start.all():
                grp = np.cumsum(start) - 1
                mult = np.bincount(grp, weights=s.multiplicity).astype(np.int64)
                first = np.flatnonzero(start)
                s = cls(graph, s.k[first], mult, s.kind[first], s.rep_index[first],
                        s.edge_class[first], s.harmonic_m[first], kmin=kmin, kmax=kmax)
        return s


def _weyl(g: MetricGraph, kmin: float, kmax: float, count: int) -> WeylCheck:
    expected, bound = weyl_estimate(g, kmin, kmax)
    return WeylCheck(kmin, kmax, expected, count, bound)


# ---------------------------------------------------------------------------
# symmetric metrics
# ---------------------------------------------------------------------------

def _bisect_increasing(f, lo, hi, tol):
    """Root of f in each (lo, hi) for f increasing with a single sign change."""
    lo = lo.copy()
    hi = hi.copy()
    for _ in range(200):
        if hi.size == 0 or np.max(hi - lo) <= tol:
            break
        mid = 0.5 * (lo + hi)
        neg = f(mid) < 0
        lo = np.where(neg, mid, lo)
        hi = np.where(neg, hi, mid)
    return 0.5 * (lo + hi)


def _nearest_poles(g: MetricGraph, j: int, kmin: float, kmax: float) -> tuple[float, float]:
    span = 2.0 * math.pi / float(np.min(g.class_lengths))
    before = pole_array(g, j, max(0.0, kmin - span), kmin)
    after = pole_array(g, j, kmax, kmax + span)
    return (float(before[-1]) if before.size else 0.0), float(after[0])


def rep_root_array(g: MetricGraph, j: int, kmax: float, kmin: float = 0.0) -> np.ndarray:
    """Roots of p_j in (kmin, kmax] as a sorted array (no weights, no Dirichlet levels)."""
    roots, dropped = _rep_roots(g, j, kmax, kmin)
    if dropped.size:
        warnings.warn(f"dropped {dropped.size} roots of p_{j} lying on the Dirichlet set "
                      "(non-generic lengths)", SymmetricMetricWarning, stacklevel=2)
    return roots


def _rep_roots(g: MetricGraph, j: int, kmax: float, kmin: float) -> tuple[np.ndarray, np.ndarray]:
    """(roots off the Dirichlet set, Dirichlet points that are also roots)."""
    ell = np.asarray(g.class_lengths)
    _, flag = class_phases(g, j)
    tol = ROOT_RTOL * kmax
    prev, nxt = _nearest_poles(g, j, kmin, kmax)
    edges = np.concatenate([[prev], pole_array(g, j, kmin, kmax), [nxt]])
    lo, hi = edges[:-1], edges[1:]
    if lo[0] == 0.0 and np.all(flag == 1):
        # p_0 vanishes at the origin and increases: nothing before its first pole
        lo, hi = lo[1:], hi[1:]
    if lo.size == 0:
        return np.empty(0), np.empty(0)

    def f(k):
        return np.concatenate([p_values(g, j, k[i:i + 65536]) for i in range(0, k.size, 65536)])

    width = hi - lo
    # the probe offset must clear rounding in k*l near the pole
    eps = np.maximum(1e-10 * width, 256 * np.spacing(hi))
    probe = eps < width / 4
    bad = probe & ~((f(lo + eps) < 0) & (f(hi - eps) > 0))
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise MonotonicityViolation(f"p_{j} has no sign change on ({lo[i]!r}, {hi[i]!r})")
    roots = _bisect_increasing(f, lo, hi, tol)
    roots = roots[(roots > kmin) & (roots <= kmax)]
    # A root can sit on a Dirichlet point only where that point is not a pole
    # of p_j: even multiples for reduced classes with c = +1, odd ones for
    # c = -1.  Such roots are split off and returned as exact Dirichlet points.
    reduced = flag != 0
    if not (reduced.any() and roots.size):
        return roots, np.empty(0)
    lr = ell[reduced]
    x = np.multiply.outer(roots, lr) / math.pi
    m = np.round(x)
    hit = (np.abs(x - m) * math.pi / lr < 100 * tol) & ((m % 2 == 0) == (flag[reduced] == 1))
    on_dirichlet = hit.any(axis=1)
    h = np.argmax(hit[on_dirichlet], axis=1)
    snapped = m[on_dirichlet, h] * math.pi / lr[h]
    return roots[~on_dirichlet], snapped


def roots_p(g: MetricGraph, rep, kmax: float, kmin: float = 0.0) -> Spectrum:
    """Roots of one representation factor, weighted by the representation's degeneracy."""
    if g.class_lengths is None:
        raise ValueError("roots_p needs a symmetric metric")
    rep = rep if isinstance(rep, RepIndex) else RepIndex.of(g.n, rep)
    roots = rep_root_array(g, rep.j, kmax, kmin)
    return _weighted(g, rep, roots, kmin, kmax)


def _weighted(g, rep, roots, kmin, kmax) -> Spectrum:
    return Spectrum(g, roots, rep.weight, REP, rep_index=rep.j, kmin=kmin, kmax=kmax)


def dirichlet_j_set(n: int, a_g: int, m: int) -> list[int]:
    """{j in 0..n-1 : 2 j a_g = q n with q of the same parity as m}."""
    return [j for j in range(n) if (2 * j * a_g) % n == 0 and ((2 * j * a_g) // n) % 2 == m % 2]


def dirichlet_multiplicity(g: MetricGraph, kmax: float, kmin: float = 0.0) -> Spectrum:
    """Dirichlet levels m*pi/l_g of a symmetric metric with multiplicity |J|."""
    if g.class_lengths is None:
        raise ValueError("dirichlet_multiplicity needs a symmetric metric")
    if g.d < 2:
        raise DimensionTooSmall("the Dirichlet multiplicity rule needs d >= 2")
    ks, mult, cls_, ms = [], [], [], []
    for h, (ah, L) in enumerate(zip(g.spec.a, g.class_lengths)):
        size = {0: len(dirichlet_j_set(g.n, ah, 0)), 1: len(dirichlet_j_set(g.n, ah, 1))}
        m0 = int(math.floor(kmin * L / math.pi)) + 1
        m1 = int(math.floor(kmax * L / math.pi))
        for m in range(m0, m1 + 1):
            if size[m % 2]:
                ks.append(m * math.pi / L)
                mult.append(size[m % 2])
                cls_.append(h)
                ms.append(m)
    return Spectrum(g, ks, mult, DIRICHLET, edge_class=cls_, harmonic_m=ms, kmin=kmin, kmax=kmax)


def _map(fn, items):
    workers = max_workers()
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(workers) as ex:
        return list(ex.map(fn, items))


def coincident_dirichlet_points(g: MetricGraph, kmax: float, kmin: float = 0.0,
                                rtol: float = 1e-12) -> list[tuple[float, tuple[int, ...]]]:
    """Dirichlet points shared by two or more jump classes, with the classes involved."""
    tagged = []
    for h, L in enumerate(g.class_lengths):
        for k in dirichlet_array(np.array([L]), kmin, kmax):
            tagged.append((float(k), h))
    tagged.sort()
    groups: list[tuple[float, tuple[int, ...]]] = []
    for k, h in tagged:
        if groups and k - groups[-1][0] <= rtol * k:
            groups[-1] = (groups[-1][0], groups[-1][1] + (h,))
        else:
            groups.append((k, (h,)))
    return [grp for grp in groups if len(set(grp[1])) > 1]


def _exceptional_levels(g: MetricGraph, dirichlet: Spectrum, reps: Spectrum,
                        root_hits: np.ndarray) -> Spectrum:
    """Recount Dirichlet levels where the multiplicity rule does not apply.

    The rule assumes each Dirichlet point belongs to one class and is not
    also a root of some p_j.  At points shared by several classes, or hit by
    a representation root, the jump of the inertia-based counting function
    across the point, minus representation roots inside the same window,
    gives the multiplicity instead.
    """
    points = [(k, classes[0]) for k, classes in
              coincident_dirichlet_points(g, dirichlet.kmax, dirichlet.kmin)]
    for k in np.unique(root_hits):
        x = k * np.asarray(g.class_lengths) / math.pi
        points.append((float(k), int(np.argmin(np.abs(x - np.round(x))))))
    if not points:
        return dirichlet
    points.sort()
    keep = np.ones(len(dirichlet), dtype=bool)
    extra_k, extra_m, extra_h, extra_harm = [], [], [], []
    last = -math.inf
    for k0, h in points:
        delta = 1e-8 * k0
        if k0 - last <= delta:
            continue
        last = k0
        keep &= np.abs(dirichlet.k - k0) > delta
        lo, hi = counting_function(g, np.array([k0 - delta, k0 + delta]))
        mult = int(hi - lo) - reps.count(k0 - delta, k0 + delta)
        if mult > 0:
            extra_k.append(k0)
            extra_m.append(mult)
            extra_h.append(h)
            extra_harm.append(int(round(k0 * g.class_lengths[h] / math.pi)))
    d = dirichlet
    return Spectrum(g, np.concatenate([d.k[keep], extra_k]),
                    np.concatenate([d.multiplicity[keep], extra_m]), DIRICHLET,
                    edge_class=np.concatenate([d.edge_class[keep], extra_h]),
                    harmonic_m=np.concatenate([d.harmonic_m[keep], extra_harm]),
                    kmin=d.kmin, kmax=d.kmax)


def spectrum_symmetric(g: MetricGraph, kmax: float, kmin: float = 0.0, check: bool = True) -> Spectrum:
    """Full spectrum in (kmin, kmax] of a symmetric circulant metric with d >= 2."""
    if g.class_lengths is None:
        raise ValueError("spectrum_symmetric needs a symmetric metric")
    if g.d < 2:
        raise DimensionTooSmall("symmetric assembly needs d >= 2")
    reps_list = representations(g.n)
    found = _map(lambda rep: _rep_roots(g, rep.j, kmax, kmin), reps_list)
    reps = Spectrum.concatenate(g, [_weighted(g, rep, r, kmin, kmax) for rep, (r, _) in
                                    zip(reps_list, found)], kmin, kmax)
    root_hits = np.concatenate([hits for _, hits in found])
    dirichlet = _exceptional_levels(g, dirichlet_multiplicity(g, kmax, kmin), reps, root_hits)
    s = Spectrum.concatenate(g, [reps, dirichlet], kmin, kmax)
    s.weyl = _weyl(g, kmin, kmax, s.total())
    if check and not s.weyl.ok:
        raise WeylCountMismatch(f"{s.weyl.count} levels in ({kmin}, {kmax}], expected "
                                f"{s.weyl.expected:.3f} +- {s.weyl.bound}")
    return s


# ---------------------------------------------------------------------------
# generic metrics
# ---------------------------------------------------------------------------

def _chunked(fn, ks):
    if ks.size == 0:
        return np.empty(0, dtype=np.int64)
    return np.concatenate([fn(ks[i:i + _CHUNK]) for i in range(0, ks.size, _CHUNK)])


def negative_count(g: MetricGraph, ks) -> np.ndarray:
    """Number of negative eigenvalues of M(k) for each k."""
    ks = np.asarray(ks, dtype=float)
    return _chunked(lambda kk: (np.linalg.eigvalsh(secular_matrices(g, kk)) < 0).sum(axis=1), ks)


def counting_function(g: MetricGraph, ks) -> np.ndarray:
    """Eigenvalues in (0, k) for k off the Dirichlet set (generic metrics)."""
    ks = np.asarray(ks, dtype=float)
    poles = np.floor(np.multiply.outer(ks, g.lengths) / math.pi).sum(axis=-1).astype(np.int64)
    return g.n - 1 + poles - negative_count(g, ks)


def _off_poles(g: MetricGraph, k: np.ndarray, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Nudge points that fall on the Dirichlet set towards the interval interior."""
    s = np.abs(np.sin(np.multiply.outer(k, g.lengths))).min(axis=-1)
    bad = s < 1e-11
    if bad.any():
        k = k.copy()
        k[bad] = k[bad] + 1e-3 * (hi[bad] - lo[bad])
    return k


def spectrum_generic(g: MetricGraph, kmax: float, kmin: float = 0.0, check: bool = True) -> Spectrum:
    """Roots of det M(k) in (kmin, kmax] for incommensurate edge lengths."""
    if g.is_symmetric:
        warnings.warn("symmetric lengths passed to the generic solver; Dirichlet levels are "
                      "invisible to det M(k). Use spectrum_symmetric.", SymmetricMetricWarning,
                      stacklevel=2)
    tol = ROOT_RTOL * kmax
    poles = dirichlet_array(g.lengths, kmin, kmax)
    poles = poles[poles < kmax]

    # sample points: both sides of every pole plus the window ends
    gaps = np.diff(np.concatenate([[kmin], poles, [kmax]]))
    delta = 1e-8 * np.minimum(gaps[:-1], gaps[1:])
    pts = np.concatenate([[kmin], np.column_stack([poles - delta, poles + delta]).ravel(), [kmax]])
    pts = _off_poles(g, pts, pts, pts + 1e-6 * max(kmax - kmin, 1.0))
    counts = np.empty(pts.size, dtype=np.int64)
    counts[1:] = counting_function(g, pts[1:])
    counts[0] = 0 if kmin == 0 else counting_function(g, pts[:1])[0]

    lo, hi = pts[:-1], pts[1:]
    nlo, nhi = counts[:-1], counts[1:]
    if np.any(nhi < nlo):
        i = int(np.flatnonzero(nhi < nlo)[0])
        raise MonotonicityViolation(f"counting function decreases on ({lo[i]!r}, {hi[i]!r})")
    live = nhi > nlo
    lo, hi, nlo, nhi = lo[live], hi[live], nlo[live], nhi[live]

    roots, mults = [], []

    def pole_free(a, b):
        return np.searchsorted(poles, b) == np.searchsorted(poles, a, side="right")

    for _ in range(400):
        if lo.size == 0:
            break
        done = (hi - lo) <= tol
        if done.any():
            roots.append(0.5 * (lo[done] + hi[done]))
            mults.append(nhi[done] - nlo[done])
            lo, hi, nlo, nhi = lo[~done], hi[~done], nlo[~done], nhi[~done]
        simple = (nhi - nlo == 1) & pole_free(lo, hi)
        if simple.any():
            r, ok = _refine_simple(g, lo[simple], hi[simple], tol)
            roots.append(r)
            mults.append(np.ones(r.size, dtype=np.int64))
            # brackets whose det sign failed to change stay on the counting path
            keep = ~simple
            keep[np.flatnonzero(simple)[~ok]] = True
            lo, hi, nlo, nhi = lo[keep], hi[keep], nlo[keep], nhi[keep]
        if lo.size == 0:
            break
        mid = _off_poles(g, 0.5 * (lo + hi), lo, hi)
        nm = counting_function(g, mid)
        nm = np.clip(nm, nlo, nhi)
        left = nm > nlo
        right = nhi > nm
        lo, hi, nlo, nhi = (np.concatenate([lo[left], mid[right]]),
                            np.concatenate([mid[left], hi[right]]),
                            np.concatenate([nlo[left], nm[right]]),
                            np.concatenate([nm[left], nhi[right]]))
    if lo.size:
        roots.append(0.5 * (lo + hi))
        mults.append(nhi - nlo)

    k = np.concatenate(roots) if roots else np.empty(0)
    m = np.concatenate(mults) if mults else np.empty(0, dtype=np.int64)
    s = Spectrum(g, k, m, GENERIC, kmin=kmin, kmax=kmax)
    s.weyl = _weyl(g, kmin, kmax, s.total())
    expected_total = int(counts[-1] - counts[0])
    if s.total() != expected_total:
        raise WeylCountMismatch(f"{s.total()} roots located in ({kmin}, {kmax}] but the count "
                                f"function gives {expected_total}")
    if check and not s.weyl.ok:
        raise WeylCountMismatch(f"{s.total()} roots in ({kmin}, {kmax}]; Weyl expects "
                                f"{s.weyl.expected:.3f} +- {s.weyl.bound}")
    return s


def _signed_logdet(g, ks):
    ks = np.asarray(ks, dtype=float)
    sign, logabs = np.empty(ks.size), np.empty(ks.size)
    for i in range(0, ks.size, _CHUNK):
        sign[i:i + _CHUNK], logabs[i:i + _CHUNK] = np.linalg.slogdet(secular_matrices(g, ks[i:i + _CHUNK]))
    return sign, logabs


def _refine_simple(g, lo, hi, tol):
    """Single sign change of det M in each (lo, hi): Illinois iteration.

    det M is analytic inside a pole-free bracket, so the regula falsi step
    converges superlinearly.  Values are rescaled per bracket by the endpoint
    magnitudes to stay finite, and a bisection step is forced whenever a
    bracket fails to halve within three steps.  Returns (roots, ok) where ``ok`` marks brackets
    whose endpoint signs actually differ.
    """
    a, b = lo.copy(), hi.copy()
    sa, la = _signed_logdet(g, a)
    sb, lb = _signed_logdet(g, b)
    ok = sa * sb < 0
    a, b, sa, la, sb, lb = a[ok], b[ok], sa[ok], la[ok], sb[ok], lb[ok]
    ref = 0.5 * (la + lb)
    fa, fb = sa * np.exp(la - ref), sb * np.exp(lb - ref)
    side = np.zeros(a.size, dtype=np.int8)
    width = b - a
    active = np.ones(a.size, dtype=bool)
    for it in range(200):
        active &= (b - a) > tol
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        aa, bb, ffa, ffb = a[idx], b[idx], fa[idx], fb[idx]
        x = bb - ffb * (bb - aa) / (ffb - ffa)
        # every third step the bracket must have halved, otherwise bisect
        checkpoint = it % 3 == 2
        stalled = checkpoint & ((bb - aa) > 0.5 * width[idx])
        bad = ~np.isfinite(x) | (x <= aa) | (x >= bb) | stalled
        x = np.where(bad, 0.5 * (aa + bb), x)
        if checkpoint:
            width[idx] = bb - aa
        sx, lx = _signed_logdet(g, x)
        fx = sx * np.exp(lx - ref[idx])
        same_as_b = fx * ffb > 0
        zero = fx == 0
        # replace b
        nb = np.where(same_as_b, x, bb)
        nfb = np.where(same_as_b, fx, ffb)
        na = np.where(same_as_b, aa, x)
        nfa = np.where(same_as_b, ffa, fx)
        # Illinois: halve the stale endpoint value when the same side is kept twice
        s_new = np.where(same_as_b, 1, -1).astype(np.int8)
        nfa = np.where(same_as_b & (side[idx] == 1), 0.5 * nfa, nfa)
        nfb = np.where(~same_as_b & (side[idx] == -1), 0.5 * nfb, nfb)
        na = np.where(zero, x, na)
        nb = np.where(zero, x, nb)
        a[idx], b[idx], fa[idx], fb[idx], side[idx] = na, nb, nfa, nfb, s_new
    return 0.5 * (a + b), ok


# ---------------------------------------------------------------------------
# unfolding
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnfoldedSpectrum:
    values: np.ndarray
    density_used: float

    def __len__(self) -> int:
        return self.values.size


UNFOLD_MODES = ("full", "interior", "edge")


def unfold_density(g: MetricGraph, mode: str) -> float:
    """Mean level density per unit k used to unfold."""
    L = g.total_length
    if mode == "full":
        return L / math.pi
    if mode == "interior":
        return L / (math.pi * g.n)
    if mode == "edge":
        return L / (2 * math.pi * g.n)
    raise ValueError(f"unknown unfolding mode {mode!r}; expected one of {UNFOLD_MODES}")


def unfold(s, mode: str = "full", graph: MetricGraph | None = None) -> UnfoldedSpectrum:
    """Rescale k by the Weyl density so the mean spacing is one.

    ``full`` expands multiplicities; the subspectrum modes (``interior`` for
    0 < j < n/2, ``edge`` for j = 0 or n/2) use each root once.
    """
    if isinstance(s, Spectrum):
        graph = graph or s.graph
        k = s.levels() if mode == "full" else s.k
    else:
        items = list(s) if not isinstance(s, np.ndarray) else s
        if len(items) and isinstance(items[0], SpectrumEntry):
            items = [e.k for e in items]
        k = np.sort(np.asarray(items, dtype=float))
    if graph is None:
        raise ValueError("unfolding a bare array needs the graph")
    if k.size == 0:
        raise EmptySpectrum("nothing to unfold")
    rho = unfold_density(graph, mode)
    return UnfoldedSpectrum(k * rho, rho)
