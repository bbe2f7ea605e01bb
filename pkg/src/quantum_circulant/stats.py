"""Spectral statistics of unfolded sequences and the reference models they are compared with."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.optimize

from .errors import DomainError, NoBracket, TooFewLevels, XmaxTooLarge

NNSD_BINS = 100
NNSD_SMAX = 4.0
R2_MIN_LEVELS = 100
R2_MAX_SPAN_FRACTION = 0.1
FIT_WINDOW = (0.02, 0.5)
FIT_C_RANGE = (0.1, 100.0)
FIT_MIN_BINS = 5
REP_CLASSES = ("interior", "edge")


def _levels(u) -> np.ndarray:
    x = getattr(u, "values", u)
    return np.sort(np.asarray(x, dtype=float))


def _gaps(u, minimum: int = 2) -> np.ndarray:
    x = _levels(u)
    if x.size < minimum:
        raise TooFewLevels(f"need at least {minimum} levels, got {x.size}")
    return np.diff(x)


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    density: np.ndarray

    @property
    def bin_centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[1:] + self.bin_edges[:-1])


def nnsd(u, bins: int = NNSD_BINS, smax: float = NNSD_SMAX) -> Histogram:
    """Histogram of nearest-neighbour spacings, normalized by the total number of gaps."""
    gaps = _gaps(u)
    counts, edges = np.histogram(gaps, bins=bins, range=(0.0, smax))
    density = counts / (gaps.size * np.diff(edges))
    return Histogram(edges, counts, density)


def integrated_nnsd(u, grid) -> np.ndarray:
    """Empirical CDF of the spacings evaluated on ``grid``."""
    gaps = np.sort(_gaps(u))
    return np.searchsorted(gaps, np.asarray(grid, dtype=float), side="right") / gaps.size


def wigner_goe(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    out = np.pi / 2 * s * np.exp(-np.pi * s * s / 4)
    return out if out.ndim else float(out)


def wigner_goe_cdf(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise DomainError("spacing must be nonnegative")
    out = -np.expm1(-np.pi * s * s / 4)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class R2Estimate:
    bin_centers: np.ndarray
    values: np.ndarray
    pair_count: int
    xmax: float
    sequence_length: int

    @property
    def bin_width(self) -> float:
        return self.xmax / self.values.size


def r2_estimate(u, xmax: float = 10.0, bins: int = 200) -> R2Estimate:
    """Two-point correlation by plain ordered-pair counting.

    A bin centred at x > 0 holds (#ordered pairs with x_i - x_j in the bin)
    / (N * width); the i = j diagonal is left out and no boundary correction
    is applied.
    """
    x = _levels(u)
    n = x.size
    if n < R2_MIN_LEVELS:
        raise TooFewLevels(f"need at least {R2_MIN_LEVELS} levels, got {n}")
    span = x[-1] - x[0]
    if xmax > R2_MAX_SPAN_FRACTION * span:
        raise XmaxTooLarge(f"xmax = {xmax} exceeds {R2_MAX_SPAN_FRACTION:.0%} of the span {span:.6g}")
    edges = np.linspace(0.0, xmax, bins + 1)
    counts = np.zeros(bins, dtype=np.int64)
    # differences at a fixed index offset grow with the offset, so stop once none fit
    for offset in range(1, n):
        d = x[offset:] - x[:-offset]
        d = d[d <= xmax]
        if d.size == 0:
            break
        counts += np.histogram(d, bins=edges)[0]
    width = xmax / bins
    return R2Estimate(0.5 * (edges[1:] + edges[:-1]), counts / (n * width), int(2 * counts.sum()),
                      float(xmax), n)


def _small_model(x, c):
    return np.log(x / c) ** 2 * x / np.pi


def r2_small_model(x, c: float):
    """Small-separation model (1/pi) ln^2(x/c) x, defined for 0 < x < c."""
    xa = np.asarray(x, dtype=float)
    if not c > 0 or np.any(xa <= 0) or np.any(xa >= c):
        raise DomainError(f"need 0 < x < c (c = {c})")
    out = _small_model(xa, c)
    return out if out.ndim else float(out)


def _rep_class(rep_class: str) -> str:
    if rep_class not in REP_CLASSES:
        raise ValueError(f"rep_class must be one of {REP_CLASSES}")
    return rep_class


def r2_large_model(x, rep_class: str = "interior"):
    """Large-separation expansion; the two classes differ only at order x**-4."""
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0):
        raise DomainError("x must be positive")
    quartic = -0.5 if _rep_class(rep_class) == "interior" else 4.0
    out = 1.0 + 2.0 / (np.pi ** 2 * xa ** 2) + quartic / (np.pi ** 4 * xa ** 4)
    return out if out.ndim else float(out)


def form_factor_theory(tau, rep_class: str = "interior"):
    """Closed-form form factor K(tau); accepts any real tau."""
    t = np.asarray(tau, dtype=float)
    rate = 2.0 if _rep_class(rep_class) == "interior" else 4.0
    out = (1.0 - t - 4.0 * t * t) * np.exp(-4.0 * t) + t * np.exp(rate * t)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class FitResult:
    c: float
    window: tuple[float, float]
    residual: float
    bins_used: int
    sensitivity: tuple[tuple[tuple[float, float], float], ...] = field(default=())


def _fit(r2: R2Estimate, window: tuple[float, float]) -> FitResult:
    xlo, xhi = window
    if not 0 < xlo < xhi:
        raise DomainError(f"bad fit window {window}")
    sel = (r2.bin_centers >= xlo) & (r2.bin_centers <= xhi)
    if sel.sum() < FIT_MIN_BINS:
        raise DomainError(f"fit window {window} holds {int(sel.sum())} bins, need {FIT_MIN_BINS}")
    x, y = r2.bin_centers[sel], r2.values[sel]

    def objective(c):
        return float(np.sum((y - _small_model(x, c)) ** 2))

    grid = np.geomspace(*FIT_C_RANGE, 241)
    vals = np.array([objective(c) for c in grid])
    i = int(np.argmin(vals))
    if i == 0 or i == grid.size - 1:
        raise NoBracket(f"no interior minimum for c in {FIT_C_RANGE}")
    res = scipy.optimize.minimize_scalar(objective, bracket=(grid[i - 1], grid[i], grid[i + 1]),
                                         method="golden", tol=1e-8)
    return FitResult(float(res.x), (float(xlo), float(xhi)), float(res.fun), int(sel.sum()))


def fit_small_c(r2: R2Estimate, window: Sequence[float] = FIT_WINDOW,
                sensitivity: bool = True) -> FitResult:
    """Least-squares fit of c in the small-separation model over ``window``.

    With ``sensitivity`` the fit is repeated on a halved and a doubled upper
    edge; windows that cannot be fitted are skipped.
    """
    window = (float(window[0]), float(window[1]))
    best = _fit(r2, window)
    if not sensitivity:
        return best
    report = []
    for alt in ((window[0], window[1] / 2), (window[0], min(2 * window[1], r2.xmax))):
        try:
            report.append((alt, _fit(r2, alt).c))
        except (DomainError, NoBracket):
            continue
    return FitResult(best.c, best.window, best.residual, best.bins_used, tuple(report))
