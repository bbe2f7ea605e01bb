"""Spectral zeta function, zeta-regularized determinant and vacuum energy.

Everything is evaluated on the imaginary axis k = i t.  Each secular factor
is normalized as ``u(t) = t**sigma * fhat(t)`` so that ``u(0)`` is finite and
nonzero; the integral over (0, 1) uses ``d/dt log u`` and the one over
(1, T) uses ``d/dt log fhat``.  The difference between the two normalizations
is the rational term ``sigma / (2 s)``.  Dirichlet levels enter through the
pole term ``zeta_R(2s) * sum_e (pi / L_e)**(-2s)``.

Both integrands are evaluated from closed-form derivatives; on (0, 1) they are
written as ``t * h(t)`` with ``h`` even and finite at zero, which lets the
quadrature absorb the ``t**(1 - 2s)`` endpoint behaviour as an algebraic
weight.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
import scipy.integrate
import scipy.linalg

from . import _hyper
from .errors import (
    ArgumentOutOfRange,
    DegenerateC,
    NearSingularMhat,
    PoleAtOne,
    QuadratureFailure,
    ZetaError,
)
from .graph import MetricGraph
from .secular import class_phases, representations, scaled_mhat

QUAD_EPSABS = 1e-13
QUAD_EPSREL = 1e-12
QUAD_LIMIT = 200
ZETA_PRIME_STEP = 1e-4
C_STEPS = (1e-2, 5e-3, 2.5e-3, 1.25e-3)
C_RTOL = 1e-8
FORMULATIONS = ("auto", "symmetric", "generic")


# ---------------------------------------------------------------------------
# Riemann zeta
# ---------------------------------------------------------------------------

_BORWEIN_TERMS = 64


@lru_cache(maxsize=None)
def _borwein_weights(n: int = _BORWEIN_TERMS) -> np.ndarray:
    # d_k = n * sum_{i<=k} (n+i-1)! 4^i / ((n-i)! (2i)!), kept exact until the final ratio
    d, acc = [], Fraction(0)
    for i in range(n + 1):
        acc += Fraction(math.factorial(n + i - 1) * 4 ** i, math.factorial(n - i) * math.factorial(2 * i))
        d.append(n * acc)
    dn = d[n]
    return np.array([float((d[k] - dn) / dn) * (-1) ** k for k in range(n)])


def _eta(s: float) -> float:
    w = _borwein_weights()
    terms = w * np.arange(1, w.size + 1, dtype=float) ** (-s)
    return -math.fsum(terms)


def riemann_zeta(s: float) -> float:
    """Riemann zeta function for real ``s`` (accelerated alternating series)."""
    s = float(s)
    if s == 1.0:
        raise PoleAtOne("zeta_R has a pole at s = 1")
    # the reflection route loses digits through zeta(1 - s) near the pole, so the
    # series (still accurate there) covers -1 < s < 0
    if s <= -1.0:
        if s == math.floor(s) and int(s) % 2 == 0:
            return 0.0  # trivial zeros
        return (2.0 ** s * math.pi ** (s - 1.0) * math.sin(math.pi * s / 2.0)
                * math.gamma(1.0 - s) * riemann_zeta(1.0 - s))
    # 1 - 2**(1-s) computed without cancellation near s = 1
    return _eta(s) / -math.expm1((1.0 - s) * math.log(2.0))


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZetaParts:
    pole: float
    integral01: float
    integral1inf: float
    rational: float

    def total(self) -> float:
        return math.fsum((self.pole, self.integral01, self.integral1inf, self.rational))


@dataclass(frozen=True)
class ZetaValue:
    s: float
    value: float
    quadrature_error: float
    parts: ZetaParts


@dataclass(frozen=True)
class DetResult:
    value: float
    method: str  # "closed_form" or "numeric_zeta_prime"
    c_coefficient: float | None = None


# ---------------------------------------------------------------------------
# integrands
# ---------------------------------------------------------------------------

class _SymmetricFactor:
    """fhat_j for one representation of a symmetric metric."""

    def __init__(self, g: MetricGraph, j: int, weight: int):
        self.ell = np.asarray(g.class_lengths, dtype=float)
        self.c, self.flag = class_phases(g, j)
        self.j = j
        self.weight = weight
        # j = 0 behaves like t near the origin, every other j like 1/t
        self.sigma = -1 if np.all(self.flag == 1) else 1

    def small(self, t: float) -> float:
        """(d/dt log u) / t with u = t**sigma * fhat."""
        ell, c, flag = self.ell, self.c, self.flag
        plus, minus, gen = flag == 1, flag == -1, flag == 0
        x_half = t * ell / 2
        x_full = t * ell
        u = 0.0
        du = 0.0
        if self.sigma == -1:
            u = np.sum(ell / 2 * _hyper.tanhc(x_half))
            du = np.sum((ell / 2) ** 3 * _hyper.tanhc_d(x_half))
            return float(du / u)
        lp, lm, lg, cg = ell[plus], ell[minus], ell[gen], c[gen]
        u += np.sum(t * t * lp / 2 * _hyper.tanhc(x_half[plus]))
        du += np.sum(lp * _hyper.tanhc(x_half[plus]) + t * t * (lp / 2) ** 3 * _hyper.tanhc_d(x_half[plus]))
        u += np.sum(2 / lm * _hyper.xcoth(x_half[minus]))
        du += np.sum(lm / 2 * _hyper.xcoth_d(x_half[minus]))
        u += np.sum((_hyper.xcoth(x_full[gen]) - cg * _hyper.xcsch(x_full[gen])) / lg)
        du += np.sum(lg * (_hyper.xcoth_d(x_full[gen]) - cg * _hyper.xcsch_d(x_full[gen])))
        return float(du / u)

    def large(self, t: float) -> float:
        """d/dt log fhat."""
        ell, c, flag = self.ell, self.c, self.flag
        f = 0.0
        df = 0.0
        for L, ch, fl in zip(ell, c, flag):
            if fl == 1:
                x = t * L / 2
                f += math.tanh(x)
                df += L / 2 * float(_hyper.sech2(x))
            elif fl == -1:
                x = t * L / 2
                f += float(_hyper.coth(x))
                df -= L / 2 * float(_hyper.csch(x)) ** 2
            else:
                x = t * L
                cs, ct = float(_hyper.csch(x)), float(_hyper.coth(x))
                f += ct - ch * cs
                df += -L * cs * cs + ch * L * cs * ct
        return df / f


class _GenericFactor:
    """det Mhat(t) for an arbitrary metric, handled through t * Mhat(t).

    Near zero, t * Mhat(t) has the constant vector as an approximate null
    vector.  Writing it in the basis (u, V) with u = 1/sqrt(n) gives
    det = t**2 det(C) beta with C = V^T A V and beta = alpha - t**2 b^T C^-1 b,
    all smooth and nondegenerate at t = 0.
    """

    weight = 1

    def __init__(self, g: MetricGraph):
        self.g = g
        self.n = g.n
        self.L = np.asarray(g.lengths, dtype=float)
        self.u = g.spec.edges[:, 0]
        self.v = g.spec.edges[:, 1]
        self.V = scipy.linalg.null_space(np.ones((1, self.n)))
        self.sigma = self.n - 2

    def _edge_matrix(self, diag_edge: np.ndarray, off_edge: np.ndarray) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        a[self.u, self.v] = off_edge
        a[self.v, self.u] = off_edge
        dg = np.zeros(self.n)
        np.add.at(dg, self.u, diag_edge)
        np.add.at(dg, self.v, diag_edge)
        a[np.arange(self.n), np.arange(self.n)] = dg
        return a

    def _vertex_sum(self, edge_values: np.ndarray) -> np.ndarray:
        r = np.zeros(self.n)
        np.add.at(r, self.u, edge_values)
        np.add.at(r, self.v, edge_values)
        return r

    def deflated(self, t: float):
        """(C, alpha, b) of the deflated t * Mhat(t)."""
        L, n, V = self.L, self.n, self.V
        w = L / 2 * _hyper.tanhc(t * L / 2)
        A = scaled_mhat(self.g, t)
        alpha = -2.0 / n * np.sum(w)
        b = -V.T @ self._vertex_sum(w) / math.sqrt(n)
        return V.T @ A @ V, alpha, b

    def reduced_value(self, t: float) -> tuple[float, float]:
        """(sign, log|det(t Mhat)/t**2|), smooth through t = 0."""
        C, alpha, b = self.deflated(t)
        sc, lc = np.linalg.slogdet(C)
        beta = alpha - t * t * b @ np.linalg.solve(C, b)
        return float(sc * math.copysign(1.0, beta)), float(lc + math.log(abs(beta)))

    def small(self, t: float) -> float:
        L, n, V = self.L, self.n, self.V
        C, alpha, b = self.deflated(t)
        dw = (L / 2) ** 3 * _hyper.tanhc_d(t * L / 2)
        dalpha = -2.0 / n * np.sum(dw)
        db = -V.T @ self._vertex_sum(dw) / math.sqrt(n)
        dA = self._edge_matrix(-L * _hyper.xcoth_d(t * L), L * _hyper.xcsch_d(t * L))
        dC = V.T @ dA @ V
        cf = _cho(-C, t)
        cinv_b = -scipy.linalg.cho_solve(cf, b)
        btcb = b @ cinv_b
        beta = alpha - t * t * btcb
        tr = -np.trace(scipy.linalg.cho_solve(cf, dC))
        dbeta = dalpha - 2 * btcb - t * t * (2 * db @ cinv_b - cinv_b @ dC @ cinv_b)
        return float(tr + dbeta / beta)

    def large(self, t: float) -> float:
        x = t * self.L
        cs, ct = _hyper.csch(x), _hyper.coth(x)
        mhat = self._edge_matrix(-ct, cs)
        dmhat = self._edge_matrix(self.L * cs * cs, -self.L * cs * ct)
        cf = _cho(-mhat, t)
        return float(-np.trace(scipy.linalg.cho_solve(cf, dmhat)))


def _cho(neg_matrix: np.ndarray, t: float):
    try:
        return scipy.linalg.cho_factor(neg_matrix)
    except np.linalg.LinAlgError as exc:
        raise NearSingularMhat(f"imaginary-axis secular matrix is not definite at t = {t!r}") from exc


def _factors(g: MetricGraph, formulation: str):
    if formulation not in FORMULATIONS:
        raise ValueError(f"formulation must be one of {FORMULATIONS}")
    if formulation == "auto":
        formulation = "symmetric" if g.is_symmetric else "generic"
    if formulation == "symmetric":
        if not g.is_symmetric:
            raise ValueError("symmetric formulation needs per-class lengths")
        return [_SymmetricFactor(g, r.j, r.weight) for r in representations(g.n)]
    return [_GenericFactor(g)]


TAIL_DECAY_LENGTHS = 40.0


def _tail_end(g: MetricGraph) -> float:
    # integrands decay like exp(-t min L); 40 decay lengths leave a tail below 1e-16
    return max(TAIL_DECAY_LENGTHS / float(np.min(g.lengths)), TAIL_DECAY_LENGTHS)


def _quad(fn, a, b, **kw) -> tuple[float, float]:
    with warnings.catch_warnings():
        warnings.simplefilter("error", scipy.integrate.IntegrationWarning)
        try:
            val, err = scipy.integrate.quad(fn, a, b, epsabs=QUAD_EPSABS, epsrel=QUAD_EPSREL,
                                            limit=QUAD_LIMIT, **kw)
        except scipy.integrate.IntegrationWarning as exc:
            raise QuadratureFailure(f"quadrature on ({a}, {b}) did not converge: {exc}") from exc
    return val, err


def _bracket_integrals(factors, s: float, T: float) -> tuple[float, float, float]:
    """Weighted sum over factors of the (0,1) and (1,T) integrals, with error."""
    i01, i1, err = [], [], 0.0
    for f in factors:
        v0, e0 = _quad(f.small, 0.0, 1.0, weight="alg", wvar=(1.0 - 2.0 * s, 0.0))
        v1, e1 = _quad(lambda t: t ** (-2.0 * s) * f.large(t), 1.0, T)
        i01.append(f.weight * v0)
        i1.append(f.weight * v1)
        err += f.weight * (e0 + e1)
    return math.fsum(i01), math.fsum(i1), err


def pole_term(g: MetricGraph, s: float) -> float:
    """Dirichlet contribution zeta_R(2s) * sum over edges of (pi/L)**(-2s)."""
    if g.is_symmetric:
        edge_sum = g.n * math.fsum((math.pi / L) ** (-2.0 * s) for L in g.class_lengths)
    else:
        edge_sum = math.fsum((math.pi / L) ** (-2.0 * s) for L in g.lengths)
    return riemann_zeta(2.0 * s) * edge_sum


def _check_s(s: float) -> None:
    if not s < 1.0:
        raise ArgumentOutOfRange(f"the integral representation needs s < 1, got {s}")
    if s == 0.5:
        raise ArgumentOutOfRange("s = 1/2 is a pole of the spectral zeta function")


def zeta(g: MetricGraph, s: float, formulation: str = "auto") -> ZetaValue:
    """Spectral zeta function sum' k**(-2s) for s < 1, s != 1/2."""
    s = float(s)
    _check_s(s)
    factors = _factors(g, formulation)
    i01, i1, err = _bracket_integrals(factors, s, _tail_end(g))
    pref = math.sin(math.pi * s) / math.pi
    sigma = sum(f.weight * f.sigma for f in factors)
    # pref * sigma / (2s) written through sinc so that s = 0 is allowed
    parts = ZetaParts(pole_term(g, s), pref * i01, pref * i1, sigma * float(np.sinc(s)) / 2.0)
    return ZetaValue(s, parts.total(), abs(pref) * err, parts)


def zeta_symmetric(g: MetricGraph, s: float) -> ZetaValue:
    return zeta(g, s, "symmetric")


def zeta_generic(g: MetricGraph, s: float) -> ZetaValue:
    return zeta(g, s, "generic")


def pole_term_derivative(g: MetricGraph, h: float = ZETA_PRIME_STEP, richardson: bool = True) -> float:
    """d/ds of the pole term at s = 0 by central differences."""
    def central(step):
        return (pole_term(g, step) - pole_term(g, -step)) / (2.0 * step)
    d1 = central(h)
    if not richardson:
        return d1
    return (4.0 * central(h / 2.0) - d1) / 3.0


def zeta_prime_at_zero(g: MetricGraph, formulation: str = "auto", h: float = ZETA_PRIME_STEP) -> float:
    """zeta'(0).

    The prefactor sin(pi s)/pi vanishes at 0 with unit slope, so the integral
    part contributes the bracketed integrals at s = 0; the rational term is
    even in s and contributes nothing.
    """
    factors = _factors(g, formulation)
    i01, i1, _ = _bracket_integrals(factors, 0.0, _tail_end(g))
    return pole_term_derivative(g, h) + i01 + i1


def determinant_numeric(g: MetricGraph, formulation: str = "auto") -> DetResult:
    return DetResult(math.exp(-zeta_prime_at_zero(g, formulation)), "numeric_zeta_prime")


# ---------------------------------------------------------------------------
# determinant closed forms
# ---------------------------------------------------------------------------

def leading_coefficient_c(g: MetricGraph) -> float:
    """lim_{t->0} det[t Mhat(t)] / t**2 by Richardson extrapolation in t**2."""
    factor = _GenericFactor(g)
    vals = []
    for t in C_STEPS:
        sgn, logabs = factor.reduced_value(t)
        vals.append(sgn * math.exp(logabs))
    table = [vals]
    for level in range(1, len(vals)):
        prev = table[-1]
        q = 4.0 ** level
        table.append([(q * prev[i + 1] - prev[i]) / (q - 1.0) for i in range(len(prev) - 1)])
    c = table[-1][0]
    last = table[-2][-1]
    C0, alpha0, _ = factor.deflated(0.0)
    scale = abs(alpha0) * float(np.prod(np.linalg.norm(C0, axis=0)))
    if abs(c) < 1e-10 * scale:
        raise DegenerateC(f"leading coefficient {c!r} is numerically zero; perturb the lengths")
    if abs(c - last) > C_RTOL * abs(c):
        raise ZetaError(f"extrapolation of the leading coefficient did not settle ({last!r} vs {c!r})")
    return c


class _ScaledProduct:
    """Running product kept as mantissa * 2**exponent.

    Large n cannot overflow, and products of exactly representable factors
    stay exact (a log-sum would round them).
    """

    def __init__(self):
        self.mant, self.exp = 1.0, 0

    def mul(self, x: float, x_exp: int = 0) -> None:
        m, e = math.frexp(self.mant * x)
        self.mant, self.exp = m, self.exp + e + x_exp

    def mul_pow(self, x: float, p: int) -> None:
        base, base_exp = math.frexp(x)
        while p:
            if p & 1:
                self.mul(base, base_exp)
            p >>= 1
            if p:
                base, e = math.frexp(base * base)
                base_exp = 2 * base_exp + e

    def div(self, other: "_ScaledProduct") -> None:
        m, e = math.frexp(self.mant / other.mant)
        self.mant, self.exp = m, self.exp + e - other.exp

    def value(self) -> float:
        return math.ldexp(self.mant, self.exp)


def _symmetric_closed_form(g: MetricGraph) -> float:
    n, d = g.n, g.d
    ell = [float(x) for x in g.class_lengths]
    a = [int(x) for x in g.spec.a]
    num = _ScaledProduct()
    num.mul(g.total_length / n, n * d - 1)
    for L in ell:
        num.mul_pow(L, n)
    for j in range(1, (n - 1) // 2 + 1):
        s_j = math.fsum((1.0 - math.cos(2.0 * math.pi * j * ah / n)) / L for ah, L in zip(a, ell))
        num.mul_pow(s_j, 2)
    if n % 2 == 0:
        num.mul(math.fsum(2.0 / L for ah, L in zip(a, ell) if ah % 2 == 1))
    den = _ScaledProduct()
    den.mul_pow(float(d), n)
    num.div(den)
    return num.value()


def determinant_closed_form(g: MetricGraph, formulation: str = "auto") -> DetResult:
    """Zeta-regularized determinant from the closed forms.

    The generic form multiplies the leading coefficient c by
    (-2**(d-1)/d)**n * prod L; it is evaluated in log-magnitude and must come
    out positive.
    """
    if formulation not in FORMULATIONS:
        raise ValueError(f"formulation must be one of {FORMULATIONS}")
    if formulation == "symmetric" or (formulation == "auto" and g.is_symmetric):
        if not g.is_symmetric:
            raise ValueError("symmetric formulation needs per-class lengths")
        return DetResult(_symmetric_closed_form(g), "closed_form")
    c = leading_coefficient_c(g)
    n, d = g.n, g.d
    sign = math.copysign(1.0, c) * (-1.0) ** n
    if sign < 0:
        raise ZetaError("closed-form determinant came out negative; numerical fault in c")
    log_det = math.log(abs(c)) + n * math.log(2.0 ** (d - 1) / d) + float(np.sum(np.log(g.lengths)))
    return DetResult(math.exp(log_det), "closed_form", c)


# ---------------------------------------------------------------------------
# vacuum energy
# ---------------------------------------------------------------------------

def vacuum_energy(g: MetricGraph, formulation: str = "auto") -> float:
    """Casimir energy (1/2) zeta(-1/2) from its explicit integral form."""
    factors = _factors(g, formulation)
    T = _tail_end(g)
    inner = []
    for f in factors:
        v0, _ = _quad(lambda t: t * t * f.small(t), 0.0, 1.0)
        v1, _ = _quad(lambda t: t * f.large(t), 1.0, T)
        inner.append(f.weight * (v0 + v1))
    inv_len = g.n * float(np.sum(1.0 / g.class_lengths)) if g.is_symmetric else float(np.sum(1.0 / g.lengths))
    sigma = sum(f.weight * f.sigma for f in factors)
    return math.fsum((sigma / (2 * math.pi), -math.pi / 24 * inv_len, -math.fsum(inner) / (2 * math.pi)))
