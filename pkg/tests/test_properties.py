"""Randomized invariants over graphs, metrics and level sequences."""
import json
import math

import mpmath
import numpy as np
import pytest
from hypothesis import HealthCheck, assume, given, settings
from hypothesis import strategies as st

from quantum_circulant import io
from quantum_circulant.graph import MetricGraph, validate_spec, weyl_estimate
from quantum_circulant.secular import assemble_M, det_M, eval_fhat, factorized_det
from quantum_circulant.solver import spectrum_generic, spectrum_symmetric
from quantum_circulant.stats import nnsd, r2_estimate
from quantum_circulant.zeta import riemann_zeta, vacuum_energy, zeta

SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def jump_sets(draw, n_min=5, n_max=13, min_d=1):
    n = draw(st.integers(n_min, n_max))
    pool = list(range(1, (n - 1) // 2 + 1))
    a = sorted(draw(st.lists(st.sampled_from(pool), min_size=min(min_d, len(pool)),
                             max_size=len(pool), unique=True)))
    assume(math.gcd(*a, n) == 1)
    return validate_spec(n, a)


@st.composite
def symmetric_graphs(draw, min_d=2):
    spec = draw(jump_sets(min_d=min_d))
    assume(spec.d >= min_d)
    lengths = draw(st.lists(st.floats(1.0, 1.5), min_size=spec.d, max_size=spec.d))
    return MetricGraph.symmetric(spec, lengths)


@st.composite
def generic_graphs(draw):
    spec = draw(jump_sets(n_max=9))
    return MetricGraph.random_generic(spec, seed=draw(st.integers(0, 2 ** 31)))


def _off_pole(g, k):
    return np.min(np.abs(np.sin(k * np.asarray(g.lengths)))) > 1e-3


@SETTINGS
@given(symmetric_graphs(), st.floats(0.1, 40.0))
def test_factorization_identity(g, k):
    assume(_off_pole(g, k))
    dm = det_M(g, k)
    assert abs(dm - factorized_det(g, k)) <= 1e-10 * max(1.0, abs(dm))


@SETTINGS
@given(generic_graphs(), st.floats(0.1, 40.0))
def test_secular_matrix_symmetric(g, k):
    assume(_off_pole(g, k))
    m = assemble_M(g, k).entries
    assert np.array_equal(m, m.T)


@SETTINGS
@given(symmetric_graphs(), st.floats(5.0, 40.0))
def test_weyl_bound_symmetric(g, kmax):
    s = spectrum_symmetric(g, kmax)
    expected, bound = weyl_estimate(g, 0.0, kmax)
    assert abs(s.total() - expected) <= bound


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(generic_graphs(), st.floats(5.0, 25.0))
def test_weyl_bound_generic(g, kmax):
    s = spectrum_generic(g, kmax)
    expected, bound = weyl_estimate(g, 0.0, kmax)
    assert abs(s.total() - expected) <= bound


@SETTINGS
@given(symmetric_graphs(), st.floats(1e-3, 30.0))
def test_fhat_positive(g, t):
    assert all(eval_fhat(g, j, t) > 0 for j in range(g.n // 2 + 1))


@SETTINGS
@given(st.lists(st.floats(0.0, 1e3, allow_nan=False), min_size=3, max_size=200, unique=True),
       st.floats(-500.0, 500.0))
def test_nnsd_shift_invariance(x, shift):
    x = np.sort(np.array(x))
    # shifting by a dyadic amount keeps every gap bit-for-bit
    shift = math.ldexp(round(math.ldexp(shift, 10)), -10)
    assert np.array_equal(nnsd(x).counts, nnsd(x + shift).counts)


@SETTINGS
@given(st.integers(0, 2 ** 31), st.integers(100, 2000), st.floats(0.5, 8.0), st.integers(5, 200))
def test_r2_nonnegative_and_counts(seed, n, xmax, bins):
    x = np.cumsum(np.random.default_rng(seed).exponential(1.0, n))
    assume(xmax < 0.25 * (x[-1] - x[0]))
    est = r2_estimate(x, xmax=xmax, bins=bins)
    assert np.all(est.values >= 0)
    # mass times n counts each unordered pair once; pair_count is over ordered pairs
    assert 2 * np.sum(est.values) * est.bin_width * x.size == pytest.approx(est.pair_count, rel=1e-9)


@SETTINGS
@given(st.floats(-6.0, 14.0).filter(lambda s: abs(s - 1) > 1e-3))
def test_riemann_zeta_mpmath(s):
    if abs(s) < 1e-10:
        # mpmath's reflection rounds 1 - s to 1 here; use zeta(0) + s zeta'(0)
        want = -0.5 - 0.5 * s * math.log(2 * math.pi)
    else:
        want = float(mpmath.zeta(s))
    assert abs(riemann_zeta(s) - want) <= 1e-12 * max(1.0, abs(want))


@SETTINGS
@given(symmetric_graphs(), st.floats(0.5, 3.0))
def test_spectrum_scaling(g, lam):
    kmax = 20.0
    a = spectrum_symmetric(g, kmax).levels()
    b = spectrum_symmetric(g.scaled(lam), kmax / lam).levels()
    # levels within one step of the cutoff may fall on either side after rounding
    m = min(a.size, b.size) - 2
    np.testing.assert_allclose(b[:m] * lam, a[:m], rtol=1e-10)


@settings(max_examples=8, deadline=None)
@given(symmetric_graphs(), st.floats(0.5, 3.0), st.sampled_from([-0.5, 0.25, 0.75]))
def test_zeta_scaling(g, lam, s):
    assert zeta(g.scaled(lam), s).value == pytest.approx(lam ** (2 * s) * zeta(g, s).value, rel=1e-8)


@settings(max_examples=8, deadline=None)
@given(symmetric_graphs(), st.floats(0.5, 3.0))
def test_vacuum_energy_scaling(g, lam):
    assert vacuum_energy(g.scaled(lam)) == pytest.approx(vacuum_energy(g) / lam, rel=1e-8)


@SETTINGS
@given(symmetric_graphs(min_d=1))
def test_graph_spec_round_trip(g):
    doc = json.loads(json.dumps(io.graph_to_dict(g)))
    h = io.graph_from_dict(doc)
    assert h.spec.a == g.spec.a and np.array_equal(h.lengths, g.lengths)


@settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(st.dictionaries(st.text(min_size=1, max_size=8), st.floats(allow_nan=False, allow_infinity=False)),
       st.booleans())
def test_atomic_write(tmp_path, payload, fail):
    target = tmp_path / "out.json"
    io.write_json(target, {"previous": True})
    if fail:
        with pytest.raises(RuntimeError):
            with io.atomic_output(target) as tmp:
                tmp.write_text(json.dumps(payload))
                raise RuntimeError
        assert json.loads(target.read_text()) == {"previous": True}
    else:
        io.write_json(target, payload)
        assert json.loads(target.read_text()) == payload
    assert [p.name for p in tmp_path.iterdir()] == ["out.json"]
