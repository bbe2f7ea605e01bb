import math
import warnings

import numpy as np
import pytest

from quantum_circulant.errors import (
    Disconnected,
    EmptyJumpSet,
    InvalidMetric,
    InvalidProbability,
    JumpOutOfRange,
    NonPrimeWarning,
    NotStrictlyIncreasing,
)
from quantum_circulant.graph import (
    MetricGraph,
    dirichlet_points,
    random_spec,
    validate_spec,
    weyl_estimate,
)


class TestValidateSpec:
    def test_c6_12(self):
        spec = validate_spec(6, [1, 2])
        assert spec.d == 2
        assert spec.n_edges == 12

    def test_disconnected(self):
        with pytest.raises(Disconnected):
            validate_spec(6, [2])

    def test_double_edge_rejected(self):
        with pytest.raises(JumpOutOfRange):
            validate_spec(6, [3])

    @pytest.mark.parametrize("a", [[2, 1], [1, 1]])
    def test_order(self, a):
        with pytest.raises(NotStrictlyIncreasing):
            validate_spec(7, a)

    def test_zero_jump(self):
        with pytest.raises(JumpOutOfRange):
            validate_spec(7, [0, 1])

    def test_empty(self):
        with pytest.raises(EmptyJumpSet):
            validate_spec(7, [])

    def test_degree_and_edges(self):
        spec = validate_spec(11, [1, 3, 4])
        assert all(len(spec.neighbors(i)) == 6 for i in range(11))
        deg = np.bincount(spec.edges.ravel(), minlength=11)
        assert np.all(deg == 6)
        # canonical orientation: edge h*n+i runs from i to i+a_h
        assert tuple(spec.edges[11 + 4]) == (4, 7)


class TestRandomSpec:
    def test_full_set(self):
        assert random_spec(7, 1.0, seed=123).a == (1, 2, 3)

    def test_deterministic(self):
        assert random_spec(11, 0.5, seed=42) == random_spec(11, 0.5, seed=42)

    def test_large_prime_size(self):
        spec = random_spec(7919, 0.5, seed=5)
        # Binomial(3959, 1/2): mean 1979.5, sd about 31.5
        assert abs(spec.d - 1979.5) < 5 * 31.5

    @pytest.mark.parametrize("p", [0.0, -0.1, 1.5])
    def test_bad_probability(self, p):
        with pytest.raises(InvalidProbability):
            random_spec(7, p, seed=0)

    def test_composite_warns(self):
        with pytest.warns(NonPrimeWarning):
            random_spec(9, 0.5, seed=0)

    def test_empty_after_retries(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonPrimeWarning)
            with pytest.raises(EmptyJumpSet):
                random_spec(5, 1e-12, seed=0)


class TestMetricGraph:
    def test_total_length_symmetric(self):
        g = MetricGraph.symmetric(validate_spec(6, [1, 2]), [1.0, 1.1])
        assert g.total_length == pytest.approx(12.6, rel=1e-15)
        assert g.total_length == pytest.approx(g.lengths.sum(), rel=1e-15)

    def test_generic_length_count(self):
        spec = validate_spec(5, [1, 2])
        with pytest.raises(InvalidMetric):
            MetricGraph.generic(spec, np.ones(9))

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
    def test_nonpositive_lengths(self, bad):
        with pytest.raises(InvalidMetric):
            MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, bad])

    def test_random_generic_range(self):
        g = MetricGraph.random_generic(validate_spec(7, [1, 2]), seed=1)
        assert g.lengths.size == 14
        assert np.all((g.lengths >= 1.0) & (g.lengths < 1.5))

    def test_immutable(self):
        g = MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.2])
        with pytest.raises(ValueError):
            g.lengths[0] = 3.0


class TestDirichletPoints:
    def test_symmetric_enumeration(self):
        g = MetricGraph.symmetric(validate_spec(6, [1, 2]), [1.0, 1.1])
        pts = dirichlet_points(g, 7.0)
        got = [(p.k, p.source, p.m) for p in pts]
        want = sorted([(math.pi / 1.1, 1, 1), (math.pi, 0, 1), (2 * math.pi / 1.1, 1, 2),
                       (2 * math.pi, 0, 2)])
        assert [(s, m) for _, s, m in got] == [(s, m) for _, s, m in want]
        np.testing.assert_allclose([k for k, _, _ in got], [k for k, _, _ in want], rtol=1e-15)
        assert all(p.by_class for p in pts)

    def test_below_first_harmonic(self):
        g = MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.3])
        assert dirichlet_points(g, 0.99 * math.pi / 1.3) == []

    def test_generic_families(self):
        g = MetricGraph.random_generic(validate_spec(5, [1, 2]), seed=3)
        kmax = 20.0
        pts = dirichlet_points(g, kmax)
        assert {p.source for p in pts} == set(range(10))
        for e, L in enumerate(g.lengths):
            assert sum(p.source == e for p in pts) == math.floor(kmax * L / math.pi)
        ks = [p.k for p in pts]
        assert ks == sorted(ks)


class TestWeylEstimate:
    def test_c6(self):
        g = MetricGraph.symmetric(validate_spec(6, [1, 2]), [1.0, 1.1])
        expected, bound = weyl_estimate(g, 0, 100)
        assert expected == pytest.approx(100 * 12.6 / math.pi, rel=1e-14)
        assert expected == pytest.approx(401.07, abs=0.01)
        assert bound == 20

    def test_generic_bound(self):
        g = MetricGraph.random_generic(validate_spec(6, [1, 2]), seed=0)
        assert weyl_estimate(g, 0, 1)[1] == 18

    def test_empty_interval(self):
        g = MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.2])
        assert weyl_estimate(g, 3.0, 3.0)[0] == 0.0

    def test_linear_in_total_length(self):
        g = MetricGraph.symmetric(validate_spec(5, [1, 2]), [1.0, 1.2])
        assert weyl_estimate(g.scaled(2.0), 0, 10)[0] == pytest.approx(2 * weyl_estimate(g, 0, 10)[0])
