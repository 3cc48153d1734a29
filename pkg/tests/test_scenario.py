import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surplusinv.robust import (
    DualMeasure,
    MeasureTerm,
    assumption_dual_space_holds,
    capacity,
    is_c_null,
    pair,
    robust_norm,
)
from surplusinv.scenario import (
    ScenarioSpace,
    SpaceError,
    band_project,
    neg_part,
    order_leq,
    pos_part,
)

vals = st.floats(-100, 100, allow_nan=False)
vec3 = st.lists(vals, min_size=3, max_size=3).map(np.array)
events3 = st.lists(st.booleans(), min_size=3, max_size=3).map(lambda b: np.array(b, dtype=bool))


def two_prior_space():
    return ScenarioSpace(["w1", "w2"], [[1.0, 0.0], [0.5, 0.5]])


class TestSpace:
    def test_rejects_bad_priors(self):
        with pytest.raises(SpaceError):
            ScenarioSpace(["a", "b"], [[0.7, 0.7]])
        with pytest.raises(SpaceError):
            ScenarioSpace(["a", "b"], [[1.5, -0.5]])
        with pytest.raises(SpaceError):
            ScenarioSpace(["a", "a"], [[0.5, 0.5]])
        with pytest.raises(SpaceError):
            ScenarioSpace(["a"], [])

    def test_position_is_canonical(self):
        space = ScenarioSpace(["a", "b", "c"], [[0.5, 0.5, 0.0]])
        x = space.position([1.0, -2.0, 7.0])
        assert x.tolist() == [1.0, -2.0, 0.0]
        assert not x.flags.writeable
        with pytest.raises(SpaceError):
            space.position([1.0, 2.0])
        with pytest.raises(SpaceError):
            space.position([1.0, np.nan, 0.0])

    def test_prior_lookup_by_name(self):
        space = ScenarioSpace(["a", "b"], [[1, 0], [0.5, 0.5]], ["P", "Q"])
        assert space.prior("Q").tolist() == [0.5, 0.5]
        assert space.prior_index("Q") == 1
        with pytest.raises(SpaceError):
            space.prior("R")

    def test_event_from_labels_and_indices(self):
        space = ScenarioSpace.uniform(3)
        assert space.event(["w1", 2]).tolist() == [True, False, True]
        assert space.names(space.event([1])) == ["w2"]


class TestLattice:
    def test_neg_part_examples(self):
        assert neg_part(np.array([-1.0, 2.0])).tolist() == [1.0, 0.0]
        assert neg_part(np.array([3.0, 0.0])).tolist() == [0.0, 0.0]
        assert pos_part(np.array([-3.0, -1.0])).tolist() == [0.0, 0.0]

    def test_neg_part_has_no_signed_zero(self):
        assert not np.any(np.signbit(neg_part(np.array([0.0, 2.0]))))

    def test_band_project_examples(self):
        space = ScenarioSpace.uniform(3)
        assert band_project(np.array([5.0, -2.0]), np.array([True, False])).tolist() == [5.0, 0.0]
        x = np.array([1.0, 2.0, 3.0])
        assert band_project(x, np.ones(3, bool)).tolist() == x.tolist()
        assert band_project(x, space.event(["w2", "w3"])).tolist() == [0.0, 2.0, 3.0]

    def test_order_examples(self):
        assert order_leq(np.zeros(2), np.array([1.0, 2.0]))
        assert not order_leq(np.array([0.0, 5.0]), np.array([1.0, 2.0]))
        assert order_leq(np.array([0.0, 5.0]), np.array([1.0, 2.0]), np.array([True, False]))

    @given(vec3)
    def test_parts_decompose(self, x):
        p, n = pos_part(x), neg_part(x)
        assert np.all(p >= 0) and np.all(n >= 0)
        assert np.array_equal(p - n, x)
        assert np.all(np.minimum(p, n) == 0)

    @given(vec3, events3)
    def test_band_projection_idempotent_and_complementary(self, x, e):
        b = band_project(x, e)
        assert np.array_equal(band_project(b, e), b)
        assert np.array_equal(b + band_project(x, ~e), x)

    @given(vec3, vec3, vec3, events3)
    def test_order_is_partial_order_on_support(self, x, y, z, sup):
        assert order_leq(x, x, sup)
        if order_leq(x, y, sup) and order_leq(y, x, sup):
            assert np.array_equal(x[sup], y[sup])
        if order_leq(x, y, sup) and order_leq(y, z, sup):
            assert order_leq(x, z, sup)


class TestRobust:
    def test_capacity_examples(self):
        space = two_prior_space()
        assert capacity(space, np.array([False, True])) == 0.5
        assert capacity(space, np.zeros(2, bool)) == 0.0
        assert capacity(space, np.ones(2, bool)) == 1.0

    def test_c_null_examples(self):
        only_first = ScenarioSpace(["w1", "w2"], [[1.0, 0.0]])
        assert is_c_null(only_first, np.array([False, True]))
        assert is_c_null(only_first, np.zeros(2, bool))
        assert not is_c_null(ScenarioSpace.uniform(2), np.array([True, False]))

    def test_robust_norm_examples(self):
        space = ScenarioSpace(["w1", "w2"], [[1.0, 0.0], [0.0, 1.0]])
        assert robust_norm(space, np.array([2.0, 4.0]), 1) == 4.0
        assert robust_norm(space, np.zeros(2), 1) == 0.0
        assert robust_norm(ScenarioSpace.uniform(2), np.array([2.0, 4.0]), 2) == pytest.approx(math.sqrt(10), abs=1e-12)
        assert robust_norm(space, np.array([-7.0, 3.0]), np.inf) == 7.0

    def test_pair_examples(self):
        space = ScenarioSpace.uniform(2)
        x = np.array([2.0, 4.0])
        assert pair(x, DualMeasure(space, [MeasureTerm(0, np.ones(2))])) == pytest.approx(3.0)
        assert pair(x, DualMeasure(space, [MeasureTerm(0, np.ones(2), 0.0)])) == 0.0
        assert pair(x, DualMeasure(space, [MeasureTerm(0, np.array([1.0, 0.0]))])) == pytest.approx(1.0)

    def test_from_weights_round_trip(self):
        space = ScenarioSpace(["a", "b", "c"], [[0.5, 0.5, 0.0], [0.0, 0.4, 0.6]])
        w = np.array([0.3, -0.2, 0.7])
        mu = DualMeasure.from_weights(space, w)
        assert np.allclose(mu.canonical(), w, atol=1e-15)
        back = DualMeasure.from_json(space, mu.to_json())
        assert np.array_equal(back.canonical(), mu.canonical())

    def test_dual_space_assumption_is_trivial(self):
        assert assumption_dual_space_holds(ScenarioSpace.uniform(3))

    @given(events3, events3)
    def test_capacity_monotone(self, e, f):
        space = ScenarioSpace(["a", "b", "c"], [[0.2, 0.3, 0.5], [0.6, 0.0, 0.4]])
        assert capacity(space, e & f) <= capacity(space, e) + 1e-15

    @given(vec3, vec3, st.floats(-5, 5), st.lists(st.floats(0, 3), min_size=3, max_size=3))
    def test_pair_linear_in_position(self, x, y, a, z):
        space = ScenarioSpace(["a", "b", "c"], [[0.2, 0.3, 0.5]])
        mu = DualMeasure(space, [MeasureTerm(0, np.array(z))])
        assert pair(a * x + y, mu) == pytest.approx(a * pair(x, mu) + pair(y, mu), abs=1e-8)

    @given(vec3, st.lists(st.floats(-3, 3), min_size=3, max_size=3), st.lists(st.floats(-3, 3), min_size=3, max_size=3))
    def test_pair_linear_in_measure(self, x, z1, z2):
        space = ScenarioSpace(["a", "b", "c"], [[0.2, 0.3, 0.5], [0.5, 0.5, 0.0]])
        m1 = DualMeasure(space, [MeasureTerm(0, np.array(z1))])
        m2 = DualMeasure(space, [MeasureTerm(1, np.array(z2), 2.0)])
        assert pair(x, m1 + m2) == pytest.approx(pair(x, m1) + pair(x, m2), abs=1e-8)
        assert pair(x, m1.scale(-1.5)) == pytest.approx(-1.5 * pair(x, m1), abs=1e-8)

    @given(vec3, st.lists(st.floats(0, 10), min_size=3, max_size=3), st.lists(st.floats(0, 3), min_size=3, max_size=3))
    def test_positive_measure_is_monotone(self, x, bump, z):
        space = ScenarioSpace(["a", "b", "c"], [[0.2, 0.3, 0.5]])
        mu = DualMeasure(space, [MeasureTerm(0, np.array(z))])
        assert mu.is_positive()
        assert pair(x, mu) <= pair(x + np.array(bump), mu) + 1e-9

    @settings(max_examples=60)
    @given(vec3, vec3, st.floats(-5, 5), st.sampled_from([1.0, 2.0, 3.0, np.inf]))
    def test_robust_norm_is_a_norm(self, x, y, a, p):
        space = ScenarioSpace(["a", "b", "c"], [[0.2, 0.3, 0.5], [0.6, 0.0, 0.4]])
        nx, ny = robust_norm(space, x, p), robust_norm(space, y, p)
        assert robust_norm(space, x + y, p) <= nx + ny + 1e-8
        assert robust_norm(space, a * x, p) == pytest.approx(abs(a) * nx, abs=1e-8)
