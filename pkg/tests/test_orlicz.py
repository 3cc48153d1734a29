import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from surplusinv.orlicz import (
    OrliczError,
    OrliczFunction,
    conjugate,
    delta2_probe,
    in_heart,
    luxemburg_norm,
    luxemburg_profile,
)

UNIFORM2 = np.array([0.5, 0.5])
P3 = np.array([0.2, 0.3, 0.5])

FUNCS = [
    OrliczFunction.power(1.5),
    OrliczFunction.power(2),
    OrliczFunction.scaled_power(3, 0.5),
    OrliczFunction.exp_minus_one(),
    OrliczFunction.piecewise_linear([(0, 0), (1, 0.5), (2, 2), (4, 7)]),
    OrliczFunction.linfty(),
]
vec3 = st.lists(st.floats(-20, 20), min_size=3, max_size=3).map(np.array)


class TestConstruction:
    def test_rejects_nonconvex_custom(self):
        with pytest.raises(OrliczError):
            OrliczFunction.custom(lambda x: np.sqrt(x))

    def test_rejects_nonzero_origin(self):
        with pytest.raises(OrliczError):
            OrliczFunction.custom(lambda x: x + 1.0)

    def test_spec_round_trip(self):
        for phi in FUNCS:
            again = OrliczFunction.from_spec(phi.to_spec())
            xs = np.linspace(0, 3, 31)
            assert np.array_equal(phi(xs), again(xs))
        assert OrliczFunction.from_spec("power:2")(3.0) == 9.0

    def test_linfty_left_continuous(self):
        phi = OrliczFunction.linfty()
        assert phi(1.0) == 0.0
        assert math.isinf(phi(1.0 + 1e-12))


class TestNorm:
    def test_examples(self):
        assert luxemburg_norm([1, 3], OrliczFunction.power(2), UNIFORM2) == pytest.approx(math.sqrt(5), abs=1e-8)
        assert luxemburg_norm([1, 3], OrliczFunction.linfty(), UNIFORM2) == 3.0
        assert luxemburg_norm([0, 0], OrliczFunction.power(2), UNIFORM2) == 0.0

    def test_ignores_null_scenarios(self):
        assert luxemburg_norm([2, 100], OrliczFunction.power(1), [1.0, 0.0]) == pytest.approx(2.0, abs=1e-8)

    def test_exp_against_root_find(self):
        from scipy.optimize import brentq
        x = np.array([1.0, -2.0, 0.5])
        phi = OrliczFunction.exp_minus_one()
        want = brentq(lambda lam: float(P3 @ np.expm1(np.abs(x) / lam)) - 1.0, 0.1, 100, xtol=1e-14)
        assert luxemburg_norm(x, phi, P3) == pytest.approx(want, abs=1e-8)

    @pytest.mark.parametrize("phi", FUNCS[:-1])
    def test_bracket_condition(self, phi):
        rng = np.random.default_rng(2)
        for _ in range(30):
            x = rng.uniform(-5, 5, 3)
            lam = luxemburg_norm(x, phi, P3)
            assert luxemburg_profile(x, phi, P3, lam + 1e-6) <= 1 + 1e-6
            if lam > 1e-9:
                below = luxemburg_profile(x, phi, P3, lam - 1e-6)
                assert below >= 1 - 1e-6 or math.isinf(below)

    @settings(max_examples=40, deadline=None)
    @given(vec3, st.floats(-4, 4), st.sampled_from(range(len(FUNCS))))
    def test_homogeneous(self, x, a, k):
        phi = FUNCS[k]
        assert abs(luxemburg_norm(a * x, phi, P3) - abs(a) * luxemburg_norm(x, phi, P3)) <= 1e-8

    @settings(max_examples=40, deadline=None)
    @given(vec3, st.lists(st.floats(0, 1), min_size=3, max_size=3), st.sampled_from(range(len(FUNCS))))
    def test_lattice_monotone(self, y, shrink, k):
        phi = FUNCS[k]
        x = y * np.array(shrink)
        assert luxemburg_norm(x, phi, P3) <= luxemburg_norm(y, phi, P3) + 1e-8

    @settings(max_examples=40, deadline=None)
    @given(vec3, vec3, st.sampled_from(range(len(FUNCS))))
    def test_triangle(self, x, y, k):
        phi = FUNCS[k]
        lhs = luxemburg_norm(x + y, phi, P3)
        assert lhs <= luxemburg_norm(x, phi, P3) + luxemburg_norm(y, phi, P3) + 1e-8


class TestConjugate:
    def test_examples(self):
        assert conjugate(OrliczFunction.scaled_power(2, 0.5), 3.0) == pytest.approx(4.5, abs=1e-12)
        assert conjugate(OrliczFunction.linfty(), 2.0) == 2.0
        for phi in FUNCS:
            assert conjugate(phi, 0.0) == 0.0

    def test_negative_argument_rejected(self):
        with pytest.raises(OrliczError):
            conjugate(OrliczFunction.power(2), -1.0)

    def test_power_is_dual_power(self):
        for p in (1.5, 2.0, 3.0, 4.0):
            q = p / (p - 1)
            for y in (0.3, 1.0, 2.5):
                # (x^p)* (y) = (p-1) (y/p)^q
                assert conjugate(OrliczFunction.power(p), y) == pytest.approx((p - 1) * (y / p) ** q, rel=1e-12)

    def test_numeric_path_matches_closed_form(self):
        custom = OrliczFunction.custom(lambda x: np.asarray(x, float) ** 2)
        for y in (0.5, 1.0, 3.0, 7.0):
            assert conjugate(custom, y) == pytest.approx(y * y / 4, abs=1e-9)

    def test_numeric_path_detects_linear_growth(self):
        custom = OrliczFunction.custom(lambda x: np.asarray(x, float))
        assert conjugate(custom, 0.5) == pytest.approx(0.0, abs=1e-12)
        assert math.isinf(conjugate(custom, 2.0))

    @pytest.mark.parametrize("phi", FUNCS)
    def test_fenchel_young(self, phi):
        for x in np.linspace(0, 4, 17):
            for y in np.linspace(0, 6, 13):
                rhs = float(phi(x)) + conjugate(phi, y)
                assert x * y <= rhs + 1e-9

    def test_round_trip_for_powers(self):
        from scipy.optimize import minimize_scalar
        for p in (1.5, 2.0, 3.0):
            phi = OrliczFunction.power(p)
            for x in (0.2, 1.0, 1.7):
                # sup_y (x y - phi*(y)) over y >= 0
                r = minimize_scalar(lambda y: -(x * y - conjugate(phi, y)), bounds=(0, 50), method="bounded",
                                    options={"xatol": 1e-12})
                assert -r.fun == pytest.approx(x**p, abs=1e-6)


class TestHeart:
    def test_examples(self):
        assert in_heart([5, -7], OrliczFunction.power(2), UNIFORM2)
        assert not in_heart([1, 0], OrliczFunction.linfty(), UNIFORM2)
        assert in_heart([0, 0], OrliczFunction.linfty(), UNIFORM2)
        assert in_heart([0, 4], OrliczFunction.linfty(), [1.0, 0.0])

    def test_custom_probe(self):
        capped = OrliczFunction.custom(lambda x: np.where(np.asarray(x) <= 2, np.asarray(x, float) ** 2, np.inf))
        assert not in_heart([1, 1], capped, UNIFORM2)
        assert in_heart([1, 1], OrliczFunction.custom(lambda x: np.asarray(x, float) ** 2), UNIFORM2)


class TestDelta2:
    def test_square(self):
        rep = delta2_probe(OrliczFunction.power(2))
        assert rep.max_ratio == pytest.approx(4.0, abs=1e-9)
        assert rep.plausible
        assert delta2_probe(OrliczFunction.power(2), k=4.5).plausible

    def test_exponential_fails(self):
        rep = delta2_probe(OrliczFunction.exp_minus_one())
        assert not rep.plausible
        assert rep.max_ratio > 1e20

    def test_linfty_fails_past_half(self):
        rep = delta2_probe(OrliczFunction.linfty())
        assert not rep.plausible
        assert rep.first_failure is not None and 0.5 < rep.first_failure <= 0.52
        assert rep.to_json()["verdict"] == "delta2 fails on probe"
