import itertools

import numpy as np
import pytest

from surplusinv import acceptance as acc
from surplusinv import decomposition as dec
from surplusinv.orlicz import OrliczFunction
from surplusinv.robust import capacity
from surplusinv.scenario import ScenarioSpace

THREE = ScenarioSpace.uniform(3)
BOX = acc.box_set(THREE, [0.0, -1.0, -np.inf])


def names(d):
    return d.to_json()["E1"], d.to_json()["E2"], d.to_json()["E3"]


class TestDecompose:
    def test_box_example(self):
        d = dec.decompose(BOX)
        assert names(d) == (["w1"], ["w2"], ["w3"])
        assert not d.flags
        assert d.D_oracle([0.0, 1.0, 0.0]) and d.D_oracle([0.0, 0.4, 0.0])
        assert not d.D_oracle([0.0, 1.0 + 1e-9, 0.0])
        assert not d.D_oracle([0.0, 0.5, 0.5])

    def test_span_example(self):
        space = ScenarioSpace(["w1", "w2", "w3"], [[0.5, 0.5, 0.0]])
        d = dec.decompose(acc.span_set(space, ["w1", "w3"]))
        assert names(d) == (["w1"], [], ["w2"])

    def test_positive_cone(self):
        assert names(dec.decompose(acc.positive_cone(THREE))) == (["w1", "w2", "w3"], [], [])

    def test_reach_matches_shortfall_closed_form(self):
        space = ScenarioSpace(["a", "b"], [[0.25, 0.75]])
        A = acc.shortfall_set(space, OrliczFunction.power(2), 1.0)
        d = dec.decompose(A)
        for i in range(2):
            assert d.reach[i] == pytest.approx(A.loss_reach(i), rel=1e-8)
        assert names(d) == ([], ["a", "b"], [])

    def test_requires_claims(self):
        with pytest.raises(ValueError):
            dec.decompose(acc.var_set(THREE, 0.3))
        with pytest.raises(ValueError):
            dec.decompose(acc.es_set(THREE, 0.3))

    def test_partition(self):
        rng = np.random.default_rng(1)
        space = ScenarioSpace(["a", "b", "c", "d"], [[0.5, 0.5, 0, 0], [0, 0.2, 0.3, 0.5]])
        for _ in range(20):
            lower = -rng.uniform(0, 3, 4)
            lower[rng.random(4) < 0.3] = 0.0
            lower[rng.random(4) < 0.3] = -np.inf
            d = dec.decompose(acc.box_set(space, lower))
            parts = np.stack([d.E1, d.E2, d.E3]).astype(int)
            assert np.array_equal(parts.sum(axis=0), space.support.astype(int))

    def test_probe_censored_flag(self):
        A = acc.box_set(THREE, [0.0, -7e8, -1.0])
        d = dec.decompose(A, 1e9)
        assert any(f.startswith("probe-censored") for f in d.flags)

    def test_unbounded_without_certificate_flagged(self):
        A = acc.custom(THREE, lambda x: bool(x[0] >= 0), claims_convex=True, claims_monotone=True,
                       claims_surplus_invariant=True)
        d = dec.decompose(A)
        assert names(d) == (["w1"], [], ["w2", "w3"])
        assert sum(f.startswith("unbounded within probe") for f in d.flags) == 2

    def test_e2_independent_of_probe_bound(self):
        A = acc.intersection(acc.box_set(THREE, [-2.0, -np.inf, 0.0]),
                             acc.shortfall_set(THREE, OrliczFunction.power(1), 0.5))
        assert np.array_equal(dec.decompose(A, 1e6).E2, dec.decompose(A, 1e9).E2)

    def test_conic_sets_have_null_e2(self):
        space = ScenarioSpace(["a", "b", "c"], [[0.5, 0.5, 0.0], [0.0, 0.5, 0.5]])
        for A in (acc.span_set(space, ["a"]), acc.positive_cone(space), acc.whole_space(space),
                  acc.box_set(space, [0.0, -np.inf, 0.0])):
            assert A.claims_cone
            assert capacity(space, dec.decompose(A).E2) == 0


class TestReconstruction:
    d = dec.decompose(BOX)

    def test_examples(self):
        assert BOX.contains([1.0, -0.5, -100.0]) and dec.reconstruct(self.d, [1.0, -0.5, -100.0])
        assert not BOX.contains([-0.1, 0.0, 0.0]) and not dec.reconstruct(self.d, [-0.1, 0.0, 0.0])
        assert BOX.contains(np.zeros(3)) and dec.reconstruct(self.d, np.zeros(3))

    def test_verify(self):
        assert dec.verify_reconstruction(BOX, self.d, 2000, seed=3).passed

    def test_detects_a_wrong_decomposition(self):
        wrong = dec.decompose(acc.box_set(THREE, [0.0, -2.0, -np.inf]))
        assert not dec.verify_reconstruction(BOX, wrong, 2000, seed=3).passed

    def test_d_oracle_solid_on_grid(self):
        A = acc.intersection(acc.box_set(THREE, [-2.0, -1.0, -np.inf]),
                             acc.shortfall_set(THREE, OrliczFunction.power(2), 1.0))
        d = dec.decompose(A)
        g = np.linspace(0, 2.5, 11)
        pts = [np.array(w) * d.E2 for w in itertools.product(g, repeat=3)]
        inside = [w for w in pts if d.D_oracle(w)]
        for w in inside[::3]:
            for v in pts:
                if np.all(v <= w):
                    assert d.D_oracle(v)


class TestDiagnostics:
    def test_radially_bounded_box(self):
        rep = dec.check_radially_bounded_D(dec.decompose(BOX), 100)
        assert rep.passed and rep.details["max_lambda"] >= 1

    def test_radially_bounded_vacuous_for_cones(self):
        rep = dec.check_radially_bounded_D(dec.decompose(acc.span_set(THREE, ["w1"])), 50)
        assert rep.passed and rep.flags

    def test_scaling_escape_is_inverse_norm(self):
        d = dec.decompose(BOX)
        eps = 1e-3
        lam = 1.0
        while d.D_oracle(lam * np.array([0.0, eps, 0.0])):
            lam *= 2
        assert 1 / eps <= lam <= 2 / eps

    def test_support_condition(self):
        rep = dec.check_support_condition(dec.decompose(BOX))
        assert rep.passed
        assert rep.details["witnesses"]["w2"].tolist() == [0.0, 0.5, 0.0]
        assert dec.check_support_condition(dec.decompose(acc.positive_cone(THREE))).passed

    def test_support_condition_robust(self):
        space = ScenarioSpace(["a", "b", "c"], [[0.5, 0.5, 0.0], [0.0, 0.4, 0.6]])
        A = acc.box_set(space, [-1.0, -2.0, -3.0])
        rep = dec.check_support_condition(dec.decompose(A), robust=True)
        assert rep.passed and rep.tested == 3 + 7

    def test_recession_and_lineality(self):
        d = dec.decompose(BOX)
        assert dec.recession_lineality(BOX, d, 100, seed=2).passed
        e3 = np.array([0.0, 0.0, 1.0])
        assert dec._recedes(BOX, np.zeros(3), e3, 1e9) and dec._recedes(BOX, np.zeros(3), -e3, 1e9)
        assert not dec._recedes(BOX, np.zeros(3), np.array([-1.0, 0.0, 0.0]), 1e9)
        assert dec._recedes(BOX, np.zeros(3), np.zeros(3), 1e9)
