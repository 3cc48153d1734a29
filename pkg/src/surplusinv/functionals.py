"""Risk functionals and the bridge between acceptance sets and capital requirements."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import measures
from .acceptance import AcceptanceSet, PositionSampler, check_surplus_invariant
from .orlicz import OrliczFunction
from .reports import LawReport
from .scenario import ScenarioSpace, neg_part

M_MAX = 1e12
M_TOL = 1e-10
LAW_TOL = 1e-8


class RiskError(ArithmeticError):
    """A functional produced a value it must never produce (``-inf`` or NaN)."""


@dataclass(frozen=True, eq=False)
class RiskFunctional:
    """Map from positions to ``(-inf, inf]`` with structural claims.

    ``S`` is the payoff in which capital is measured for S-additive
    functionals.  ``acceptance`` is kept when the functional was built from an
    acceptance set, so checks can consult the exact set instead of the
    numerically inverted one.
    """

    space: ScenarioSpace
    evaluator: Callable[[np.ndarray], float]
    kind: str = "custom"
    S: np.ndarray | None = None
    claims_convex: bool = False
    claims_monotone: bool = False
    claims_si: bool = False
    claims_si_subject_pos: bool = False
    claims_s_additive: bool = False
    params: dict = field(default_factory=dict)
    acceptance: AcceptanceSet | None = None

    def __call__(self, x) -> float:
        x = np.where(self.space.support, np.asarray(x, dtype=float), 0.0)
        v = float(self.evaluator(x))
        if math.isnan(v) or v == -math.inf:
            raise RiskError(f"{self.kind} functional returned {v}")
        return v

    @property
    def payoff(self) -> np.ndarray:
        return self.S if self.S is not None else self.space.support.astype(float)


def _unit(space: ScenarioSpace) -> np.ndarray:
    return space.support.astype(float)


def var_functional(space: ScenarioSpace, alpha: float, prior=0) -> RiskFunctional:
    p = space.prior(prior)
    measures._check_level(alpha)
    return RiskFunctional(
        space, lambda x: measures.var(x, alpha, p), "var", _unit(space),
        claims_monotone=True, claims_si_subject_pos=True, claims_s_additive=True,
        params={"alpha": alpha, "prior": space.prior_index(prior)},
    )


def es_functional(space: ScenarioSpace, alpha: float, prior=0) -> RiskFunctional:
    p = space.prior(prior)
    measures._check_level(alpha)
    return RiskFunctional(
        space, lambda x: measures.es(x, alpha, p), "es", _unit(space),
        claims_convex=True, claims_monotone=True, claims_s_additive=True,
        params={"alpha": alpha, "prior": space.prior_index(prior)},
    )


def expectation_functional(space: ScenarioSpace, prior=0) -> RiskFunctional:
    """``E_P[-X]``."""
    p = space.prior(prior)
    return RiskFunctional(
        space, lambda x: -float(np.dot(p, x)), "expectation", _unit(space),
        claims_convex=True, claims_monotone=True, claims_s_additive=True,
        params={"prior": space.prior_index(prior)},
    )


def max_loss(space: ScenarioSpace) -> RiskFunctional:
    """Worst case ``max_i (-X_i)`` over the support; S-additive in cash."""
    sup = space.support
    return RiskFunctional(
        space, lambda x: float(np.max(-x[sup])), "max_loss", _unit(space),
        claims_convex=True, claims_monotone=True, claims_si_subject_pos=True, claims_s_additive=True,
    )


def max_shortfall(space: ScenarioSpace) -> RiskFunctional:
    """Largest loss ``max_i X_i^-``; surplus invariant, not S-additive."""
    sup = space.support
    return RiskFunctional(
        space, lambda x: float(np.max(neg_part(x[sup]))), "max_shortfall",
        claims_convex=True, claims_monotone=True, claims_si=True, claims_si_subject_pos=True,
    )


def shortfall_functional(space: ScenarioSpace, loss: OrliczFunction, prior=0) -> RiskFunctional:
    """Expected loss ``E_P[l(X^-)]`` as a functional in its own right."""
    p = space.prior(prior)
    return RiskFunctional(
        space, lambda x: measures.shortfall(x, loss, p), "shortfall",
        claims_convex=loss.convex, claims_monotone=True, claims_si=True, claims_si_subject_pos=True,
        params={"loss": loss, "prior": space.prior_index(prior)},
    )


def from_acceptance(A: AcceptanceSet, S=None) -> RiskFunctional:
    """Capital requirement ``inf{m : X + m S in A}``.

    Membership of ``X + m S`` is monotone in ``m``, so the infimum is found by
    bracketing outward from a scale guess and bisecting to ``M_TOL``.  The
    returned value is the accepted end of the final bracket.  ``+inf`` means
    no ``m`` up to ``M_MAX`` is acceptable.
    """
    if not A.claims_monotone:
        raise ValueError("from_acceptance needs a monotone acceptance set")
    space = A.space
    S = _unit(space) if S is None else np.where(space.support, np.asarray(S, dtype=float), 0.0)
    if np.any(S < 0) or np.any(S[space.support] <= 0):
        raise ValueError("S must be strictly positive on the support of the priors")
    s_min = float(S[space.support].min())

    def rho(x):
        ok = lambda m: A.contains(x + m * S)
        step = max(1.0, float(np.max(np.abs(x))) / s_min)
        hi = step
        while not ok(hi):
            hi *= 2
            if hi > M_MAX:
                return math.inf
        lo = -step
        while ok(lo):
            lo *= 2
            if lo < -M_MAX:
                raise RiskError("capital requirement is -inf or below the search range")
        while hi - lo > max(M_TOL, 4 * np.finfo(float).eps * abs(hi)):
            mid = 0.5 * (lo + hi)
            if ok(mid):
                hi = mid
            else:
                lo = mid
        return hi

    return RiskFunctional(
        space, rho, "from_acceptance", S,
        claims_convex=A.claims_convex, claims_monotone=True,
        claims_si_subject_pos=A.claims_surplus_invariant, claims_s_additive=True,
        params={"set": A.kind}, acceptance=A,
    )


def sublevel_set(rho: RiskFunctional, level: float = 0.0) -> AcceptanceSet:
    """``{X : rho(X) <= level}``, or the stored set when ``rho`` came from one."""
    if rho.acceptance is not None and level == 0.0:
        return rho.acceptance
    return AcceptanceSet(
        rho.space, lambda x: rho(x) <= level, "custom",
        claims_convex=rho.claims_convex, claims_monotone=rho.claims_monotone,
        claims_surplus_invariant=rho.claims_si or (rho.claims_si_subject_pos and rho.claims_s_additive),
    )


def _pair_sampler(rho: RiskFunctional, seed: int) -> PositionSampler:
    return PositionSampler(rho.space, seed=seed)


def check_s_additive(rho: RiskFunctional, trials: int = 1000, seed: int = 0, S=None) -> LawReport:
    """Sample ``(X, m)`` and compare ``rho(X + m S)`` with ``rho(X) - m``."""
    S = rho.payoff if S is None else np.asarray(S, dtype=float)
    sampler = _pair_sampler(rho, seed)
    rep = LawReport("s_additivity", trials=trials, seed=seed)
    for t in range(trials):
        x = sampler.draw(rho.acceptance)
        m = float(sampler.rng.uniform(-sampler.scale, sampler.scale))
        a, b = rho(x + m * S), rho(x)
        if not (math.isfinite(a) and math.isfinite(b)):
            continue
        rep.tested += 1
        if abs(a - b + m) > LAW_TOL:
            return rep.fail(X=x, m=m, rho_shifted=a, rho_X=b, trial=t)
    return rep


def check_si_subject_pos(rho: RiskFunctional, trials: int = 1000, seed: int = 0,
                         cross_check: bool = True) -> LawReport:
    """Sample ``X`` with ``rho(X) > 0`` and compare with ``rho(-X^-)``.

    For monotone S-additive functionals the same law is equivalent to
    surplus invariance of ``{rho <= 0}``; that check is run alongside and
    its agreement is recorded under ``details``.
    """
    sampler = _pair_sampler(rho, seed)
    rep = LawReport("si_subject_to_positivity", trials=trials, seed=seed)
    for t in range(trials):
        x = sampler.draw(rho.acceptance)
        v = rho(x)
        if not v > 0:
            continue
        rep.tested += 1
        w = rho(-neg_part(x))
        if v == w:
            continue
        if math.isinf(v) or math.isinf(w) or abs(v - w) > LAW_TOL:
            rep.fail(X=x, rho_X=v, rho_neg=w, trial=t)
            break
    if cross_check and rho.claims_monotone and rho.claims_s_additive:
        sub = sublevel_set(rho)
        other = check_surplus_invariant(sub, trials=trials, seed=seed)
        rep.details = {"sublevel_si": other.verdict, "agree": other.verdict == rep.verdict}
    return rep


def check_claims_compatible(rho: RiskFunctional) -> LawReport:
    """Flag a monotone functional that claims surplus invariance and S-additivity.

    Both claims together force ``rho(mS) = rho(0)`` and ``rho(mS) = rho(0) - m``
    for every ``m > 0``, which only an identically infinite functional meets.
    The evaluated values at ``0`` and ``S`` are reported as the witness.
    """
    rep = LawReport("claims_compatible", trials=1)
    if rho.claims_monotone and rho.claims_si and rho.claims_s_additive:
        r0, r1 = rho(np.zeros(rho.space.n)), rho(rho.payoff)
        rep.flags.append("monotone, surplus invariant and S-additive cannot hold together where finite")
        return rep.fail(rho_0=r0, rho_S=r1, si_requires=r0, s_additivity_requires=r0 - 1.0)
    return rep

