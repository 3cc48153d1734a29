"""Acceptance sets as membership oracles, plus structural law checkers.

Every checker falsifies: it reports ``pass`` when no counterexample was
found in the trials it ran, and otherwise a concrete witness together with
the seed that reproduces it.  Order closedness is never sampled; built-ins
are closed by construction and custom oracles get a flag in the report.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import measures
from .orlicz import OrliczFunction
from .reports import LawReport
from .scenario import ScenarioSpace, band_project, neg_part

BUILTIN_KINDS = {"var", "es", "span", "shortfall", "box", "halfspace", "whole", "intersection", "union"}


@dataclass(frozen=True, eq=False)
class AcceptanceSet:
    """A subset of positions given by a deterministic membership oracle.

    The ``claims_*`` flags record structure that holds by construction; the
    checkers in this module test those claims rather than trusting them.
    ``loss_reach`` optionally returns, for scenario ``i``, the exact value of
    ``sup{t >= 0 : -t e_i in A}`` (possibly ``inf``); decomposition uses it
    as an analytic certificate.
    """

    space: ScenarioSpace
    membership: Callable[[np.ndarray], bool]
    kind: str = "custom"
    claims_convex: bool = False
    claims_cone: bool = False
    claims_monotone: bool = False
    claims_surplus_invariant: bool = False
    params: dict = field(default_factory=dict)
    loss_reach: Callable[[int], float] | None = None

    @property
    def builtin(self) -> bool:
        return self.kind in BUILTIN_KINDS

    def contains(self, x) -> bool:
        x = np.where(self.space.support, np.asarray(x, dtype=float), 0.0)
        return bool(self.membership(x))

    __contains__ = contains


def contains(A: AcceptanceSet, x) -> bool:
    return A.contains(x)


def in_D(A: AcceptanceSet, w) -> bool:
    """Membership of a nonnegative loss profile in ``D = -A_-``."""
    w = np.asarray(w, dtype=float)
    if np.any(w < 0):
        raise ValueError("loss profiles must be nonnegative")
    return A.contains(-w)


# builders -----------------------------------------------------------------

def var_set(space: ScenarioSpace, alpha: float, prior=0) -> AcceptanceSet:
    p = space.prior(prior)
    on = p > 0
    measures._check_level(alpha)

    def member(x):
        # VaR_a(X) <= 0 iff P(X < 0) <= a; the atom test guards prior totals that round below 1
        return measures.mass_below(x, 0.0, p) <= alpha and bool(np.any(x[on] >= 0))

    return AcceptanceSet(
        space, member, "var",
        claims_convex=False, claims_cone=True, claims_monotone=True, claims_surplus_invariant=True,
        params={"alpha": alpha, "prior": space.prior_index(prior)},
        loss_reach=lambda i: math.inf if p[i] <= alpha else 0.0,
    )


def es_set(space: ScenarioSpace, alpha: float, prior=0) -> AcceptanceSet:
    p = space.prior(prior)
    measures._check_level(alpha)
    return AcceptanceSet(
        space, lambda x: measures.es(x, alpha, p) <= 0, "es",
        claims_convex=True, claims_cone=True, claims_monotone=True, claims_surplus_invariant=False,
        params={"alpha": alpha, "prior": space.prior_index(prior)},
    )


def span_set(space: ScenarioSpace, event, prior=None) -> AcceptanceSet:
    """SPAN acceptance ``P({X < 0} & E) = 0``.

    With ``prior=None`` the test is quasi-sure: every prior must agree.
    """
    event = space.event(event)
    charged = space.support if prior is None else space.prior(prior) > 0
    hit = event & charged
    return AcceptanceSet(
        space, lambda x: not bool(np.any(x[hit] < 0)), "span",
        claims_convex=True, claims_cone=True, claims_monotone=True, claims_surplus_invariant=True,
        params={"event": event, "prior": None if prior is None else space.prior_index(prior)},
        loss_reach=lambda i: 0.0 if hit[i] else math.inf,
    )


def shortfall_set(space: ScenarioSpace, loss: OrliczFunction, level: float, prior=0) -> AcceptanceSet:
    """Shortfall acceptance ``E_P[l(X^-)] <= level``."""
    if level < 0:
        raise ValueError("a negative shortfall level gives the empty set")
    p = space.prior(prior)

    def reach(i):
        if p[i] == 0:
            return math.inf
        cap = level / p[i]
        if loss.kind == "linfty_type":
            return 1.0
        if loss.kind in ("power", "scaled_power"):
            c = loss.params[1] if loss.kind == "scaled_power" else 1.0
            return (cap / c) ** (1.0 / loss.params[0])
        if loss.kind == "exp_minus_one":
            return math.log1p(cap) / loss.params[0]
        return None

    return AcceptanceSet(
        space, lambda x: measures.shortfall(x, loss, p) <= level, "shortfall",
        claims_convex=loss.convex, claims_cone=False, claims_monotone=True, claims_surplus_invariant=True,
        params={"loss": loss, "level": level, "prior": space.prior_index(prior)},
        loss_reach=reach,
    )


def box_set(space: ScenarioSpace, lower) -> AcceptanceSet:
    """``{X : X >= lower}`` with ``lower <= 0``; ``-inf`` leaves a scenario free."""
    lower = np.asarray(lower, dtype=float)
    if lower.shape != (space.n,) or np.any(lower > 0):
        raise ValueError("box lower bounds must be <= 0, one per scenario")
    lower = np.where(space.support, lower, -np.inf)
    conic = bool(np.all((lower == 0) | np.isinf(lower)))
    return AcceptanceSet(
        space, lambda x: bool(np.all(x >= lower)), "box",
        claims_convex=True, claims_cone=conic, claims_monotone=True, claims_surplus_invariant=True,
        params={"lower": lower},
        loss_reach=lambda i: float(-lower[i]),
    )


def positive_cone(space: ScenarioSpace) -> AcceptanceSet:
    return box_set(space, np.zeros(space.n))


def whole_space(space: ScenarioSpace) -> AcceptanceSet:
    return AcceptanceSet(
        space, lambda x: True, "whole",
        claims_convex=True, claims_cone=True, claims_monotone=True, claims_surplus_invariant=True,
        loss_reach=lambda i: math.inf,
    )


def halfspace_set(space: ScenarioSpace, prior=0, threshold: float = 0.0) -> AcceptanceSet:
    """``{E_P[X] >= threshold}``: monotone and convex, not surplus invariant."""
    p = space.prior(prior)
    return AcceptanceSet(
        space, lambda x: float(np.dot(p, x)) >= threshold, "halfspace",
        claims_convex=True, claims_cone=threshold == 0, claims_monotone=True, claims_surplus_invariant=False,
        params={"prior": space.prior_index(prior), "threshold": threshold},
    )


def intersection(*sets: AcceptanceSet) -> AcceptanceSet:
    space = sets[0].space

    def reach(i):
        vals = [s.loss_reach(i) if s.loss_reach else None for s in sets]
        return None if any(v is None for v in vals) else min(vals)

    return AcceptanceSet(
        space, lambda x: all(s.membership(x) for s in sets), "intersection",
        claims_convex=all(s.claims_convex for s in sets),
        claims_cone=all(s.claims_cone for s in sets),
        claims_monotone=all(s.claims_monotone for s in sets),
        claims_surplus_invariant=all(s.claims_surplus_invariant for s in sets),
        params={"parts": list(sets)},
        loss_reach=reach,
    )


def union(*sets: AcceptanceSet) -> AcceptanceSet:
    space = sets[0].space

    def reach(i):
        vals = [s.loss_reach(i) if s.loss_reach else None for s in sets]
        return None if any(v is None for v in vals) else max(vals)

    return AcceptanceSet(
        space, lambda x: any(s.membership(x) for s in sets), "union",
        claims_convex=False,
        claims_cone=all(s.claims_cone for s in sets),
        claims_monotone=all(s.claims_monotone for s in sets),
        claims_surplus_invariant=all(s.claims_surplus_invariant for s in sets),
        params={"parts": list(sets)},
        loss_reach=reach,
    )


def custom(space: ScenarioSpace, fn: Callable[[np.ndarray], bool], **claims) -> AcceptanceSet:
    return AcceptanceSet(space, fn, "custom", **claims)


# sampling -----------------------------------------------------------------

class PositionSampler:
    """Random positions mixing uniform, sparse-loss, snapped and boundary draws.

    Uniform draws alone rarely land where the laws break, so a share of the
    draws is pushed onto the membership boundary of the set under test by
    bisecting along the constant direction.
    """

    MODES = ("uniform", "sparse", "snapped", "boundary")

    def __init__(self, space: ScenarioSpace, scale: float = 10.0, seed: int = 0):
        self.space = space
        self.scale = float(scale)
        self.seed = seed
        self.rng = np.random.default_rng(seed)

    def _raw(self, mode: str) -> np.ndarray:
        n, L, rng = self.space.n, self.scale, self.rng
        if mode == "sparse":
            x = np.zeros(n)
            k = rng.random(n)
            x = np.where(k < 0.35, -rng.uniform(0, L, n), x)
            x = np.where(k > 0.65, rng.uniform(0, L, n), x)
        elif mode == "snapped":
            x = np.round(rng.uniform(-L, L, n) * 2) / 2
        else:
            x = rng.uniform(-L, L, n)
        return np.where(self.space.support, x, 0.0)

    def draw(self, A: AcceptanceSet | None = None) -> np.ndarray:
        mode = self.MODES[self.rng.integers(len(self.MODES) if A is not None else 3)]
        x = self._raw("uniform" if mode == "boundary" else mode)
        if mode == "boundary":
            x = self._to_boundary(A, x)
        return x

    def _to_boundary(self, A: AcceptanceSet, x: np.ndarray) -> np.ndarray:
        one = self.space.support.astype(float)
        lo, hi = -4 * self.scale, 4 * self.scale
        if A.contains(x + lo * one) or not A.contains(x + hi * one):
            return x
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if A.contains(x + mid * one):
                hi = mid
            else:
                lo = mid
        jitter = self.rng.choice([0.0, 1e-9, 1e-6, 1e-3]) * self.scale
        return x + (hi + jitter) * one

    def member(self, A: AcceptanceSet, tries: int = 64) -> np.ndarray | None:
        for _ in range(tries):
            x = self.draw(A)
            if A.contains(x):
                return x
        return None

    def loss_direction(self) -> np.ndarray:
        """Nonnegative direction on the support, sometimes sparse."""
        n, rng = self.space.n, self.rng
        u = rng.random(n)
        if rng.random() < 0.5:
            u = u * (rng.random(n) < 0.6)
        if not u.any():
            u[rng.integers(n)] = 1.0
        return np.where(self.space.support, u, 0.0)


def _surplus_variant(x: np.ndarray, rng, scale: float, support) -> np.ndarray:
    """A position with the same negative part as ``x`` but different gains."""
    loss = neg_part(x)
    gains_ok = (loss == 0) & support
    mode = rng.integers(4)
    if mode == 0:
        extra = np.zeros_like(x)
    elif mode == 1:
        extra = rng.uniform(0, scale, x.size)
    elif mode == 2:
        extra = rng.uniform(0, max(loss.max(), 1e-3), x.size)
    else:
        extra = rng.random(x.size) * np.maximum(x, 0)
    return -loss + np.where(gains_ok, extra, 0.0)


def _custom_flags(A: AcceptanceSet) -> list:
    return [] if A.builtin else ["order closedness not sampled for custom oracle"]


# checkers -----------------------------------------------------------------

def check_surplus_invariant(A: AcceptanceSet, trials: int = 1000, seed: int = 0,
                            sampler: PositionSampler | None = None) -> LawReport:
    """Search for ``X in A`` and ``Y`` with ``Y^- = X^-`` but ``Y not in A``."""
    sampler = sampler or PositionSampler(A.space, seed=seed)
    rep = LawReport("surplus_invariance", trials=trials, seed=seed, flags=_custom_flags(A))
    for t in range(trials):
        x = sampler.draw(A)
        if not A.contains(x):
            continue
        rep.tested += 1
        y = _surplus_variant(x, sampler.rng, sampler.scale, A.space.support)
        if not A.contains(y):
            return rep.fail(X=x, Y=y, trial=t)
    return rep


def _require_monotone(A: AcceptanceSet):
    if not A.claims_monotone:
        raise ValueError("this check needs a set that claims monotonicity")


def check_equivalences(A: AcceptanceSet, trials: int = 1000, seed: int = 0,
                       sampler: PositionSampler | None = None, grid=None) -> LawReport:
    """Test the equivalent forms of surplus invariance for a monotone set.

    Parts: ``c`` (X in A implies -X^- in A), ``d`` (X in A and Y^- <= X^-
    implies Y in A), ``e`` (X in A iff X^- in D) and ``solid`` (D is solid in
    the positive cone).  With ``grid`` the check is exhaustive over the
    product grid and ``a`` (membership constant on classes with equal
    negative part) is checked as well.
    """
    _require_monotone(A)
    if grid is not None:
        return _grid_equivalences(A, np.asarray(grid, dtype=float), seed)
    sampler = sampler or PositionSampler(A.space, seed=seed)
    rng, sup = sampler.rng, A.space.support
    rep = LawReport("si_equivalences", trials=trials, seed=seed, flags=_custom_flags(A))
    for t in range(trials):
        x = sampler.draw(A)
        inside = A.contains(x)
        loss = neg_part(x)
        if inside and not A.contains(-loss):
            return rep.fail(part="c", X=x, trial=t)
        if inside != in_D(A, loss):
            return rep.fail(part="e", X=x, in_A=inside, trial=t)
        if not inside:
            continue
        rep.tested += 1
        z = np.where(sup, rng.uniform(-sampler.scale, sampler.scale, x.size), 0.0)
        y = np.maximum(z, -loss)
        if not A.contains(y):
            return rep.fail(part="d", X=x, Y=y, trial=t)
        v = loss * rng.random(x.size)
        if not in_D(A, v):
            return rep.fail(part="solid", W=loss, V=v, trial=t)
    return rep


def _grid_equivalences(A: AcceptanceSet, grid: np.ndarray, seed) -> LawReport:
    grid = np.unique(grid)
    if 0.0 not in grid or not np.all(np.isin(-grid[grid > 0], grid)):
        raise ValueError("the enumeration grid must be symmetric and contain 0")
    n, m = A.space.n, grid.size
    zero = int(np.searchsorted(grid, 0.0))
    idx = np.array(list(itertools.product(range(m), repeat=n)))
    pts = grid[idx]
    member = np.fromiter((A.contains(p) for p in pts), dtype=bool, count=len(pts))
    rep = LawReport("si_equivalences", trials=len(pts), seed=seed, tested=int(member.sum()),
                    flags=_custom_flags(A), details={"mode": "grid", "grid_size": m})

    neg_idx = np.where(pts > 0, zero, idx)
    neg_flat = np.ravel_multi_index(neg_idx.T, (m,) * n)
    # (a): membership constant on classes of equal negative part
    total = np.bincount(neg_flat, minlength=m**n)
    hits = np.bincount(neg_flat, weights=member, minlength=m**n)
    mixed = np.flatnonzero((hits > 0) & (hits < total))
    if mixed.size:
        cls = mixed[0]
        cand = np.flatnonzero(neg_flat == cls)
        x = pts[cand[member[cand]][0]]
        y = pts[cand[~member[cand]][0]]
        return rep.fail(part="a", X=x, Y=y)
    # (c)
    bad = member & ~member[neg_flat]
    if bad.any():
        return rep.fail(part="c", X=pts[np.argmax(bad)])
    # (e): X in A iff -X^- in A
    bad = member != member[neg_flat]
    if bad.any():
        return rep.fail(part="e", X=pts[np.argmax(bad)])
    # classes are indexed by the nonpositive grid values per coordinate
    reps = np.flatnonzero(np.all(pts <= 0, axis=1))
    prof = -pts[reps]
    any_a = hits[reps] > 0
    all_a = hits[reps] == total[reps]
    in_d = member[reps]
    leq = np.all(prof[:, None, :] <= prof[None, :, :], axis=2)  # leq[j, k]: prof_j <= prof_k
    # (d): X in A, Y^- <= X^-  =>  Y in A
    viol = leq & any_a[None, :] & ~all_a[:, None]
    if viol.any():
        j, k = np.argwhere(viol)[0]
        return rep.fail(part="d", X_loss=prof[k], Y_loss=prof[j])
    viol = leq & in_d[None, :] & ~in_d[:, None]
    if viol.any():
        j, k = np.argwhere(viol)[0]
        return rep.fail(part="solid", W=prof[k], V=prof[j])
    return rep


def _events(n: int, support, rng, limit: int = 12, samples: int = 64):
    idx = np.flatnonzero(support)
    if idx.size <= limit:
        for bits in itertools.product((False, True), repeat=idx.size):
            e = np.zeros(n, dtype=bool)
            e[idx] = bits
            yield e
    else:
        for _ in range(samples):
            e = np.zeros(n, dtype=bool)
            e[idx] = rng.random(idx.size) < 0.5
            yield e


def check_band_stability(A: AcceptanceSet, trials: int = 500, seed: int = 0,
                         sampler: PositionSampler | None = None) -> LawReport:
    """Search for ``X in A`` and an event ``E`` with ``1_E X not in A``.

    For monotone sets, passing this check and passing
    :func:`check_surplus_invariant` are equivalent statements.
    """
    _require_monotone(A)
    sampler = sampler or PositionSampler(A.space, seed=seed)
    rep = LawReport("band_stability", trials=trials, seed=seed, flags=_custom_flags(A))
    for t in range(trials):
        x = sampler.draw(A)
        if not A.contains(x):
            continue
        rep.tested += 1
        for e in _events(A.space.n, A.space.support, sampler.rng):
            if not A.contains(band_project(x, e)):
                return rep.fail(X=x, event=A.space.names(e), projected=band_project(x, e), trial=t)
    return rep


def _d_member(A: AcceptanceSet, sampler: PositionSampler, bound: float) -> np.ndarray:
    """A loss profile in ``D``, usually on or near its radial boundary."""
    u = sampler.loss_direction()
    if A.contains(-bound * u):
        return bound * u * sampler.rng.random()
    lo, hi = 0.0, bound
    for _ in range(50):
        mid = 0.5 * (lo + hi)
        if A.contains(-mid * u):
            lo = mid
        else:
            hi = mid
    return lo * u * (1.0 if sampler.rng.random() < 0.5 else sampler.rng.random())


def check_convexity_via_D(A: AcceptanceSet, trials: int = 1000, seed: int = 0,
                          sampler: PositionSampler | None = None) -> LawReport:
    """Compare sampled convexity of ``A`` with sampled convexity of ``D``.

    The two searches run independently; the check passes when their
    verdicts agree, as they must for a monotone surplus-invariant set.
    """
    _require_monotone(A)
    if not A.claims_surplus_invariant:
        raise ValueError("convexity via D needs a set that claims surplus invariance")
    sampler = sampler or PositionSampler(A.space, seed=seed)
    rng = sampler.rng
    rep = LawReport("convexity_via_D", trials=trials, seed=seed, flags=_custom_flags(A))
    wit_a = wit_d = None
    for t in range(trials):
        lam = 0.5 if rng.random() < 0.5 else rng.random()
        if wit_a is None:
            x, y = sampler.member(A), sampler.member(A)
            if x is not None and y is not None:
                z = lam * x + (1 - lam) * y
                if not A.contains(z):
                    wit_a = {"X": x, "Y": y, "lambda": lam, "mix": z, "trial": t}
        if wit_d is None:
            w = _d_member(A, sampler, 4 * sampler.scale)
            v = _d_member(A, sampler, 4 * sampler.scale)
            z = lam * w + (1 - lam) * v
            if not in_D(A, z):
                wit_d = {"W": w, "V": v, "lambda": lam, "mix": z, "trial": t}
        if wit_a is not None and wit_d is not None:
            break
    rep.tested = trials
    rep.details = {"A_convex": wit_a is None, "D_convex": wit_d is None}
    if (wit_a is None) != (wit_d is None):
        return rep.fail(A_violation=wit_a, D_violation=wit_d)
    rep.witness = {"A_violation": wit_a, "D_violation": wit_d} if wit_a else {}
    return rep

