"""Band decomposition of convex, monotone, surplus-invariant acceptance sets.

On a finite space every band is the set of positions carried by an event,
so the decomposition reduces to classifying scenarios by how much loss the
set tolerates there:

* ``E1``: no loss is tolerated, positions must be nonnegative;
* ``E2``: a finite positive amount is tolerated, governed by the solid set ``D``;
* ``E3``: arbitrarily large losses are tolerated, positions are free.

Solidity of ``D`` is what makes scanning one scenario at a time enough.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .acceptance import AcceptanceSet, PositionSampler
from .reports import LawReport
from .robust import capacity
from .scenario import band_project, indicator, neg_part

T_MAX = 1e9
ZERO_PROBE = 1e-9


@dataclass
class Decomposition:
    space: object
    E1: np.ndarray
    E2: np.ndarray
    E3: np.ndarray
    D_oracle: Callable[[np.ndarray], bool]
    probe_bound: float
    reach: np.ndarray
    flags: list = field(default_factory=list)

    def to_json(self) -> dict:
        names = self.space.names
        return {
            "E1": names(self.E1),
            "E2": names(self.E2),
            "E3": names(self.E3),
            "flags": list(self.flags),
            "probe_bound": self.probe_bound,
        }


def loss_reach(A: AcceptanceSet, i: int, t_max: float = T_MAX) -> float:
    """``sup{t >= 0 : -t e_i in A}`` capped at ``t_max``."""
    e = indicator(A.space.n, i)
    if A.contains(-t_max * e):
        return t_max
    if not A.contains(-ZERO_PROBE * e):
        return 0.0
    lo, hi = ZERO_PROBE, t_max
    while hi - lo > 1e-9 * max(1.0, lo):
        mid = 0.5 * (lo + hi) if hi < 1e3 * lo else math.sqrt(lo * hi)
        if A.contains(-mid * e):
            lo = mid
        else:
            hi = mid
    return lo


def decompose(A: AcceptanceSet, T_max: float = T_MAX) -> Decomposition:
    if not (A.claims_convex and A.claims_monotone and A.claims_surplus_invariant):
        raise ValueError("decomposition needs a convex, monotone, surplus-invariant set")
    space = A.space
    if not A.contains(np.zeros(space.n)):
        raise ValueError("the acceptance set is empty")
    on = space.support
    reach = np.zeros(space.n)
    flags = []
    for i in np.flatnonzero(on):
        reach[i] = loss_reach(A, i, T_max)
    E1 = on & (reach == 0)
    E3 = on & (reach >= T_max)
    E2 = on & ~E1 & ~E3
    for i in np.flatnonzero(E3):
        cert = A.loss_reach(i) if A.loss_reach else None
        if cert is None or not math.isinf(cert):
            flags.append(f"unbounded within probe: {space.labels[i]}")
    censored = on & (reach > T_max / 2) & (reach < T_max)
    if censored.any():
        flags.append("probe-censored: " + ",".join(space.names(censored)))

    def D_oracle(w) -> bool:
        w = np.asarray(w, dtype=float)
        if np.any(w < 0) or np.any(w[~E2] != 0):
            return False
        return A.contains(-w)

    return Decomposition(space, E1, E2, E3, D_oracle, T_max, reach, flags)


def reconstruct(dec: Decomposition, x) -> bool:
    """Membership rebuilt from the decomposition alone."""
    x = np.asarray(x, dtype=float)
    if np.any(x[dec.E1] < 0):
        return False
    return dec.D_oracle(neg_part(band_project(x, dec.E2)))


def verify_reconstruction(A: AcceptanceSet, dec: Decomposition, trials: int = 1000, seed: int = 0) -> LawReport:
    sampler = PositionSampler(A.space, seed=seed)
    rep = LawReport("decomposition_reconstruction", trials=trials, seed=seed)
    for t in range(trials):
        x = sampler.draw(A)
        lhs, rhs = A.contains(x), reconstruct(dec, x)
        rep.tested += 1
        if lhs != rhs:
            return rep.fail(X=x, in_A=lhs, reconstructed=rhs, trial=t)
    return rep


def _d_sample(dec: Decomposition, rng) -> np.ndarray:
    idx = np.flatnonzero(dec.E2)
    u = np.zeros(dec.E2.size)
    u[idx] = rng.random(idx.size) * (rng.random(idx.size) < 0.7)
    if not u.any():
        u[rng.choice(idx)] = 1.0
    # scale into D by bisection along the ray
    lo, hi = 0.0, dec.probe_bound
    if dec.D_oracle(hi * u):
        return hi * u
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if dec.D_oracle(mid * u):
            lo = mid
        else:
            hi = mid
    return lo * u * rng.uniform(1e-6, 1.0)


def check_radially_bounded_D(dec: Decomposition, trials: int = 200, seed: int = 0) -> LawReport:
    """For sampled nonzero ``W`` in ``D`` find ``lam_W`` with ``lam W`` outside ``D`` beyond it."""
    rep = LawReport("radially_bounded_D", trials=trials, seed=seed)
    if not dec.E2.any():
        rep.flags.append("vacuous: E2 is empty")
        return rep
    rng = np.random.default_rng(seed)
    worst = 0.0
    for t in range(trials):
        w = _d_sample(dec, rng)
        if not w.any():
            continue
        rep.tested += 1
        lam = 1.0
        while dec.D_oracle(lam * w):
            lam *= 2
            if lam > dec.probe_bound:
                return rep.fail(W=w, trial=t, reason="ray stays in D up to the probe bound")
        for mu in np.geomspace(lam, max(lam, dec.probe_bound), 20):
            if dec.D_oracle(mu * w):
                return rep.fail(W=w, lam=lam, readmitted_at=mu, trial=t)
        worst = max(worst, lam)
    rep.details = {"max_lambda": worst}
    return rep


def check_support_condition(dec: Decomposition, trials: int = 64, seed: int = 0, robust: bool = False) -> LawReport:
    """Every scenario (robust: every non-null sub-event) of ``E2`` is charged by some ``W`` in ``D``."""
    rep = LawReport("support_condition", trials=trials, seed=seed)
    idx = np.flatnonzero(dec.E2)
    if idx.size == 0:
        rep.flags.append("vacuous: E2 is empty")
        return rep
    space = dec.space
    witnesses = {}
    for i in idx:
        w = 0.5 * dec.reach[i] * indicator(space.n, i)
        rep.tested += 1
        if not (dec.D_oracle(w) and w[i] > 0):
            return rep.fail(scenario=space.labels[i], W=w)
        witnesses[space.labels[i]] = w
    if robust:
        rng = np.random.default_rng(seed)
        if idx.size <= 12:
            subsets = [s for r in range(1, idx.size + 1) for s in itertools.combinations(idx, r)]
        else:
            subsets = [tuple(idx[rng.random(idx.size) < 0.5]) for _ in range(trials)]
        for sub in subsets:
            ev = np.zeros(space.n, dtype=bool)
            ev[list(sub)] = True
            if capacity(space, ev) == 0:
                continue
            rep.tested += 1
            i = next(j for j in sub if capacity(space, indicator(space.n, j) > 0) > 0)
            w = witnesses[space.labels[i]]
            if not np.any(band_project(w, ev) != 0):
                return rep.fail(event=space.names(ev))
    rep.details = {"witnesses": witnesses}
    return rep


def _recedes(A: AcceptanceSet, x0: np.ndarray, v: np.ndarray, t_max: float) -> bool:
    return all(A.contains(x0 + t * v) for t in np.geomspace(1e-3, t_max, 40))


def recession_lineality(A: AcceptanceSet, dec: Decomposition, trials: int = 200, seed: int = 0) -> LawReport:
    """Compare sampled recession and lineality verdicts with the decomposition.

    Predicted: ``V`` recedes iff ``V >= 0`` on ``E1`` and ``E2``; ``V`` lies in
    the lineality space iff ``V = 0`` there.  Rays start at ``0``.
    """
    rng = np.random.default_rng(seed)
    n = A.space.n
    on = A.space.support
    bounded = dec.E1 | dec.E2
    x0 = np.zeros(n)
    dirs = [np.zeros(n)]
    for i in np.flatnonzero(on):
        dirs += [indicator(n, i), -indicator(n, i)]
    while len(dirs) < trials:
        v = rng.uniform(-1, 1, n) * (rng.random(n) < 0.7)
        if rng.random() < 0.3:
            v = np.abs(v)
        dirs.append(np.where(on, v, 0.0))
    rep = LawReport("recession_lineality", trials=len(dirs), seed=seed)
    for t, v in enumerate(dirs):
        rep.tested += 1
        fwd = _recedes(A, x0, v, dec.probe_bound)
        want = bool(np.all(v[bounded] >= 0))
        if fwd != want:
            return rep.fail(V=v, recedes=fwd, predicted=want, trial=t)
        lin = fwd and _recedes(A, x0, -v, dec.probe_bound)
        if lin != bool(np.all(v[bounded] == 0)):
            return rep.fail(V=v, lineality=lin, predicted=not lin, trial=t)
    return rep
