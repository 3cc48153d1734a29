"""Multi-prior structure: capacity, robust norms and dual measures.

A dual measure is kept in span form, a finite list of terms
``coeff * mu_{P, Z}`` with ``mu_{P, Z}(E) = E_P[1_E Z]``.  On a finite space
every such combination reduces to a signed weight per scenario, see
:meth:`DualMeasure.canonical`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .scenario import ScenarioSpace


def capacity(space: ScenarioSpace, event: np.ndarray) -> float:
    """Upper probability ``max_P P(E)`` over the prior family."""
    event = np.asarray(event, dtype=bool)
    return float(max(p[event].sum() for p in space.priors))


def is_c_null(space: ScenarioSpace, event: np.ndarray) -> bool:
    return capacity(space, event) == 0.0


def robust_norm(space: ScenarioSpace, x: np.ndarray, p: float = 1.0) -> float:
    """``sup_P ||x||_{L^p(P)}``; ``p = inf`` gives the quasi-sure sup norm."""
    x = np.abs(np.asarray(x, dtype=float))
    if p == np.inf:
        on = space.support
        return float(x[on].max()) if on.any() else 0.0
    if p < 1:
        raise ValueError("robust_norm needs p >= 1")
    return float(max(np.dot(w, x**p) ** (1.0 / p) for w in space.priors))


def assumption_dual_space_holds(space: ScenarioSpace) -> bool:
    """Whether bounded positions form the norm dual of ``ca_c``.

    Always true here: on a finite outcome set both sides are the same
    finite-dimensional space.  Kept as an explicit check so callers that
    rely on the assumption can state it.
    """
    return space.n > 0


@dataclass(frozen=True)
class MeasureTerm:
    prior: int
    density: np.ndarray
    coeff: float = 1.0


class DualMeasure:
    """Finite linear combination of the measures ``mu_{P, Z}``."""

    def __init__(self, space: ScenarioSpace, terms=()):
        self.space = space
        cleaned = []
        for t in terms:
            if not isinstance(t, MeasureTerm):
                t = MeasureTerm(*t)
            z = np.asarray(t.density, dtype=float)
            if z.shape != (space.n,) or not np.all(np.isfinite(z)):
                raise ValueError("densities must be finite vectors over the scenarios")
            z.flags.writeable = False
            cleaned.append(MeasureTerm(space.prior_index(t.prior), z, float(t.coeff)))
        self.terms = tuple(cleaned)

    @classmethod
    def from_weights(cls, space: ScenarioSpace, weights) -> "DualMeasure":
        """Span-form measure with the given signed weight on each scenario.

        Each scenario is charged to the first prior that sees it.  Weights on
        scenarios outside every support are dropped (those events are c-null).
        """
        weights = np.asarray(weights, dtype=float)
        terms = []
        for k, p in enumerate(space.priors):
            taken = np.zeros(space.n, dtype=bool)
            for j in range(k):
                taken |= space.priors[j] > 0
            mine = (p > 0) & ~taken
            if mine.any():
                z = np.where(mine, weights / np.where(p > 0, p, 1.0), 0.0)
                terms.append(MeasureTerm(k, z, 1.0))
        return cls(space, terms)

    def canonical(self) -> np.ndarray:
        """Signed weight of each scenario, zero off the union of supports."""
        m = np.zeros(self.space.n)
        for t in self.terms:
            m += t.coeff * self.space.priors[t.prior] * t.density
        return m

    def __call__(self, event: np.ndarray) -> float:
        return float(self.canonical()[np.asarray(event, dtype=bool)].sum())

    def is_positive(self) -> bool:
        return all(t.coeff >= 0 and np.all(t.density >= 0) for t in self.terms)

    def __add__(self, other: "DualMeasure") -> "DualMeasure":
        return DualMeasure(self.space, self.terms + other.terms)

    def scale(self, a: float) -> "DualMeasure":
        return DualMeasure(self.space, [MeasureTerm(t.prior, t.density, a * t.coeff) for t in self.terms])

    def to_json(self) -> dict:
        return {
            "terms": [
                {
                    "prior": self.space.prior_names[t.prior],
                    "density": [float(v) for v in t.density],
                    "coeff": t.coeff,
                }
                for t in self.terms
            ]
        }

    @classmethod
    def from_json(cls, space: ScenarioSpace, obj: dict) -> "DualMeasure":
        terms = [
            MeasureTerm(space.prior_index(t["prior"]), np.asarray(t["density"], float), float(t.get("coeff", 1.0)))
            for t in obj["terms"]
        ]
        return cls(space, terms)


def pair(x: np.ndarray, mu: DualMeasure) -> float:
    """``<X, mu> = E_mu[X]``; ignores entries on c-null scenarios."""
    x = np.asarray(x, dtype=float)
    return float(sum(t.coeff * np.dot(mu.space.priors[t.prior], x * t.density) for t in mu.terms))
