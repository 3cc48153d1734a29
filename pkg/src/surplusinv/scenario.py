"""Finite scenario spaces, positions and the lattice operations on them.

Positions are plain 1-D float arrays indexed by scenario.  Entries outside
the union of the prior supports carry no information (they are quasi-surely
zero), so :meth:`ScenarioSpace.position` maps every payoff vector to the
canonical representative that is zero off that union.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

WEIGHT_TOL = 1e-12


class SpaceError(ValueError):
    """Malformed scenario space or a position that does not fit it."""


@dataclass(frozen=True, eq=False, init=False)
class ScenarioSpace:
    """Ordered scenarios with one or more probability priors.

    Parameters
    ----------
    labels : sequence of str
        Scenario names, metadata only.  Scenarios are addressed by index.
    priors : sequence of weight vectors
        Each vector is nonnegative and sums to one within ``1e-12``.
    prior_names : sequence of str, optional
        Defaults to ``P0, P1, ...``.
    """

    labels: tuple[str, ...]
    priors: tuple[np.ndarray, ...]
    prior_names: tuple[str, ...] = field(default=())

    def __init__(self, labels, priors, prior_names=None):
        labels = tuple(str(s) for s in labels)
        if not labels:
            raise SpaceError("a scenario space needs at least one scenario")
        if len(set(labels)) != len(labels):
            raise SpaceError("scenario labels must be unique")
        priors = [np.asarray(p, dtype=float) for p in priors]
        if not priors:
            raise SpaceError("at least one prior is required")
        for k, p in enumerate(priors):
            if p.shape != (len(labels),):
                raise SpaceError(f"prior {k} has length {p.size}, expected {len(labels)}")
            if not np.all(np.isfinite(p)) or np.any(p < 0):
                raise SpaceError(f"prior {k} has negative or non-finite weights")
            if abs(p.sum() - 1.0) > WEIGHT_TOL:
                raise SpaceError(f"prior {k} sums to {p.sum()!r}, not 1")
            p.flags.writeable = False
        if prior_names is None:
            prior_names = [f"P{k}" for k in range(len(priors))]
        prior_names = tuple(str(s) for s in prior_names)
        if len(prior_names) != len(priors) or len(set(prior_names)) != len(prior_names):
            raise SpaceError("prior names must be unique, one per prior")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "priors", tuple(priors))
        object.__setattr__(self, "prior_names", prior_names)
        support = np.zeros(len(labels), dtype=bool)
        for p in priors:
            support |= p > 0
        support.flags.writeable = False
        object.__setattr__(self, "_support", support)

    @classmethod
    def uniform(cls, n: int, labels=None) -> "ScenarioSpace":
        labels = labels or [f"w{i + 1}" for i in range(n)]
        return cls(labels, [np.full(n, 1.0 / n)])

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def support(self) -> np.ndarray:
        """Union of the prior supports as a boolean mask."""
        return self._support

    def prior(self, which: int | str = 0) -> np.ndarray:
        if isinstance(which, str):
            try:
                which = self.prior_names.index(which)
            except ValueError:
                raise SpaceError(f"unknown prior {which!r}") from None
        return self.priors[which]

    def prior_index(self, which: int | str) -> int:
        if isinstance(which, str):
            return self.prior_names.index(which)
        if not 0 <= which < len(self.priors):
            raise SpaceError(f"prior index {which} out of range")
        return int(which)

    def position(self, payoffs: Sequence[float]) -> np.ndarray:
        """Validate ``payoffs`` and return the canonical read-only position."""
        x = np.array(payoffs, dtype=float)
        if x.shape != (self.n,):
            raise SpaceError(f"position has shape {x.shape}, expected ({self.n},)")
        if not np.all(np.isfinite(x)):
            raise SpaceError("positions must have finite entries")
        x[~self.support] = 0.0
        x.flags.writeable = False
        return x

    def event(self, members) -> np.ndarray:
        """Build an event mask from labels, indices or a boolean vector."""
        members = list(members) if not isinstance(members, np.ndarray) else members
        if isinstance(members, np.ndarray) and members.dtype == bool:
            if members.shape != (self.n,):
                raise SpaceError("event mask has the wrong length")
            return members.copy()
        mask = np.zeros(self.n, dtype=bool)
        for m in members:
            if isinstance(m, str):
                if m not in self.labels:
                    raise SpaceError(f"unknown scenario {m!r}")
                mask[self.labels.index(m)] = True
            else:
                mask[int(m)] = True
        return mask

    def names(self, mask: np.ndarray) -> list[str]:
        return [lab for lab, m in zip(self.labels, mask) if m]


def pos_part(x: np.ndarray) -> np.ndarray:
    return np.maximum(x, 0.0)


def neg_part(x: np.ndarray) -> np.ndarray:
    """``X^- = -min(X, 0)``; always nonnegative."""
    # -np.minimum would produce -0.0 entries
    return np.maximum(-np.asarray(x, dtype=float), 0.0)


def band_project(x: np.ndarray, event: np.ndarray) -> np.ndarray:
    """Restrict ``x`` to ``event``: equal to ``x`` on it, zero elsewhere."""
    return np.where(event, x, 0.0)


def order_leq(x: np.ndarray, y: np.ndarray, support: np.ndarray | None = None) -> bool:
    """Quasi-sure order: ``x <= y`` on every scenario of ``support``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if support is None:
        return bool(np.all(x <= y))
    return bool(np.all(x[support] <= y[support]))


def indicator(n: int, i: int) -> np.ndarray:
    e = np.zeros(n)
    e[i] = 1.0
    return e
