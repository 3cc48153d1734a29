"""Exact VaR, ES, shortfall and SPAN tests on a finite prior.

VaR follows the strict-inequality convention
``VaR_a(X) = inf{m : P(X + m < 0) <= a}`` and ES integrates the resulting
step function ``b -> VaR_b(X)`` exactly over ``(0, a]``.
"""

from __future__ import annotations

import numpy as np

from .orlicz import OrliczFunction
from .scenario import neg_part


def _check_level(alpha: float):
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"level must lie in (0, 1), got {alpha!r}")


def atoms(x, prior) -> tuple[np.ndarray, np.ndarray]:
    """Distinct values of ``x`` under ``prior`` (ascending) and their masses."""
    x = np.asarray(x, dtype=float)
    prior = np.asarray(prior, dtype=float)
    on = prior > 0
    vals, inv = np.unique(x[on], return_inverse=True)
    mass = np.zeros(vals.size)
    np.add.at(mass, inv, prior[on])
    return vals, mass


def mass_below(x, t: float, prior) -> float:
    """``P(X < t)``.  Shared by VaR and the VaR acceptance test so both round alike."""
    return float(prior[(x < t) & (prior > 0)].sum())


def var(x, alpha: float, prior) -> float:
    """Value at Risk, ``-sup{t : P(X < t) <= alpha}``."""
    _check_level(alpha)
    x = np.asarray(x, dtype=float)
    prior = np.asarray(prior, dtype=float)
    vals, _ = atoms(x, prior)
    # the sup is the largest atom v with P(X < v) <= alpha
    for v in vals[::-1]:
        if mass_below(x, v, prior) <= alpha:
            return float(-v)
    return float(-vals[0])


def es(x, alpha: float, prior) -> float:
    """Expected Shortfall ``(1/alpha) * int_0^alpha VaR_b(X) db``, exact."""
    _check_level(alpha)
    vals, mass = atoms(x, prior)
    cum = np.cumsum(mass)
    start = np.concatenate(([0.0], cum[:-1]))
    # VaR_b = -vals[j] for b in [start_j, cum_j)
    width = np.clip(np.minimum(cum, alpha) - start, 0.0, None)
    return float(-np.dot(vals, width) / alpha)


def shortfall(x, loss: OrliczFunction, prior) -> float:
    """Expected loss ``E_P[l(X^-)]``."""
    prior = np.asarray(prior, dtype=float)
    on = prior > 0
    return float(np.dot(prior[on], loss(neg_part(np.asarray(x, float)[on]))))


def span_accept(x, event, prior) -> bool:
    """SPAN test ``P({X < 0} & E) = 0``."""
    x = np.asarray(x, dtype=float)
    hit = np.asarray(event, dtype=bool) & (np.asarray(prior) > 0)
    return not bool(np.any(x[hit] < 0))


def expectation(x, prior) -> float:
    return float(np.dot(prior, x))
