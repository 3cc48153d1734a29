"""Orlicz functions, Luxemburg norms, conjugates and heart membership.

The same :class:`OrliczFunction` objects double as loss functions for
shortfall acceptance sets, where convexity is optional.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

_PROBE = np.concatenate([np.linspace(0.0, 2.0, 81), np.geomspace(2.0, 50.0, 60)[1:]])
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class OrliczError(ValueError):
    pass


@dataclass(frozen=True)
class OrliczFunction:
    """An increasing map ``[0, inf) -> [0, inf]`` with ``Phi(0) = 0``.

    Use the constructors (:meth:`power`, :meth:`linfty`, ...) rather than the
    raw initializer.  ``convex=False`` skips the convexity probe, which is
    only wanted for non-convex shortfall losses.
    """

    kind: str
    params: tuple = ()
    fn: Callable | None = field(default=None, compare=False, repr=False)
    convex: bool = True

    def __post_init__(self):
        if self.kind not in _EVALUATORS and self.fn is None:
            raise OrliczError(f"no evaluator for Orlicz kind {self.kind!r}")
        self._validate()

    # constructors ---------------------------------------------------------
    @classmethod
    def power(cls, p: float) -> "OrliczFunction":
        if p < 1:
            raise OrliczError("power Orlicz functions need p >= 1")
        return cls("power", (float(p),))

    @classmethod
    def scaled_power(cls, p: float, c: float) -> "OrliczFunction":
        if p < 1 or c <= 0:
            raise OrliczError("scaled_power needs p >= 1 and c > 0")
        return cls("scaled_power", (float(p), float(c)))

    @classmethod
    def linfty(cls) -> "OrliczFunction":
        return cls("linfty_type")

    @classmethod
    def exp_minus_one(cls, a: float = 1.0) -> "OrliczFunction":
        if a <= 0:
            raise OrliczError("exp_minus_one needs a positive rate")
        return cls("exp_minus_one", (float(a),))

    @classmethod
    def piecewise_linear(cls, knots, convex: bool = True) -> "OrliczFunction":
        """Linear interpolation through ``knots = [(x, y), ...]``.

        ``(0, 0)`` is prepended when missing; the last slope continues past
        the final knot.
        """
        pts = sorted((float(a), float(b)) for a, b in knots)
        if not pts or pts[0] != (0.0, 0.0):
            pts.insert(0, (0.0, 0.0))
        xs = tuple(p[0] for p in pts)
        if len(xs) < 2 or len(set(xs)) != len(xs) or xs[0] < 0:
            raise OrliczError("piecewise_linear needs distinct knots with x >= 0")
        return cls("piecewise_linear", tuple(pts), convex=convex)

    @classmethod
    def custom(cls, fn: Callable, convex: bool = True, name: str = "custom") -> "OrliczFunction":
        return cls(name, (), fn=fn, convex=convex)

    @classmethod
    def from_spec(cls, spec) -> "OrliczFunction":
        """Parse ``{"kind": "power", "p": 2}`` or the shorthand ``"power:2"``."""
        if isinstance(spec, str):
            kind, _, arg = spec.partition(":")
            spec = {"kind": kind}
            if arg:
                spec["p" if kind in ("power", "scaled_power") else "a"] = float(arg)
        kind = spec.get("kind")
        convex = bool(spec.get("convex", True))
        if kind == "power":
            return cls.power(spec["p"])
        if kind == "scaled_power":
            return cls.scaled_power(spec["p"], spec.get("c", 1.0))
        if kind in ("linfty", "linfty_type"):
            return cls.linfty()
        if kind in ("exp_minus_one", "exponential"):
            return cls.exp_minus_one(spec.get("a", 1.0))
        if kind == "piecewise_linear":
            return cls.piecewise_linear(spec["knots"], convex=convex)
        raise OrliczError(f"unknown Orlicz/loss kind {kind!r} (custom kinds need an evaluator)")

    def to_spec(self) -> dict:
        if self.kind == "power":
            return {"kind": "power", "p": self.params[0]}
        if self.kind == "scaled_power":
            return {"kind": "scaled_power", "p": self.params[0], "c": self.params[1]}
        if self.kind == "exp_minus_one":
            return {"kind": "exp_minus_one", "a": self.params[0]}
        if self.kind == "piecewise_linear":
            return {"kind": "piecewise_linear", "knots": [list(k) for k in self.params]}
        return {"kind": self.kind}

    # evaluation -----------------------------------------------------------
    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            raise OrliczError("Orlicz functions are defined on [0, inf)")
        if self.fn is not None:
            return np.vectorize(self.fn, otypes=[float])(x)
        return _EVALUATORS[self.kind](self.params, x)

    @property
    def finite_valued(self) -> bool:
        return self.kind != "linfty_type" and not (self.fn is not None and np.isinf(self(_PROBE)).any())

    @property
    def is_builtin(self) -> bool:
        return self.fn is None

    def _validate(self):
        v = self(_PROBE)
        if v[0] != 0.0:
            raise OrliczError("Orlicz functions must vanish at 0")
        if np.any(np.isnan(v)) or np.any(v < 0):
            raise OrliczError("Orlicz functions take values in [0, inf]")
        with np.errstate(invalid="ignore"):
            drops = np.diff(v) < -1e-12 * np.maximum(1.0, np.abs(v[1:]))
        if np.any(drops):
            raise OrliczError("Orlicz functions must be increasing")
        if self.convex:
            a, b = _PROBE[:-2], _PROBE[2:]
            mid = self((a + b) / 2)
            with np.errstate(invalid="ignore"):
                rhs = (self(a) + self(b)) / 2
            bad = mid > rhs + 1e-9 * np.maximum(1.0, np.abs(np.where(np.isfinite(rhs), rhs, 0.0)))
            if np.any(bad):
                raise OrliczError("Orlicz function fails the convexity probe")

    def conjugate(self, y: float) -> float:
        return conjugate(self, y)


def _power(params, x):
    return x ** params[0]


def _scaled_power(params, x):
    return params[1] * x ** params[0]


def _linfty(params, x):
    # left-continuous at the jump: Phi(1) = 0
    return np.where(x <= 1.0, 0.0, np.inf)


def _exp_minus_one(params, x):
    with np.errstate(over="ignore"):
        return np.expm1(params[0] * x)


def _piecewise_linear(params, x):
    xs = np.array([k[0] for k in params])
    ys = np.array([k[1] for k in params])
    slope = (ys[-1] - ys[-2]) / (xs[-1] - xs[-2])
    return np.where(x <= xs[-1], np.interp(x, xs, ys), ys[-1] + slope * (x - xs[-1]))


_EVALUATORS = {
    "power": _power,
    "scaled_power": _scaled_power,
    "linfty_type": _linfty,
    "exp_minus_one": _exp_minus_one,
    "piecewise_linear": _piecewise_linear,
}


def _expect(phi: OrliczFunction, absx: np.ndarray, w: np.ndarray, lam: float) -> float:
    vals = phi(absx / lam)
    if np.any(np.isinf(vals)):
        return math.inf
    return float(np.dot(w, vals))


def luxemburg_norm(x, phi: OrliczFunction, prior) -> float:
    """``inf{lam > 0 : E_P[Phi(|X| / lam)] <= 1}`` by bracketing and bisection."""
    prior = np.asarray(prior, dtype=float)
    on = prior > 0
    absx = np.abs(np.asarray(x, dtype=float))[on]
    w = prior[on]
    if not np.any(absx > 0):
        return 0.0
    if phi.kind == "linfty_type":
        # E[Phi(|X|/lam)] jumps from 0 to inf exactly at lam = max|X|
        return float(absx.max())

    def ok(lam):
        return _expect(phi, absx, w, lam) <= 1.0

    hi = float(absx.max()) + 1.0
    while not ok(hi):
        hi *= 2.0
        if hi > 1e300:
            return math.inf
    lo = hi / 2.0
    while ok(lo):
        hi, lo = lo, lo / 2.0
        if lo < 1e-300:
            return 0.0
    while hi - lo > 1e-10 * max(1.0, hi):
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def luxemburg_profile(x, phi: OrliczFunction, prior, lam: float) -> float:
    """``g(lam) = E_P[Phi(|X| / lam)]``, exposed for diagnostics and tests."""
    prior = np.asarray(prior, dtype=float)
    on = prior > 0
    return _expect(phi, np.abs(np.asarray(x, float))[on], prior[on], lam)


def conjugate(phi: OrliczFunction, y: float) -> float:
    """``Phi*(y) = sup{x y - Phi(x) : x >= 0}``."""
    if y < 0:
        raise OrliczError("the Orlicz conjugate is taken at y >= 0")
    if y == 0:
        return 0.0
    k, prm = phi.kind, phi.params
    if phi.is_builtin:
        if k in ("power", "scaled_power"):
            p = prm[0]
            c = prm[1] if k == "scaled_power" else 1.0
            if p == 1.0:
                return 0.0 if y <= c else math.inf
            xs = (y / (c * p)) ** (1.0 / (p - 1.0))
            return (p - 1.0) * c * xs**p
        if k == "linfty_type":
            return float(y)
        if k == "exp_minus_one":
            a = prm[0]
            if y <= a:
                return 0.0
            xs = math.log(y / a) / a
            return xs * y - (y / a - 1.0)
        if k == "piecewise_linear":
            xs = np.array([q[0] for q in prm])
            ys = np.array([q[1] for q in prm])
            if y > (ys[-1] - ys[-2]) / (xs[-1] - xs[-2]):
                return math.inf
            return float(np.max(xs * y - ys))
    return _numeric_conjugate(phi, y)


def _golden_max(h, a: float, b: float, tol: float = 1e-12) -> tuple[float, float]:
    c, d = b - _GOLDEN * (b - a), a + _GOLDEN * (b - a)
    hc, hd = h(c), h(d)
    while b - a > tol * max(1.0, abs(a) + abs(b)):
        if hc >= hd:
            b, d, hd = d, c, hc
            c = b - _GOLDEN * (b - a)
            hc = h(c)
        else:
            a, c, hc = c, d, hd
            d = a + _GOLDEN * (b - a)
            hd = h(d)
    best = max((h(a), a), (h(b), b), (hc, c), (hd, d))
    return best


def _numeric_conjugate(phi: OrliczFunction, y: float) -> float:
    def h(x):
        v = float(phi(x))
        return -math.inf if math.isinf(v) else x * y - v

    cap, prev = 1.0, h(0.0)
    while cap <= 1e9:
        val, _ = _golden_max(h, 0.0, cap)
        val = max(val, prev)
        if cap > 1.0 and val - prev < 1e-12:
            return val
        prev, cap = val, cap * 2.0
    return math.inf


def in_heart(x, phi: OrliczFunction, prior) -> bool:
    """Whether ``E_P[Phi(|X| / lam)] < inf`` for every ``lam > 0``.

    Decided analytically for built-ins.  For custom functions the answer
    comes from a probe over ``lam = 10^-6 .. 10^6`` and is indicative only.
    """
    prior = np.asarray(prior, dtype=float)
    absx = np.abs(np.asarray(x, dtype=float))[prior > 0]
    if not np.any(absx > 0):
        return True
    if phi.is_builtin:
        return phi.kind != "linfty_type"
    return all(math.isfinite(_expect(phi, absx, prior[prior > 0], lam)) for lam in np.geomspace(1e-6, 1e6, 49))


@dataclass
class Delta2Report:
    max_ratio: float
    plausible: bool
    first_failure: float | None
    grid: tuple[float, float]

    def to_json(self) -> dict:
        return {
            "max_ratio": self.max_ratio if math.isfinite(self.max_ratio) else "inf",
            "verdict": "delta2 plausible" if self.plausible else "delta2 fails on probe",
            "first_failure": self.first_failure,
            "grid": list(self.grid),
        }


def delta2_probe(phi: OrliczFunction, x0: float = 0.1, x_max: float = 100.0, k: float | None = None,
                 points: int = 400) -> Delta2Report:
    """Estimate ``sup Phi(2x) / Phi(x)`` over a log grid on ``[x0, x_max]``.

    With ``k`` given the verdict is ``ratio <= k``.  Otherwise the ratio must
    stay finite and must not grow across the upper half of the grid.
    """
    xs = np.geomspace(x0, x_max, points)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        num, den = phi(2 * xs), phi(xs)
        ratio = np.where(den > 0, num / den, np.where(num > 0, np.inf, np.nan))
    valid = ~np.isnan(ratio)
    if not valid.any():
        return Delta2Report(0.0, True, None, (x0, x_max))
    r = np.where(valid, ratio, -np.inf)
    top = float(r.max())
    bad = np.isinf(r) & (r > 0)
    first = float(xs[np.argmax(bad)]) if bad.any() else None
    if k is not None:
        plausible = top <= k
        if not plausible and first is None:
            first = float(xs[np.argmax(r > k)])
    else:
        half = points // 2
        lower, upper = r[:half], r[half:]
        plausible = math.isfinite(top) and upper.max() <= lower.max() * (1 + 1e-6)
        if not plausible and first is None:
            first = float(xs[half + int(np.argmax(upper > lower.max() * (1 + 1e-6)))])
    return Delta2Report(top, bool(plausible), first, (x0, x_max))
