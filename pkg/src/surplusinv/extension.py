"""Lazy sequence positions and the truncation extension of risk functionals.

A sequence is an explicit head ``X_1..X_H`` followed by closed-form pieces.
Each piece covers an index range ``[start, next_start)`` and follows one
monotone rule:

* constant ``b``,
* affine ``a n + b``,
* geometric ``a r^n + b`` with ``0 <= r < 1``.

Positive and negative parts, minima with constants and shifts by the unit
``U = (1, 1, ...)`` only split pieces at crossover indices, so every
intermediate result stays exact.  A crossover that lies past ``MAX_INDEX``
is placed at ``MAX_INDEX``; doubles cannot tell such indices apart anyway.  Bounded sequences play the role of the
principal ideal of ``U``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .reports import LawReport

MAX_INDEX = 2**62


class ExtensionError(RuntimeError):
    """The truncation values decreased, which a monotone functional forbids."""


@dataclass(frozen=True)
class Tail:
    kind: str
    a: float = 0.0
    b: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.kind not in ("constant", "affine", "geometric"):
            raise ValueError(f"unknown tail kind {self.kind!r}")
        if self.kind == "geometric" and not 0.0 <= self.r < 1.0:
            raise ValueError("geometric tails need 0 <= r < 1")

    @classmethod
    def constant(cls, c: float) -> "Tail":
        return cls("constant", 0.0, float(c))

    @classmethod
    def affine(cls, a: float, b: float) -> "Tail":
        return cls("affine", float(a), float(b))

    @classmethod
    def geometric(cls, c: float, r: float, d: float = 0.0) -> "Tail":
        return cls("geometric", float(c), float(d), float(r))

    def __call__(self, n):
        n = np.asarray(n, dtype=float)
        if self.kind == "constant":
            return np.full(n.shape, self.b)
        if self.kind == "affine":
            return self.a * n + self.b
        return self.a * self.r**n + self.b

    def shift(self, m: float) -> "Tail":
        return Tail(self.kind, self.a, self.b + m, self.r)

    def negate(self) -> "Tail":
        return Tail(self.kind, -self.a, -self.b, self.r)

    @property
    def limit(self) -> float:
        if self.kind == "affine" and self.a != 0:
            return math.copysign(math.inf, self.a)
        return self.b

    @property
    def increasing(self) -> bool:
        if self.kind == "affine":
            return self.a > 0
        if self.kind == "geometric":
            return self.a < 0 and self.r > 0
        return False

    def sup(self, start: int, end: float) -> float:
        """Supremum over ``start <= n < end``."""
        last = end - 1 if math.isfinite(end) else math.inf
        first = float(self(start))
        if math.isfinite(last):
            return max(first, float(self(last)))
        if self.kind == "affine" and self.a > 0:
            return math.inf
        return max(first, self.b if self.kind != "affine" else first)

    def weighted_sum(self, q: float, start: int, end: float) -> float:
        """``sum_{start <= n < end} q^n value(n)`` in closed form."""
        qe = 0.0 if math.isinf(end) else q**end
        geo = (q**start - qe) / (1 - q)
        if self.kind == "constant":
            return self.b * geo
        if self.kind == "affine":
            return self.a * (_lin_tail(q, start) - (0.0 if math.isinf(end) else _lin_tail(q, end))) + self.b * geo
        rq = self.r * q
        rqe = 0.0 if math.isinf(end) else rq**end
        return self.a * (rq**start - rqe) / (1 - rq) + self.b * geo

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "c": self.b}
        if self.kind == "affine":
            return {"kind": "affine", "a": self.a, "b": self.b}
        return {"kind": "geometric", "c": self.a, "r": self.r, "d": self.b}

    @classmethod
    def from_json(cls, obj: dict) -> "Tail":
        kind = obj["kind"]
        if kind == "constant":
            return cls.constant(obj.get("c", 0.0))
        if kind == "affine":
            return cls.affine(obj["a"], obj.get("b", 0.0))
        if kind == "geometric":
            return cls.geometric(obj["c"], obj["r"], obj.get("d", 0.0))
        raise ValueError(f"unknown tail kind {kind!r}")


def _lin_tail(q: float, k: float) -> float:
    """``sum_{n >= k} n q^n``."""
    return q**k * (k - (k - 1) * q) / (1 - q) ** 2


def _first_true(f, start: int, end: float, eventually: bool = False) -> float:
    """First index in ``[start, end)`` where the monotone predicate turns true.

    ``eventually`` says the predicate holds in the limit, so a search that runs
    past ``MAX_INDEX`` stops there instead of at ``end``.
    """
    if f(start):
        return start
    step, lo = 1, start
    hi = start + step
    while hi < end and not f(hi):
        lo = hi
        step *= 2
        hi = start + step
        if hi > MAX_INDEX:
            return MAX_INDEX if eventually and MAX_INDEX < end else end
    if hi >= end:
        if math.isinf(end):
            return end
        hi = int(end)
        if not f(hi - 1):
            return end
        hi -= 1
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if f(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _split(rule: Tail, start: int, end: float, level: float):
    """Split ``[start, end)`` into the parts where ``rule > level`` fails / holds."""
    if rule.increasing:
        k = _first_true(lambda n: float(rule(n)) > level, start, end, rule.limit > level)
        parts = [(start, k, False), (k, end, True)]
    else:
        k = _first_true(lambda n: float(rule(n)) <= level, start, end, rule.limit < level)
        parts = [(start, k, True), (k, end, False)]
    return [(s, e, above) for s, e, above in parts if s < e]


@dataclass(frozen=True)
class SeqPosition:
    head: tuple = ()
    pieces: tuple = field(default=((1, Tail.constant(0.0)),))

    def __post_init__(self):
        head = tuple(float(v) for v in self.head)
        if not all(math.isfinite(v) for v in head):
            raise ValueError("head entries must be finite")
        object.__setattr__(self, "head", head)
        if not self.pieces or self.pieces[0][0] != len(head) + 1:
            raise ValueError("the first piece must start right after the head")

    @classmethod
    def from_rule(cls, head, tail: Tail) -> "SeqPosition":
        head = tuple(head)
        return cls(head, ((len(head) + 1, tail),))

    @classmethod
    def unit(cls) -> "SeqPosition":
        return cls.from_rule((), Tail.constant(1.0))

    def _ranges(self):
        for j, (s, rule) in enumerate(self.pieces):
            e = self.pieces[j + 1][0] if j + 1 < len(self.pieces) else math.inf
            yield s, e, rule

    def value(self, n: int) -> float:
        if n < 1:
            raise IndexError("sequences are indexed from 1")
        if n <= len(self.head):
            return self.head[n - 1]
        for s, e, rule in self._ranges():
            if s <= n < e:
                return float(rule(n))
        raise IndexError(n)

    def values(self, count: int) -> np.ndarray:
        return np.array([self.value(n) for n in range(1, count + 1)])

    @property
    def bounded(self) -> bool:
        _, rule = self.pieces[-1]
        return not (rule.kind == "affine" and rule.a != 0)

    def _map(self, head_fn, level: float, above_fn, below_fn) -> "SeqPosition":
        pieces = []
        for s, e, rule in self._ranges():
            for ps, pe, above in _split(rule, s, e, level):
                pieces.append((ps, above_fn(rule) if above else below_fn(rule)))
        return SeqPosition(tuple(head_fn(np.array(self.head))), tuple(pieces))

    def neg_part(self) -> "SeqPosition":
        zero = Tail.constant(0.0)
        return self._map(lambda h: np.maximum(-h, 0.0), 0.0, lambda r: zero, lambda r: r.negate())

    def pos_part(self) -> "SeqPosition":
        zero = Tail.constant(0.0)
        return self._map(lambda h: np.maximum(h, 0.0), 0.0, lambda r: r, lambda r: zero)

    def min_const(self, c: float) -> "SeqPosition":
        cap = Tail.constant(c)
        return self._map(lambda h: np.minimum(h, c), c, lambda r: cap, lambda r: r)

    def negate(self) -> "SeqPosition":
        return SeqPosition(tuple(-v for v in self.head), tuple((s, r.negate()) for s, r in self.pieces))

    def shift(self, m: float) -> "SeqPosition":
        """``X + m U``."""
        return SeqPosition(tuple(v + m for v in self.head), tuple((s, r.shift(m)) for s, r in self.pieces))

    def to_json(self) -> dict:
        out = {"head": list(self.head)}
        if len(self.pieces) == 1:
            out["tail"] = self.pieces[0][1].to_json()
        else:
            out["pieces"] = [dict(start=s, **r.to_json()) for s, r in self.pieces]
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "SeqPosition":
        head = tuple(obj.get("head", ()))
        if "pieces" in obj:
            return cls(head, tuple((int(p["start"]), Tail.from_json(p)) for p in obj["pieces"]))
        return cls.from_rule(head, Tail.from_json(obj.get("tail", {"kind": "constant", "c": 0.0})))


def truncate(x: SeqPosition, n: float) -> SeqPosition:
    """``-(X^- min n)``."""
    if n < 1:
        raise ValueError("truncation level must be at least 1")
    return x.neg_part().min_const(float(n)).negate()


@dataclass(frozen=True)
class SeqFunctional:
    """Surplus-invariant monotone convex functionals on sequences.

    ``weighted_shortfall``: ``sum_n w q^n X_n^-``.
    ``sup_shortfall``: ``sup_n X_n^-``.
    Calling the functional is only allowed on bounded sequences; the
    closed form accepts every supported sequence.
    """

    kind: str = "weighted_shortfall"
    w: float = 1.0
    q: float = 0.5

    def __post_init__(self):
        if self.kind not in ("weighted_shortfall", "sup_shortfall"):
            raise ValueError(f"unknown sequence functional {self.kind!r}")
        if self.kind == "weighted_shortfall" and not (self.w > 0 and 0 < self.q < 1):
            raise ValueError("weighted_shortfall needs w > 0 and 0 < q < 1")

    def closed_form(self, x: SeqPosition) -> float:
        neg = x.neg_part()
        if self.kind == "sup_shortfall":
            vals = [max(neg.head, default=0.0)] + [rule.sup(s, e) for s, e, rule in neg._ranges()]
            return float(max(vals))
        h = np.array(neg.head)
        total = float(np.dot(self.q ** np.arange(1, h.size + 1), h)) if h.size else 0.0
        total += sum(rule.weighted_sum(self.q, s, e) for s, e, rule in neg._ranges())
        return self.w * total

    def __call__(self, x: SeqPosition) -> float:
        if not x.bounded:
            raise ValueError("the base functional is defined on bounded sequences; use extend")
        return self.closed_form(x)


@dataclass
class ExtensionResult:
    value: float
    trace: list
    closed_form: float | None = None
    converged: bool = True

    def to_json(self) -> dict:
        out = {"value": self.value, "trace": [[n, v] for n, v in self.trace], "converged": self.converged}
        if self.closed_form is not None:
            out["closed_form"] = self.closed_form
        return out


def extend(rho: SeqFunctional, x: SeqPosition, tol: float = 1e-9, base: int = 2) -> ExtensionResult:
    """``lim_n rho(-(X^- min n))`` along ``n = base^k``.

    Stops once two successive levels differ by less than ``tol``; reports
    ``inf`` once the values pass ``1 / tol`` while still growing by at least
    ``tol`` per level.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    trace = []
    prev = None
    n = 1
    while n <= MAX_INDEX:
        v = rho(truncate(x, n))
        trace.append((n, v))
        if prev is not None:
            if v < prev - 1e-12 * max(1.0, abs(prev)):
                raise ExtensionError(f"truncation values decreased at n={n}: {prev} -> {v}")
            step = v - prev
            if step < tol:
                return ExtensionResult(v, trace, rho.closed_form(x))
            if v > 1.0 / tol:
                return ExtensionResult(math.inf, trace, rho.closed_form(x))
        prev = v
        n *= base
    return ExtensionResult(math.inf, trace, rho.closed_form(x), converged=False)


def extend_s_additive(rho: SeqFunctional, x: SeqPosition, alpha: float, tol: float = 1e-10) -> float:
    """``inf{m : lim_n rho(-((X + mU)^- min n)) <= alpha}`` by bisection on ``m``.

    ``rho`` is the weighted shortfall defining the acceptance set
    ``{rho <= alpha}``; capital is measured in the unit ``U``.
    """
    if rho.kind != "weighted_shortfall":
        raise ValueError("the capital extension is built from a weighted shortfall set")
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    ok = lambda m: extend(rho, x.shift(m), tol=1e-13).value <= alpha
    step = 1.0
    hi = 0.0
    while not ok(hi):
        hi += step
        step *= 2
        if hi > 1e12:
            return math.inf
    step, lo = 1.0, hi - 1.0
    while ok(lo):
        lo -= step
        step *= 2
        if lo < -1e12:
            raise ExtensionError("capital requirement is -inf")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def uniqueness_check(rho: SeqFunctional, xs, tol: float = 1e-9) -> LawReport:
    """Extensions along ``2^k`` and ``3^k`` and the closed form must coincide."""
    rep = LawReport("extension_uniqueness", trials=len(xs))
    rows = []
    for x in xs:
        a = extend(rho, x, tol, base=2).value
        b = extend(rho, x, tol, base=3).value
        c = rho.closed_form(x)
        rows.append([a, b, c])
        rep.tested += 1
        vals = [a, b, c]
        if any(math.isinf(v) for v in vals):
            agree = all(math.isinf(v) for v in vals)
        else:
            agree = max(vals) - min(vals) <= 2 * tol
        if not agree:
            rep.details = {"routes": rows}
            return rep.fail(X=x.to_json(), schedule_2=a, schedule_3=b, closed_form=c)
    rep.details = {"routes": rows}
    return rep
