"""Convex conjugates, biconjugate reconstruction, supporting functionals and polars.

Dual elements are plain density vectors ``d`` acting by ``phi(X) = sum_i d_i X_i``.
Polar computations pair against a prior instead, ``E_P[Z X]``, so that a
polar element is a density in the probabilistic sense.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.optimize import linprog, minimize
from scipy.spatial import ConvexHull

from .orlicz import conjugate as orlicz_conjugate
from .reports import LawReport
from .robust import DualMeasure, pair
from .functionals import RiskFunctional
from .scenario import ScenarioSpace, neg_part

DOMAIN_TOL = 1e-12
RESTARTS = 16
MEMBER_TOL = 1e-10
RADIAL_PROBE = 1e9


class NotRadiallyBounded(ValueError):
    pass


class Inconclusive(RuntimeError):
    """A numeric search could not settle a question either way."""


# conjugates -----------------------------------------------------------------

def _on(rho: RiskFunctional) -> np.ndarray:
    return rho.space.support


def _closed_conjugate(rho: RiskFunctional, d: np.ndarray) -> float | None:
    on = _on(rho)
    dd = d[on]
    scale = max(1.0, float(np.max(np.abs(dd), initial=0.0)))
    tol = DOMAIN_TOL * scale
    if rho.kind == "expectation":
        p = rho.space.prior(rho.params["prior"])[on]
        return 0.0 if np.all(np.abs(dd + p) <= tol) else math.inf
    if rho.kind == "max_loss":
        return 0.0 if np.all(dd <= tol) and abs(dd.sum() + 1) <= tol * dd.size else math.inf
    if rho.kind == "es":
        p = rho.space.prior(rho.params["prior"])[on]
        a = rho.params["alpha"]
        ok = np.all(dd <= tol) and abs(dd.sum() + 1) <= tol * dd.size and np.all(-dd <= p / a + tol)
        return 0.0 if ok else math.inf
    if rho.kind == "max_shortfall":
        return 0.0 if np.all(dd <= tol) and -dd.sum() <= 1 + tol * dd.size else math.inf
    if rho.kind == "shortfall" and rho.params["loss"].convex:
        if np.any(dd > 0):
            return math.inf
        p = rho.space.prior(rho.params["prior"])[on]
        total = 0.0
        for di, pi in zip(dd, p):
            if pi == 0:
                if di != 0:
                    return math.inf
                continue
            total += pi * orlicz_conjugate(rho.params["loss"], -di / pi)
        return total
    return None


def conjugate_rho(rho: RiskFunctional, d, numeric: bool = False, seed: int = 0) -> float:
    """``rho*(d) = sup_X (d.X - rho(X))``.

    Built-in functionals use exact formulas.  Anything else, or
    ``numeric=True``, goes through a multi-start local search over a box that
    doubles until the running sup stops growing; growth that persists up to
    the largest box is reported as ``inf``.
    """
    if not (rho.claims_convex and rho.claims_monotone):
        raise ValueError("conjugates are only computed for convex monotone functionals")
    d = np.where(rho.space.support, np.asarray(d, dtype=float), 0.0)
    if not numeric:
        v = _closed_conjugate(rho, d)
        if v is not None:
            return v
    return _numeric_conjugate(rho, d, seed)


def _numeric_conjugate(rho: RiskFunctional, d: np.ndarray, seed: int,
                       L0: float = 10.0, L_max: float = 1e6, starts: int = 4) -> float:
    on = _on(rho)
    k = int(on.sum())
    rng = np.random.default_rng(seed)

    def embed(y):
        x = np.zeros(rho.space.n)
        x[on] = y
        return x

    def neg_h(y):
        v = rho(embed(y))
        return math.inf if math.isinf(v) else -(float(np.dot(d[on], y)) - v)

    best, best_y = 0.0 - rho(np.zeros(rho.space.n)), np.zeros(k)
    prev, L = None, L0
    while L <= L_max:
        bounds = [(-L, L)] * k
        cands = [np.clip(best_y, -L, L)] + [rng.uniform(-L, L, k) for _ in range(starts)]
        for y0 in cands:
            r = minimize(neg_h, y0, method="Powell", bounds=bounds, options={"xtol": 1e-10, "ftol": 1e-13})
            r = minimize(neg_h, r.x, method="Nelder-Mead", bounds=bounds,
                         options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 4000})
            y = np.clip(r.x, -L, L)
            v = -neg_h(y)
            if v > best:
                best, best_y = v, y
        if prev is not None and best - prev <= 1e-9 * max(1.0, abs(best)):
            return float(best)
        prev, L = best, 2 * L
    return math.inf


# dual domains and biconjugate --------------------------------------------------

@dataclass
class DualDomain:
    """``{lower <= d <= upper}`` cut by ``normal . d = rhs`` (or ``>= rhs``).

    ``conj`` evaluates the conjugate inside the domain and ``grad`` its
    gradient; ``None`` for either means it is identically zero.
    """

    lower: np.ndarray
    upper: np.ndarray
    normal: np.ndarray | None = None
    rhs: float = -1.0
    equality: bool = True
    conj: Callable[[np.ndarray], float] | None = None
    grad: Callable[[np.ndarray], np.ndarray] | None = None
    kind: str = ""

    def project(self, y: np.ndarray) -> np.ndarray:
        x = np.clip(y, self.lower, self.upper)
        if self.normal is None:
            return x
        if not self.equality and float(self.normal @ x) >= self.rhs:
            return x
        return _project_box_plane(y, self.lower, self.upper, self.normal, self.rhs)

    def value(self, d: np.ndarray, target: np.ndarray) -> float:
        return float(target @ d) - (self.conj(d) if self.conj else 0.0)


def _project_box_plane(y, lo, hi, a, c):
    """Exact Euclidean projection onto ``{lo <= x <= hi, a.x = c}``.

    ``x(t) = clip(y - t a)`` makes ``a.x(t)`` piecewise linear and
    nonincreasing in ``t``; the root is located between consecutive
    breakpoints and interpolated.
    """
    act = a != 0
    with np.errstate(divide="ignore", invalid="ignore"):
        bps = np.concatenate([(y[act] - lo[act]) / a[act], (y[act] - hi[act]) / a[act]])
    bps = np.unique(bps[np.isfinite(bps)])
    f = lambda t: float(a @ np.clip(y - t * a, lo, hi)) - c
    if bps.size == 0:
        return np.clip(y, lo, hi)
    vals = np.array([f(t) for t in bps])
    # beyond the outermost breakpoints every active coordinate is clipped
    if vals[0] < 0 or vals[-1] > 0:
        raise ValueError("dual domain is empty")
    j = int(np.flatnonzero(vals <= 0)[0])
    if vals[j] == 0 or j == 0:
        return np.clip(y - bps[j] * a, lo, hi)
    t0, t1 = bps[j - 1], bps[j]
    f0, f1 = f(t0), f(t1)
    t = t0 if f0 == f1 else t0 + (t1 - t0) * f0 / (f0 - f1)
    return np.clip(y - t * a, lo, hi)


def dual_domain(rho: RiskFunctional, domain: str = "negative", S=None, cap: float = 1e6) -> DualDomain:
    """Feasible densities for the biconjugate of ``rho``.

    ``negative`` restricts to ``d <= 0``; ``negative_with_S`` adds
    ``d . S = -1``.  Coordinates outside the support are pinned to zero.
    """
    space = rho.space
    on = space.support
    n = space.n
    upper = np.zeros(n)
    lower = np.where(on, -cap, 0.0)
    normal = None
    if domain == "negative_with_S":
        normal = np.where(on, rho.payoff if S is None else np.asarray(S, dtype=float), 0.0)
        lower = np.where(on, np.maximum(lower, -1.0 / np.where(normal > 0, normal, 1.0)), 0.0)
    elif domain != "negative":
        raise ValueError(f"unknown dual domain {domain!r}")

    kind = rho.kind
    if kind == "expectation":
        p = space.prior(rho.params["prior"])
        return DualDomain(-p, -p, kind=kind)
    if kind == "es":
        p = space.prior(rho.params["prior"])
        return DualDomain(np.maximum(lower, -p / rho.params["alpha"]), upper, normal, kind=kind)
    if kind == "max_loss":
        return DualDomain(lower, upper, normal, kind=kind)
    if kind == "max_shortfall" and normal is None:
        return DualDomain(lower, upper, np.where(on, 1.0, 0.0), rhs=-1.0, equality=False, kind=kind)
    if kind == "shortfall" and normal is None:
        p = space.prior(rho.params["prior"])
        lower = np.where(p > 0, lower, 0.0)
        loss = rho.params["loss"]
        conj = lambda d: float(sum(pi * orlicz_conjugate(loss, -di / pi) for di, pi in zip(d, p) if pi > 0))
        grad = _shortfall_grad(loss, p) or _fd_grad(conj)
        return DualDomain(lower, upper, conj=conj, grad=grad, kind=kind)
    conj = lambda d: conjugate_rho(rho, d, numeric=True)
    return DualDomain(lower, upper, normal, conj=conj, grad=_fd_grad(conj), kind="numeric")


def _shortfall_grad(loss, p: np.ndarray):
    """Gradient of ``d -> sum p_i l*(-d_i / p_i)`` for built-in losses.

    ``l*'(y)`` is the maximizer ``x`` in ``x y - l(x)``, so each partial
    derivative is ``-x*(-d_i / p_i)``.
    """
    k, prm = loss.kind, loss.params
    if k in ("power", "scaled_power") and prm[0] > 1:
        c = prm[1] if k == "scaled_power" else 1.0
        argmax = lambda y: (y / (c * prm[0])) ** (1.0 / (prm[0] - 1.0))
    elif k == "exp_minus_one":
        argmax = lambda y: np.log(np.maximum(y, prm[0]) / prm[0]) / prm[0]
    elif k == "linfty_type":
        argmax = lambda y: np.ones_like(y)
    else:
        return None
    on = p > 0

    def g(d):
        out = np.zeros_like(d)
        out[on] = -argmax(np.maximum(-d[on] / p[on], 0.0))
        return out
    return g


def _fd_grad(f, h: float = 1e-7):
    # backward differences keep the probes inside d <= 0
    def g(d):
        base = f(d)
        out = np.zeros_like(d)
        for i in range(d.size):
            e = np.zeros_like(d)
            e[i] = h
            out[i] = (base - f(d - e)) / h
        return out
    return g


@dataclass
class DualResult:
    primal: float
    dual: float
    density: np.ndarray
    restart: int
    iterations: list = field(default_factory=list)

    @property
    def gap(self) -> float:
        return abs(self.primal - self.dual)

    def to_json(self) -> dict:
        return {"primal": self.primal, "dual": self.dual, "gap": self.gap,
                "witness_density": [float(v) for v in self.density]}


def biconjugate(rho: RiskFunctional, x, domain: str = "negative_with_S", S=None, seed: int = 0,
                max_iter: int = 2000) -> DualResult:
    """Dual value ``sup_d (d.X - rho*(d))`` over the restricted density set.

    On the surplus-invariant domain (``negative``) the objective is evaluated
    at ``-X^-``.  Projected gradient ascent with steps ``eta/k`` is restarted
    from ``RESTARTS`` seeded points; the best value wins, ties going to the
    lowest restart index.
    """
    if not (rho.claims_convex and rho.claims_monotone):
        raise ValueError("biconjugate needs a convex monotone functional")
    if domain == "negative" and not rho.claims_si:
        raise ValueError("the negative domain represents surplus-invariant functionals only")
    if domain == "negative_with_S" and not rho.claims_s_additive:
        raise ValueError("the S domain represents S-additive functionals only")
    x = np.where(rho.space.support, np.asarray(x, dtype=float), 0.0)
    target = -neg_part(x) if domain == "negative" else x
    dom = dual_domain(rho, domain, S)
    rng = np.random.default_rng(seed)
    lo = np.where(np.isfinite(dom.lower), dom.lower, -1.0)
    reach = max(1.0, 10.0 * float(np.max(np.abs(target), initial=0.0)))
    width = max(1e-12, float(np.max(np.minimum(dom.upper - lo, reach))))
    best = None
    for r in range(RESTARTS):
        d = dom.project(rng.uniform(np.maximum(lo, -reach), dom.upper))
        val, arg = dom.value(d, target), d
        eta0 = None
        trace = [val]
        for k in range(1, max_iter + 1):
            g = target - (dom.grad(d) if dom.grad else 0.0)
            gn = float(np.linalg.norm(g))
            if gn == 0:
                break
            if eta0 is None:
                eta0 = 10.0 * width / gn
            nd = dom.project(d + (eta0 / k) * g)
            if np.array_equal(nd, d):
                break
            d = nd
            v = dom.value(d, target)
            trace.append(v)
            if v > val:
                val, arg = v, d
        if best is None or val > best[0]:
            best = (val, arg.copy(), r, trace)
    return DualResult(rho(x), best[0], best[1], best[2], best[3])


# solid sets -----------------------------------------------------------------

class SolidSet:
    """Convex solid subset of the positive orthant.

    ``box``: ``0 <= X <= upper`` (``inf`` entries allowed).
    ``polytope``: the solid hull of finitely many nonnegative vertices.
    ``sublevel``: ``{X >= 0 : gauge(X) <= level}`` for a convex increasing gauge.
    """

    def __init__(self, kind: str, upper=None, vertices=None, gauge=None, level: float = 1.0,
                 claims_radially_bounded: bool | None = None):
        self.kind = kind
        self.level = float(level)
        self.gauge_fn = gauge
        self.upper = None if upper is None else np.asarray(upper, dtype=float)
        self.vertices = None if vertices is None else np.atleast_2d(np.asarray(vertices, dtype=float))
        if kind == "box":
            if np.any(self.upper < 0):
                raise ValueError("box upper bounds must be nonnegative")
            self.dim = self.upper.size
            bounded = bool(np.all(np.isfinite(self.upper)))
        elif kind == "polytope":
            if np.any(self.vertices < 0) or not np.all(np.isfinite(self.vertices)):
                raise ValueError("polytope vertices must be finite and nonnegative")
            self.dim = self.vertices.shape[1]
            bounded = True
        elif kind == "sublevel":
            if gauge is None:
                raise ValueError("sublevel sets need a gauge")
            self.dim = None
            bounded = bool(claims_radially_bounded)
        else:
            raise ValueError(f"unknown solid set kind {kind!r}")
        self.claims_radially_bounded = bounded if claims_radially_bounded is None else bool(claims_radially_bounded)
        self._facets = None

    @classmethod
    def box(cls, upper) -> "SolidSet":
        return cls("box", upper=upper)

    @classmethod
    def polytope(cls, vertices) -> "SolidSet":
        return cls("polytope", vertices=vertices)

    @classmethod
    def sublevel(cls, gauge, level: float = 1.0, radially_bounded: bool = False) -> "SolidSet":
        return cls("sublevel", gauge=gauge, level=level, claims_radially_bounded=radially_bounded)

    @classmethod
    def budget(cls, prior, level: float = 1.0) -> "SolidSet":
        """``{X >= 0 : E_P[X] <= level}``; unbounded where ``P`` has no mass."""
        prior = np.asarray(prior, dtype=float)
        if np.any(prior == 0):
            return cls.sublevel(lambda x: float(prior @ x), level, radially_bounded=False)
        return cls.polytope(np.diag(level / prior))

    def corners(self) -> np.ndarray:
        """Extreme-point candidates ``1_E v`` for vertices ``v`` and events ``E``."""
        pts = {tuple(np.zeros(self.dim))}
        verts = self.vertices if self.kind == "polytope" else self.upper[None, :]
        for v in verts:
            for mask in itertools.product((0.0, 1.0), repeat=self.dim):
                pts.add(tuple(v * np.array(mask)))
        return np.array(sorted(pts))

    def contains(self, x) -> bool:
        """Direct membership; the polytope case is an LP feasibility problem."""
        x = np.asarray(x, dtype=float)
        if np.any(x < 0):
            return False
        if self.kind == "box":
            return bool(np.all(x <= self.upper))
        if self.kind == "sublevel":
            return self.gauge_fn(x) <= self.level
        # x <= V^T lam, sum lam = 1, lam >= 0
        V = self.vertices
        k = V.shape[0]
        res = linprog(np.zeros(k), A_ub=-V.T, b_ub=-x, A_eq=np.ones((1, k)), b_eq=[1.0],
                      bounds=[(0, None)] * k, method="highs")
        return res.status == 0

    def support(self, w) -> float:
        """``sup_{X in C} w.X``; exact for box and polytope."""
        w = np.asarray(w, dtype=float)
        if self.kind == "box":
            wp = np.maximum(w, 0)
            if np.any((wp > 0) & np.isinf(self.upper)):
                return math.inf
            return float(np.sum(wp * np.where(np.isinf(self.upper), 0.0, self.upper)))
        if self.kind == "polytope":
            return float(np.max(self.vertices @ np.maximum(w, 0)))
        return _sublevel_support(self, np.maximum(w, 0))

    def _hull(self):
        if self._facets is None:
            pts = self.corners()
            act = np.any(pts > 0, axis=0)
            k = int(act.sum())
            if k == 0:
                eq = np.zeros((0, 0))
            elif k == 1:
                top = float(pts[:, act].max())
                eq = np.array([[1.0, -top]])
            else:
                eq = ConvexHull(pts[:, act]).equations
            self._facets = (act, eq)
        return self._facets

    def gauge(self, x) -> tuple[float, np.ndarray | None]:
        """Minkowski gauge of ``X >= 0`` and the facet normal attaining it.

        For polytopes the value is ``max a.X / b`` over hull facets
        ``a.Y <= b`` with ``b > 0``.  The normal (scaled by ``1/b``) is the
        plain-sum density of a polar element that certifies the value.
        """
        x = np.asarray(x, dtype=float)
        if self.kind == "box":
            with np.errstate(divide="ignore", invalid="ignore"):
                r = np.where(x > 0, x / self.upper, 0.0)
            i = int(np.argmax(r))
            z = np.zeros_like(x)
            if np.isfinite(self.upper[i]) and self.upper[i] > 0:
                z[i] = 1.0 / self.upper[i]
            return float(r[i]) if x.size else 0.0, z
        if self.kind == "sublevel":
            return _ray_gauge(self, x), None
        act, eq = self._hull()
        if np.any(x[~act] > 0):
            return math.inf, None
        if eq.shape[0] == 0:
            return 0.0, np.zeros_like(x)
        a, b = eq[:, :-1], -eq[:, -1]
        scale = max(1.0, float(np.abs(b).max()))
        keep = b > 1e-12 * scale
        vals = (a[keep] @ x[act]) / b[keep]
        j = int(np.argmax(vals))
        z = np.zeros_like(x)
        z[act] = a[keep][j] / b[keep][j]
        return max(0.0, float(vals[j])), z


def _sublevel_support(C: SolidSet, w: np.ndarray) -> float:
    n = w.size
    cons = [{"type": "ineq", "fun": lambda x: C.level - C.gauge_fn(x)}]
    best = -math.inf
    for x0 in (np.zeros(n), np.full(n, 1e-3)):
        r = minimize(lambda x: -float(w @ x), x0, method="SLSQP", bounds=[(0, None)] * n,
                     constraints=cons, options={"ftol": 1e-12, "maxiter": 500})
        if not r.success:
            raise Inconclusive(f"support ascent did not converge: {r.message}")
        if C.gauge_fn(np.maximum(r.x, 0)) <= C.level + 1e-9:
            best = max(best, float(w @ r.x))
    if best == -math.inf:
        raise Inconclusive("support ascent found no feasible point")
    return best


def _ray_gauge(C: SolidSet, x: np.ndarray) -> float:
    """``1 / sup{t : t X in C}`` by bracketing and bisection."""
    if not np.any(x > 0):
        return 0.0
    inside = lambda t: C.contains(t * x)
    hi = 1.0
    while inside(hi):
        hi *= 2
        if hi > RADIAL_PROBE:
            return 0.0
    lo = 0.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if inside(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-14 * hi:
            break
    return 1.0 / lo if lo > 0 else math.inf


@dataclass
class SupportCertificate:
    density: np.ndarray
    sup: float

    def to_json(self) -> dict:
        return {"density": [float(v) for v in self.density], "sup": self.sup}


def _radial_probe(C: SolidSet, dim: int, rng) -> None:
    dirs = list(np.eye(dim)) + [rng.random(dim) for _ in range(8)]
    for u in dirs:
        if C.contains(RADIAL_PROBE * u):
            raise NotRadiallyBounded(f"ray along {u.tolist()} stays in the set up to t = {RADIAL_PROBE:g}")


def support_functional(C: SolidSet, dim: int | None = None, seed: int = 0) -> SupportCertificate:
    """Strictly positive density with finite sup over ``C``.

    Starts from the uniform density, computes its support value, and scales
    it so that value becomes 1 (left alone when the set is ``{0}``).
    """
    dim = C.dim if C.dim is not None else dim
    if dim is None:
        raise ValueError("sublevel sets need an explicit dimension")
    _radial_probe(C, dim, np.random.default_rng(seed))
    if not C.claims_radially_bounded:
        raise NotRadiallyBounded("set does not claim radial boundedness")
    u = np.full(dim, 1.0 / dim)
    s = C.support(u)
    if not math.isfinite(s):
        raise NotRadiallyBounded("support value of the uniform density is infinite")
    if s > 0:
        return SupportCertificate(u / s, 1.0)
    return SupportCertificate(u, 0.0)


def polar_membership(C: SolidSet, Z, prior) -> bool:
    """``sup_{X in C} E_P[Z X] <= 1``; raises :class:`Inconclusive` when unsure."""
    Z = np.asarray(Z, dtype=float)
    if np.any(Z < 0):
        raise ValueError("polar elements are nonnegative")
    return C.support(np.asarray(prior, dtype=float) * Z) <= 1 + MEMBER_TOL


def polar_positive_witness(C: SolidSet, prior, seed: int = 0) -> np.ndarray:
    """A P-strictly-positive element of the polar of a radially bounded ``C``."""
    prior = np.asarray(prior, dtype=float)
    cert = support_functional(C, prior.size, seed)
    return np.where(prior > 0, cert.density / np.where(prior > 0, prior, 1.0), 1.0)


def robust_polar_witness(space: ScenarioSpace, C: SolidSet, seed: int = 0) -> DualMeasure:
    """Strictly positive dual measure in the robust polar of ``C``."""
    cert = support_functional(C, space.n, seed)
    return DualMeasure.from_weights(space, cert.density)


def bipolar_check(C: SolidSet, x, prior=None) -> LawReport:
    """Compare direct membership of ``X`` with ``s(X) <= 1``.

    ``s(X)``, the sup of ``E_P[Z X]`` over the polar, is computed as the gauge
    of ``X``; the attaining facet yields a polar element whose pairing with
    ``X`` equals the gauge, and that element is checked to lie in the polar.
    """
    x = np.asarray(x, dtype=float)
    s, z = C.gauge(x)
    member = C.contains(x)
    rep = LawReport("bipolar", trials=1, tested=1,
                    details={"gauge": s, "member": member})
    if z is not None and prior is not None:
        prior = np.asarray(prior, dtype=float)
        Z = np.where(prior > 0, z / np.where(prior > 0, prior, 1.0), 0.0)
        rep.details["polar_witness"] = Z
        rep.details["witness_in_polar"] = polar_membership(C, Z, prior)
        rep.details["witness_pairing"] = float(np.dot(prior, Z * x))
    if (s <= 1 - 1e-9 and not member) or (s >= 1 + 1e-9 and member):
        return rep.fail(X=x, gauge=s, member=member)
    return rep


def robust_bipolar_check(space: ScenarioSpace, C: SolidSet, x) -> LawReport:
    """Bipolar check where polar elements are positive measures in span form.

    Positions are taken as quasi-sure classes, so ``X`` is canonicalized and
    the attaining facet normal is turned into a dual measure whose pairing
    with ``X`` is the gauge.
    """
    x = np.where(space.support, np.asarray(x, dtype=float), 0.0)
    s, z = C.gauge(x)
    member = C.contains(x)
    rep = LawReport("robust_bipolar", trials=1, tested=1, details={"gauge": s, "member": member})
    if z is not None:
        mu = DualMeasure.from_weights(space, z)
        w = mu.canonical()
        rep.details["witness"] = mu.to_json()
        rep.details["witness_positive"] = mu.is_positive()
        rep.details["witness_in_polar"] = C.support(w) <= 1 + MEMBER_TOL
        rep.details["witness_pairing"] = pair(x, mu)
    if (s <= 1 - 1e-9 and not member) or (s >= 1 + 1e-9 and member):
        return rep.fail(X=x, gauge=s, member=member)
    return rep
