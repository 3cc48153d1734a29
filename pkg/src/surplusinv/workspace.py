"""Workspace files: one JSON document naming a space and the objects over it.

Minimal example::

    {
      "scenarios": ["w1", "w2"],
      "priors": [{"name": "P", "weights": [0.5, 0.5]}],
      "positions": [{"name": "X", "payoffs": [-1, 2]}],
      "acceptance_sets": [{"name": "A", "kind": "es", "alpha": 0.75}],
      "functionals": [{"name": "rho", "kind": "from_acceptance", "set": "A"}],
      "seed": 7
    }

Positions may instead point at a CSV file of ``scenario,value`` rows.
Functionals and acceptance sets can also be given inline as ``kind@alpha``
(``es@0.5``), and positions as JSON lists (``[-1, 2]``).
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import acceptance as acc
from . import functionals as fn
from .duality import SolidSet
from .extension import SeqPosition
from .orlicz import OrliczFunction
from .scenario import ScenarioSpace


class InputError(ValueError):
    """Malformed input file or argument."""


class UnknownName(LookupError):
    """A name that does not resolve in the workspace."""


@dataclass
class Workspace:
    space: ScenarioSpace
    positions: dict = field(default_factory=dict)
    functionals: dict = field(default_factory=dict)
    acceptance_sets: dict = field(default_factory=dict)
    solid_sets: dict = field(default_factory=dict)
    sequences: dict = field(default_factory=dict)
    seed: int = 0

    # resolution ----------------------------------------------------------
    def position(self, ref: str) -> np.ndarray:
        if ref in self.positions:
            return self.positions[ref]
        lit = _literal(ref)
        if lit is None:
            raise UnknownName(f"unknown position {ref!r}")
        return self.space.position(lit)

    def acceptance_set(self, ref: str) -> acc.AcceptanceSet:
        if ref in self.acceptance_sets:
            return self.acceptance_sets[ref]
        spec = _shorthand(ref)
        if spec is None:
            raise UnknownName(f"unknown acceptance set {ref!r}")
        return build_acceptance_set(self.space, spec, self.acceptance_sets)

    def functional(self, ref: str) -> fn.RiskFunctional:
        if ref in self.functionals:
            return self.functionals[ref]
        spec = _shorthand(ref)
        if spec is None:
            raise UnknownName(f"unknown functional {ref!r}")
        return build_functional(self.space, spec, self.acceptance_sets)

    def solid_set(self, ref: str) -> SolidSet:
        if ref not in self.solid_sets:
            raise UnknownName(f"unknown solid set {ref!r}")
        return self.solid_sets[ref]

    def sequence(self, ref: str) -> SeqPosition:
        if ref in self.sequences:
            return self.sequences[ref]
        try:
            return SeqPosition.from_json(json.loads(ref))
        except (json.JSONDecodeError, TypeError, KeyError, AttributeError):
            raise UnknownName(f"unknown sequence {ref!r}") from None


def _literal(ref: str):
    try:
        val = json.loads(ref)
    except json.JSONDecodeError:
        return None
    if isinstance(val, list) and all(isinstance(v, (int, float)) for v in val):
        return val
    return None


_SHORT_KINDS = {"var", "es", "expectation", "max_loss", "max_shortfall", "whole", "positive", "halfspace"}


def _shorthand(ref: str):
    kind, _, arg = ref.partition("@")
    if kind not in _SHORT_KINDS:
        return None
    spec = {"kind": kind}
    if arg:
        try:
            spec["alpha"] = float(arg)
        except ValueError:
            return None
    return spec


def _prior(spec: dict):
    return spec.get("prior", 0)


def build_acceptance_set(space: ScenarioSpace, spec: dict, named: dict) -> acc.AcceptanceSet:
    kind = spec.get("kind")
    if kind == "var":
        return acc.var_set(space, spec["alpha"], _prior(spec))
    if kind == "es":
        return acc.es_set(space, spec["alpha"], _prior(spec))
    if kind == "span":
        return acc.span_set(space, spec.get("event", list(space.labels)), spec.get("prior"))
    if kind == "shortfall":
        return acc.shortfall_set(space, OrliczFunction.from_spec(spec["loss"]), spec["level"], _prior(spec))
    if kind == "box":
        lower = [-np.inf if v is None or v == "-inf" else float(v) for v in spec["lower"]]
        return acc.box_set(space, lower)
    if kind == "positive":
        return acc.positive_cone(space)
    if kind == "whole":
        return acc.whole_space(space)
    if kind == "halfspace":
        return acc.halfspace_set(space, _prior(spec), spec.get("threshold", 0.0))
    if kind in ("union", "intersection"):
        parts = []
        for p in spec["parts"]:
            if isinstance(p, str):
                if p not in named:
                    raise UnknownName(f"unknown acceptance set {p!r}")
                parts.append(named[p])
            else:
                parts.append(build_acceptance_set(space, p, named))
        return (acc.union if kind == "union" else acc.intersection)(*parts)
    raise InputError(f"unknown acceptance set kind {kind!r}")


def build_functional(space: ScenarioSpace, spec: dict, sets: dict) -> fn.RiskFunctional:
    kind = spec.get("kind")
    if kind == "var":
        return fn.var_functional(space, spec["alpha"], _prior(spec))
    if kind == "es":
        return fn.es_functional(space, spec["alpha"], _prior(spec))
    if kind == "expectation":
        return fn.expectation_functional(space, _prior(spec))
    if kind == "max_loss":
        return fn.max_loss(space)
    if kind == "max_shortfall":
        return fn.max_shortfall(space)
    if kind == "shortfall":
        return fn.shortfall_functional(space, OrliczFunction.from_spec(spec["loss"]), _prior(spec))
    if kind in ("from_acceptance", "span"):
        if kind == "span":
            A = build_acceptance_set(space, spec, sets)
        elif isinstance(spec.get("set"), str):
            if spec["set"] not in sets:
                raise UnknownName(f"unknown acceptance set {spec['set']!r}")
            A = sets[spec["set"]]
        else:
            A = build_acceptance_set(space, spec["set"], sets)
        return fn.from_acceptance(A, spec.get("S"))
    raise InputError(f"unknown functional kind {kind!r}")


def build_solid_set(spec: dict, space: ScenarioSpace) -> SolidSet:
    kind = spec.get("kind")
    if kind == "box":
        return SolidSet.box([np.inf if v is None or v == "inf" else float(v) for v in spec["upper"]])
    if kind == "polytope":
        return SolidSet.polytope(spec["vertices"])
    if kind == "budget":
        return SolidSet.budget(space.prior(_prior(spec)), spec.get("level", 1.0))
    raise InputError(f"unknown solid set kind {kind!r}")


def read_csv_position(space: ScenarioSpace, path: str | Path) -> np.ndarray:
    """Positions from ``scenario,value`` rows; an optional header is skipped."""
    values = {}
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row or row[0].strip().startswith("#"):
                continue
            label, value = row[0].strip(), row[1].strip()
            try:
                values[label] = float(value)
            except ValueError:
                if not values:
                    continue  # header row
                raise InputError(f"bad value {value!r} in {path}") from None
    missing = [s for s in space.labels if s not in values]
    extra = [s for s in values if s not in space.labels]
    if missing or extra:
        raise InputError(f"CSV {path} does not match the scenarios (missing {missing}, unknown {extra})")
    return space.position([values[s] for s in space.labels])


def load(path: str | Path) -> Workspace:
    path = Path(path)
    try:
        doc = json.loads(path.read_text())
    except OSError as e:
        raise InputError(f"cannot read workspace: {e}") from None
    except json.JSONDecodeError as e:
        raise InputError(f"workspace is not valid JSON: {e}") from None
    return from_dict(doc, base=path.parent)


def from_dict(doc: dict, base: Path | None = None) -> Workspace:
    base = base or Path(".")
    try:
        priors = doc["priors"]
        space = ScenarioSpace(doc["scenarios"], [p["weights"] for p in priors],
                              [p.get("name", f"P{i}") for i, p in enumerate(priors)])
        ws = Workspace(space, seed=int(doc.get("seed", 0)))
        names = set()

        def claim(name):
            if name in names:
                raise InputError(f"duplicate name {name!r}")
            names.add(name)
            return name

        for p in doc.get("positions", []):
            if "csv" in p:
                ws.positions[claim(p["name"])] = read_csv_position(space, base / p["csv"])
            else:
                ws.positions[claim(p["name"])] = space.position(p["payoffs"])
        for s in doc.get("acceptance_sets", []):
            ws.acceptance_sets[claim(s["name"])] = build_acceptance_set(space, s, ws.acceptance_sets)
        for f in doc.get("functionals", []):
            ws.functionals[claim(f["name"])] = build_functional(space, f, ws.acceptance_sets)
        for c in doc.get("solid_sets", []):
            ws.solid_sets[claim(c["name"])] = build_solid_set(c, space)
        for q in doc.get("sequences", []):
            ws.sequences[claim(q["name"])] = SeqPosition.from_json(q)
    except UnknownName:
        raise
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, InputError):
            raise
        raise InputError(f"malformed workspace: {e!r}") from None
    return ws
