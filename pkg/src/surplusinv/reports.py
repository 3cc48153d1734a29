"""Report records shared by the law checkers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


def jsonable(obj):
    """Convert numpy values and non-finite floats into plain JSON values."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        if math.isnan(v):
            return "nan"
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return v
    return obj


@dataclass
class LawReport:
    """Outcome of a randomized or exhaustive law check.

    ``verdict`` is ``"pass"`` when no counterexample turned up, otherwise
    ``"counterexample"`` with the offending data in ``witness``.  ``seed``
    replays the run.
    """

    law: str
    verdict: str = "pass"
    trials: int = 0
    witness: dict = field(default_factory=dict)
    seed: int | None = None
    tested: int = 0
    flags: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def fail(self, **witness) -> "LawReport":
        self.verdict = "counterexample"
        self.witness = witness
        return self

    def to_json(self) -> dict:
        out = {
            "law": self.law,
            "verdict": self.verdict,
            "trials": self.trials,
            "witness": jsonable(self.witness),
            "seed": self.seed,
        }
        if self.tested:
            out["tested"] = self.tested
        if self.flags:
            out["flags"] = list(self.flags)
        if self.details:
            out["details"] = jsonable(self.details)
        return out
