"""Machine-readable verification reports.

Each check produces one record: an identifier, the mathematical property it
exercises (as a plain formula/property string), the measured value or
residual, the tolerance it must meet and the outcome.  Reports serialize to
JSON losslessly; wall times are informational and excluded from equality.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field


@dataclass
class CheckRecord:
    check_id: str
    anchor: str           # the property being checked, human readable
    value: float
    tolerance: float
    passed: bool
    wall_time: float
    detail: dict = field(default_factory=dict)

    def to_json_obj(self):
        return {
            "id": self.check_id,
            "anchor": self.anchor,
            "value": self.value,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "wall_time": self.wall_time,
            "detail": self.detail,
        }

    @classmethod
    def from_json_obj(cls, obj):
        return cls(
            check_id=obj["id"], anchor=obj["anchor"], value=obj["value"],
            tolerance=obj["tolerance"], passed=obj["passed"],
            wall_time=obj["wall_time"], detail=obj.get("detail", {}),
        )


@dataclass
class VerificationReport:
    suite: str
    seed: int
    config: dict
    records: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def add(self, check_id: str, anchor: str, value: float, tolerance: float,
            wall_time: float = 0.0, passed: bool | None = None, **detail):
        value = float(value)
        ok = (abs(value) <= tolerance) if passed is None else bool(passed)
        rec = CheckRecord(check_id, anchor, value, float(tolerance), ok,
                          wall_time, dict(detail))
        self.records.append(rec)
        return rec

    def failures(self):
        return [r for r in self.records if not r.passed]

    def to_json(self) -> str:
        obj = {
            "suite": self.suite,
            "seed": self.seed,
            "config": self.config,
            "passed": self.passed,
            "records": [r.to_json_obj() for r in self.records],
        }
        return json.dumps(obj, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "VerificationReport":
        obj = json.loads(text)
        rep = cls(suite=obj["suite"], seed=obj["seed"], config=obj["config"])
        rep.records = [CheckRecord.from_json_obj(r) for r in obj["records"]]
        return rep

    def summary_lines(self):
        out = []
        for r in self.records:
            status = "pass" if r.passed else "FAIL"
            out.append(
                f"[{status}] {self.suite}.{r.check_id}: "
                f"value {r.value:.6e} vs tol {r.tolerance:.1e}  ({r.anchor})")
        return out

    def strip_timings(self) -> dict:
        """Deterministic content only (for run-to-run comparisons)."""
        obj = json.loads(self.to_json())
        for rec in obj["records"]:
            rec.pop("wall_time", None)
        return obj


class Stopwatch:
    def __init__(self):
        self.t0 = time.perf_counter()

    def lap(self) -> float:
        now = time.perf_counter()
        out = now - self.t0
        self.t0 = now
        return out
