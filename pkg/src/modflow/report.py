"""Structured results of oracle comparisons."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any


@dataclass
class Check:
    """One comparison of a measured quantity against an expectation.

    ``mode`` controls how ``passed`` is derived:

    ``"le"``  measured <= tol (a discrepancy; the tolerance may be overridden)
    ``"ge"``  measured >= tol (a lower bound that must be exceeded)
    ``"range"``  |measured - expected| <= tol
    ``"bool"``  passed is set explicitly
    """

    id: str
    measured: float
    expected: float | None = None
    tol: float | None = None
    mode: str = "le"
    note: str = ""
    passed: bool | None = None

    def __post_init__(self):
        if self.passed is None:
            self.evaluate()

    def evaluate(self) -> bool:
        m = self.measured
        if self.mode == "bool":
            self.passed = bool(self.passed)
        elif m is None or (isinstance(m, float) and math.isnan(m)):
            self.passed = False
        elif self.mode == "le":
            self.passed = bool(m <= self.tol)
        elif self.mode == "ge":
            self.passed = bool(m >= self.tol)
        elif self.mode == "range":
            self.passed = bool(abs(m - self.expected) <= self.tol)
        else:
            raise ValueError(f"unknown check mode {self.mode!r}")
        return self.passed

    def as_dict(self) -> dict:
        return {
            "id": self.id,
            "pass": bool(self.passed),
            "measured": _plain(self.measured),
            "expected": _plain(self.expected),
            "tol": _plain(self.tol),
            "note": self.note,
        }


def _plain(v):
    if v is None:
        return None
    if isinstance(v, (bool, str)):
        return v
    try:
        f = float(v)
    except (TypeError, ValueError):
        return str(v)
    return f if math.isfinite(f) else str(f)


@dataclass
class VerificationReport:
    """Collection of checks with free-form metadata.

    ``resolved`` records constants and signs that were fixed by an oracle
    rather than taken from a formula; ``data`` carries tables (lists of rows)
    that callers may want to export.
    """

    suite: str
    checks: list[Check] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)
    resolved: dict[str, Any] = field(default_factory=dict)
    data: dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    def add(self, *args, **kwargs) -> Check:
        c = Check(*args, **kwargs)
        self.checks.append(c)
        return c

    def extend(self, other: "VerificationReport", prefix: str | None = None):
        for c in other.checks:
            if prefix:
                c.id = f"{prefix}.{c.id}"
            self.checks.append(c)
        self.resolved.update(other.resolved)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def override_tolerance(self, tol: float):
        """Replace the tolerance of every discrepancy-type check."""
        for c in self.checks:
            if c.mode == "le":
                c.tol = tol
                c.evaluate()

    def check(self, cid: str) -> Check:
        for c in self.checks:
            if c.id == cid:
                return c
        raise KeyError(cid)

    def to_dict(self) -> dict:
        meta = dict(self.meta)
        meta["resolved"] = {k: _plain(v) for k, v in self.resolved.items()}
        meta["wall_time_s"] = self.wall_time
        return {"suite": self.suite, "checks": [c.as_dict() for c in self.checks], "meta": meta}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, **kw)

    def summary(self) -> str:
        n_fail = len(self.failures())
        state = "PASS" if n_fail == 0 else f"FAIL ({n_fail} of {len(self.checks)})"
        return f"{self.suite}: {state}"
