"""Structured pass/fail records shared by all verification entry points."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


def _jsonable(value):
    """Coerce Fractions/tuples/dataclass-ish values into JSON-friendly form."""
    from fractions import Fraction

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


@dataclass
class VerificationReport:
    """Exact pass/fail record: passes iff expected equals actual exactly.

    `summary`, when set, is merged into the JSON at top level (used by the
    pvh check to emit its documented report shape); `payload` carries
    supporting data and counterexamples.
    """

    check: str
    params: dict
    expected: Any
    actual: Any
    payload: dict | None = None
    summary: dict | None = None

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    @property
    def verdict(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def to_json(self) -> dict:
        if self.summary is not None:
            out = {"check": self.check}
            out.update(_jsonable(self.summary))
            out["verdict"] = self.verdict
            return out
        out = {
            "check": self.check,
            "params": _jsonable(self.params),
            "expected": _jsonable(self.expected),
            "actual": _jsonable(self.actual),
            "pass": self.passed,
        }
        if self.payload is not None:
            out["payload"] = _jsonable(self.payload)
        return out

    def one_line(self) -> str:
        bits = " ".join(f"{k}={v}" for k, v in self.params.items())
        return f"[{self.verdict}] {self.check} {bits}".rstrip()
