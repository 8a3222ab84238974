"""Structured results for the command-line tools.

A Report is a flat bundle of inputs, results, and named pass/fail checks that
renders either as readable text or as JSON.  Exact rationals survive the JSON
round trip: a Fraction is emitted as the string "n/d" (always with the slash)
and any string of that shape decodes back to a Fraction.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

__all__ = ["Check", "Report", "encode_value", "decode_value"]

_RATIONAL = re.compile(r"^-?\d+/\d+$")


def encode_value(v: Any) -> Any:
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, bool) or v is None or isinstance(v, (int, float, str)):
        return v
    if isinstance(v, dict):
        return {k: encode_value(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [encode_value(x) for x in v]
    raise TypeError(f"cannot encode {type(v).__name__} for JSON output")


def decode_value(v: Any) -> Any:
    if isinstance(v, str) and _RATIONAL.match(v):
        num, den = v.split("/")
        return Fraction(int(num), int(den))
    if isinstance(v, dict):
        return {k: decode_value(x) for k, x in v.items()}
    if isinstance(v, list):
        return tuple(decode_value(x) for x in v)
    return v


def format_value(v: Any) -> str:
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return "(" + ", ".join(format_value(x) for x in v) + ")"
    return str(v)


@dataclass(frozen=True)
class Check:
    """One named assertion with the number it was judged on."""

    name: str
    passed: bool
    value: Any = None
    expected: Any = None
    tolerance: Optional[float] = None


@dataclass
class Report:
    command: str
    spec: str
    inputs: dict = field(default_factory=dict)
    results: dict = field(default_factory=dict)
    checks: tuple[Check, ...] = ()

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_json(self) -> str:
        doc = {
            "command": self.command,
            "spec": self.spec,
            "inputs": encode_value(self.inputs),
            "results": encode_value(self.results),
            "checks": [
                {
                    "name": c.name,
                    "passed": c.passed,
                    "value": encode_value(c.value),
                    "expected": encode_value(c.expected),
                    "tolerance": c.tolerance,
                }
                for c in self.checks
            ],
            "passed": self.passed,
        }
        return json.dumps(doc, indent=2)

    @classmethod
    def from_json(cls, text: str) -> "Report":
        doc = json.loads(text)
        checks = tuple(
            Check(
                name=c["name"],
                passed=c["passed"],
                value=decode_value(c["value"]),
                expected=decode_value(c["expected"]),
                tolerance=c["tolerance"],
            )
            for c in doc["checks"]
        )
        return cls(
            command=doc["command"],
            spec=doc["spec"],
            inputs=decode_value(doc["inputs"]),
            results=decode_value(doc["results"]),
            checks=checks,
        )

    def to_text(self) -> str:
        lines = [f"{self.command} [{self.spec}]"]
        for k, v in self.inputs.items():
            lines.append(f"  {k} = {format_value(v)}")
        for k, v in self.results.items():
            lines.append(f"{k}: {format_value(v)}")
        for c in self.checks:
            mark = "pass" if c.passed else "FAIL"
            parts = [format_value(c.value)]
            if c.expected is not None:
                parts.append(f"expected {format_value(c.expected)}")
            if c.tolerance is not None:
                parts.append(f"tol {c.tolerance:g}")
            lines.append(f"[{mark}] {c.name}: {', '.join(parts)}")
        if self.checks:
            n_ok = sum(c.passed for c in self.checks)
            lines.append(f"{n_ok}/{len(self.checks)} checks passed")
        return "\n".join(lines)
