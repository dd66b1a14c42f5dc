"""Verification certificates: one structured record per checked claim."""

from __future__ import annotations

import hashlib
import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

SCHEMA = "ballq-cert/1"


def _jsonable(x: Any) -> Any:
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else x.numerator
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, (str, int, float, bool)) or x is None:
        return x
    return str(x)


def digest(obj: Any) -> str:
    return hashlib.sha256(json.dumps(_jsonable(obj), sort_keys=True).encode()).hexdigest()[:16]


@dataclass
class Certificate:
    claim: str
    group: str
    computed: Any
    expected: Any
    status: str = "pass"
    inputs: str = ""
    anchor: str = ""
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA,
            "claim": self.claim,
            "group": self.group,
            "anchor": self.anchor,
            "inputs": self.inputs,
            "computed": _jsonable(self.computed),
            "expected": _jsonable(self.expected),
            "status": self.status,
            "seconds": round(self.seconds, 4),
            "details": _jsonable(self.details),
        }


def check(claim: str, group: str, computed: Any, expected: Any, anchor: str = "", inputs: Any = None, **details) -> Certificate:
    """Exact comparison; the certificate passes iff computed == expected."""
    status = "pass" if computed == expected else "fail"
    return Certificate(claim, group, computed, expected, status, digest(inputs) if inputs is not None else "", anchor, 0.0, details)


@contextmanager
def timed(certs: list):
    """Attribute the elapsed time of a block evenly to the certificates it appended."""
    start = len(certs)
    t0 = time.perf_counter()
    yield
    dt = time.perf_counter() - t0
    new = certs[start:]
    for c in new:
        c.seconds = dt / len(new)
