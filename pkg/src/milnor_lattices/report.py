"""Verification reports: assertions, rendering and exit codes."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .cyclotomic import CycNumber
from .errors import MilnorLatticeError
from .exact import IntPoly, Matrix

SCHEMA_VERSION = 1
TAGS = ("PAPER", "TRIVIAL", "DERIVED")
PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INVALID = 2
EXIT_UNAVAILABLE = 3


def jsonable(x: Any) -> Any:
    """Exact values to JSON-friendly data; rationals become "a/b" strings."""
    if isinstance(x, bool) or x is None or isinstance(x, (int, str)):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    if isinstance(x, Matrix):
        return jsonable(x.tolist())
    if isinstance(x, IntPoly):
        return list(x.coeffs)
    if isinstance(x, CycNumber):
        return {"l": x.l, "coeffs": list(x.coeffs)}
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set, frozenset)):
        items = [jsonable(v) for v in x]
        return sorted(items, key=repr) if isinstance(x, (set, frozenset)) else items
    return repr(x)


@dataclass(frozen=True)
class Assertion:
    id: str
    anchor: str
    computed: Any
    expected: Any
    tag: str
    status: str
    note: str = ""

    def __post_init__(self):
        if self.tag not in TAGS:
            raise ValueError(f"unknown provenance tag {self.tag!r}")
        if self.status not in (PASS, FAIL, SKIPPED):
            raise ValueError(f"unknown status {self.status!r}")

    def to_dict(self) -> dict:
        d = {"id": self.id, "anchor": self.anchor, "tag": self.tag, "status": self.status,
             "computed": jsonable(self.computed), "expected": jsonable(self.expected)}
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Report:
    command: str
    provenance: list[str] = field(default_factory=list)
    assertions: list[Assertion] = field(default_factory=list)
    duration: float | None = None
    started: float = field(default_factory=time.perf_counter, repr=False)

    def check(self, id: str, anchor: str, computed, expected, tag: str = "PAPER", note: str = "") -> bool:
        ok = computed == expected
        self.assertions.append(Assertion(id, anchor, computed, expected, tag, PASS if ok else FAIL, note))
        return ok

    def holds(self, id: str, anchor: str, value: bool, tag: str = "DERIVED", note: str = "") -> bool:
        return self.check(id, anchor, bool(value), True, tag, note)

    def skip(self, id: str, anchor: str, note: str, tag: str = "PAPER"):
        self.assertions.append(Assertion(id, anchor, None, None, tag, SKIPPED, note))

    def fail(self, id: str, anchor: str, note: str, tag: str = "DERIVED"):
        self.assertions.append(Assertion(id, anchor, None, None, tag, FAIL, note))

    @contextmanager
    def section(self, id: str, anchor: str):
        """Turn a library error inside the block into a FAIL instead of a crash."""
        try:
            yield
        except MilnorLatticeError as e:
            self.fail(id, anchor, f"{type(e).__name__}: {e}")

    def add_provenance(self, text: str):
        if text and text not in self.provenance:
            self.provenance.append(text)

    def extend(self, other: "Report", prefix: str = ""):
        for p in other.provenance:
            self.add_provenance(p)
        for a in other.assertions:
            self.assertions.append(Assertion(prefix + a.id, a.anchor, a.computed, a.expected, a.tag, a.status, a.note))

    def finish(self) -> "Report":
        self.duration = time.perf_counter() - self.started
        return self

    @property
    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if a.status == FAIL]

    @property
    def status(self) -> str:
        return "fail" if self.failures else "pass"

    @property
    def exit_code(self) -> int:
        return EXIT_FAIL if self.failures else EXIT_PASS

    def counts(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for a in self.assertions:
            out[a.status] += 1
        return out

    def to_dict(self, timing: bool = True) -> dict:
        d = {"schema_version": SCHEMA_VERSION, "command": self.command, "status": self.status,
             "counts": self.counts(), "provenance": list(self.provenance),
             "assertions": [a.to_dict() for a in self.assertions]}
        if timing and self.duration is not None:
            d["duration_seconds"] = round(self.duration, 3)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), indent=2, ensure_ascii=False) + "\n"

    def to_text(self, timing: bool = True) -> str:
        lines = [f"command: {self.command}"]
        lines += [f"provenance: {p}" for p in self.provenance]
        for a in self.assertions:
            line = f"[{a.status}] {a.id} ({a.anchor}, {a.tag})"
            if a.status != SKIPPED:
                line += f": computed={_short(a.computed)} expected={_short(a.expected)}"
            if a.note:
                line += f"  # {a.note}"
            lines.append(line)
        c = self.counts()
        tail = f"status: {self.status.upper()} ({c[PASS]} passed, {c[FAIL]} failed, {c[SKIPPED]} skipped)"
        if timing and self.duration is not None:
            tail += f" in {self.duration:.2f}s"
        lines.append(tail)
        return "\n".join(lines) + "\n"


def _short(x: Any, limit: int = 160) -> str:
    s = json.dumps(jsonable(x), ensure_ascii=False)
    return s if len(s) <= limit else s[: limit - 3] + "..."
