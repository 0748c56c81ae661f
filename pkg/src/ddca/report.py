"""Pass/fail reports shared by every verification routine."""

from __future__ import annotations

import csv
import hashlib
import io
import json
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

TOOL_VERSION = "0.1.0"

STATUS_GLYPH = {"pass": "✓", "fail": "✗", "skipped": "-"}


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""
    data: Dict = field(default_factory=dict)
    skipped: bool = False
    topic: str = ""
    elapsed_ms: float = 0.0

    @property
    def status(self) -> str:
        if self.skipped:
            return "skipped"
        return "pass" if self.passed else "fail"


@dataclass
class VerificationReport:
    title: str
    checks: List[Check] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    seconds: float = 0.0
    topic: str = ""
    params: Dict[str, str] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        """True when at least one check ran and none failed; skipped checks do not fail."""
        return any(not c.skipped for c in self.checks) and all(c.passed for c in self.checks)

    def strict_passed(self) -> bool:
        return self.passed and not any(c.skipped for c in self.checks)

    def add(self, name: str, passed: bool, detail: str = "", **data) -> Check:
        check = Check(name, bool(passed), detail, data, topic=self.topic)
        self.checks.append(check)
        return check

    def skip(self, name: str, reason: str) -> Check:
        check = Check(name, True, reason, {}, skipped=True, topic=self.topic)
        self.checks.append(check)
        return check

    def note(self, text: str) -> None:
        self.notes.append(text)

    def extend(self, other: "VerificationReport", prefix: Optional[str] = None) -> None:
        for c in other.checks:
            self.checks.append(Check(f"{prefix}: {c.name}" if prefix else c.name, c.passed, c.detail, c.data,
                                     c.skipped, c.topic or other.topic or self.topic, c.elapsed_ms))
        self.notes.extend(other.notes)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def skipped(self) -> List[Check]:
        return [c for c in self.checks if c.skipped]

    def stable_dict(self) -> dict:
        """Everything except timings, with sorted parameter keys."""
        topic = self.topic or self.title
        return {
            "suite": self.title,
            "topic": topic,
            "status": "pass" if self.passed else "fail",
            "version": TOOL_VERSION,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "checks": [{"id": c.name, "topic": c.topic or topic, "status": c.status, "detail": c.detail,
                        **({"data": _jsonable(c.data)} if c.data else {})} for c in self.checks],
            "notes": list(self.notes),
        }

    def digest(self) -> str:
        blob = json.dumps(self.stable_dict(), sort_keys=True, ensure_ascii=False, separators=(",", ":"))
        return hashlib.sha256(blob.encode()).hexdigest()

    def to_dict(self) -> dict:
        out = self.stable_dict()
        out["digest"] = self.digest()
        out["elapsed_ms"] = round(self.seconds * 1000, 1)
        for entry, c in zip(out["checks"], self.checks):
            entry["elapsed_ms"] = round(c.elapsed_ms, 1)
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False)

    def to_text(self) -> str:
        lines = [f"== {self.title}: {'PASS' if self.passed else 'FAIL'} ({self.seconds:.2f}s)"]
        for c in self.checks:
            lines.append(f"  {STATUS_GLYPH[c.status]} [{c.status.upper()}] {c.name}" + (f" -- {c.detail}" if c.detail else ""))
        for n in self.notes:
            lines.append(f"  note: {n}")
        return "\n".join(lines)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["suite", "check", "status", "detail"])
        for c in self.checks:
            writer.writerow([self.title, c.name, c.status, c.detail])
        return buf.getvalue()


def _jsonable(value):
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, (bool, int, str)) or value is None:
        return value
    return str(value)


class timed:
    """Context manager that stores elapsed seconds on a report."""

    def __init__(self, report: VerificationReport):
        self.report = report

    def __enter__(self):
        self._start = time.perf_counter()
        return self.report

    def __exit__(self, *exc):
        self.report.seconds += time.perf_counter() - self._start
        return False
