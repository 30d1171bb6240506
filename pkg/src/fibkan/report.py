"""Structured check reports shared by every module."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any

FORMAT_VERSION = 1


def jsonable(value: Any) -> Any:
    """Normalise a witness value to plain JSON data (tuples become lists)."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (set, frozenset)):
        items = [jsonable(v) for v in value]
        return sorted(items, key=lambda v: json.dumps(v, sort_keys=True))
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    return str(value)


@dataclass
class CheckReport:
    check: str
    verdict: bool
    provenance: str
    witnesses: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    children: list = field(default_factory=list)
    seed: int | None = None
    elapsed: float | None = None
    data: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.verdict = bool(self.verdict)
        self.witnesses = jsonable(list(self.witnesses))
        self.counts = {str(k): int(v) for k, v in self.counts.items()}
        self.notes = [str(n) for n in self.notes]
        self.data = jsonable(dict(self.data))
        if not self.verdict and not self.witnesses:
            raise ValueError(f"failing report {self.check!r} carries no witness")

    @property
    def passed(self) -> bool:
        return self.verdict

    def to_dict(self, timing: bool = False) -> dict:
        out = {
            "format": "fibkan/report",
            "version": FORMAT_VERSION,
            "check": self.check,
            "verdict": self.verdict,
            "provenance": self.provenance,
            "witnesses": self.witnesses,
            "counts": dict(sorted(self.counts.items())),
            "notes": self.notes,
            "seed": self.seed,
            "children": [c.to_dict(timing) for c in self.children],
            "data": self.data,
        }
        if timing:
            out["elapsed"] = self.elapsed
        return out

    @classmethod
    def from_dict(cls, data: dict) -> CheckReport:
        if data.get("format") != "fibkan/report":
            raise ValueError("not a report document")
        if data.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported report version {data.get('version')!r}")
        return cls(
            check=data["check"],
            verdict=data["verdict"],
            provenance=data["provenance"],
            witnesses=data["witnesses"],
            counts=data["counts"],
            notes=data["notes"],
            children=[cls.from_dict(c) for c in data["children"]],
            seed=data["seed"],
            elapsed=data.get("elapsed"),
            data=data.get("data", {}),
        )

    def to_json(self, timing: bool = False) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, indent=2)

    @classmethod
    def from_json(cls, text: str) -> CheckReport:
        return cls.from_dict(json.loads(text))

    def render(self, indent: int = 0) -> str:
        pad = "  " * indent
        mark = "PASS" if self.verdict else "FAIL"
        line = f"{pad}[{mark}] {self.check}"
        if self.counts:
            line += "  (" + ", ".join(f"{k}={v}" for k, v in sorted(self.counts.items())) + ")"
        if self.elapsed is not None:
            line += f"  {self.elapsed:.2f}s"
        lines = [line]
        for note in self.notes:
            lines.append(f"{pad}    note: {note}")
        for w in self.witnesses[:5]:
            lines.append(f"{pad}    witness: {json.dumps(w, sort_keys=True)}")
        if len(self.witnesses) > 5:
            lines.append(f"{pad}    ... {len(self.witnesses) - 5} more witnesses")
        for child in self.children:
            lines.append(child.render(indent + 1))
        return "\n".join(lines)


def combine(check: str, provenance: str, children: list[CheckReport], **kw: Any) -> CheckReport:
    """A report whose verdict is the conjunction of its children."""
    failed = [c.check for c in children if not c.verdict]
    witnesses = kw.pop("witnesses", None) or [{"failed_child": name} for name in failed]
    return CheckReport(check, not failed, provenance, witnesses=witnesses if failed else [],
                       children=children, **kw)


class FibkanError(Exception):
    """Base class for faults (as opposed to failing verdicts)."""


class PreconditionError(FibkanError):
    pass


class InconsistencyError(FibkanError):
    pass
