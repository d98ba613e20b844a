"""Result tables with markdown and CSV renderings.

CSV columns are fixed: ``query, verdict, value, witness, certificate-id``.
The certificate id is a short SHA-256 digest of the row content together
with its free-text certificate, so equal results always get equal ids.
Markdown output lists each id with its certificate text under the table.
"""
from __future__ import annotations

import csv
import hashlib
import io
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .exact import Infinity, fmt
from .polyhedra import Polyhedron
from .regions import ParabolaEpsRegion, SumRegion, describe

COLUMNS = ("query", "verdict", "value", "witness", "certificate-id")
PASS, FAIL, INFO, UNSUPPORTED = "PASS", "FAIL", "INFO", "UNSUPPORTED"
FORMATS = ("markdown", "csv")


def show(obj: Any) -> str:
    """Deterministic text for values, points, regions and splits."""
    from .subdiff import EpsSplit

    if obj is None:
        return "-"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (Fraction, int, Infinity)):
        return str(obj)
    if isinstance(obj, str):
        return obj
    if isinstance(obj, (Polyhedron, ParabolaEpsRegion, SumRegion)):
        return describe(obj)
    if isinstance(obj, EpsSplit):
        kind = "direction" if obj.ray else "point"
        parts = " + ".join(f"{fmt(y)}@{e}" for y, e in obj.parts)
        return f"{kind} {fmt(obj.point)} = {parts}"
    if isinstance(obj, tuple) and obj and all(isinstance(c, (Fraction, int)) for c in obj):
        return fmt(obj)
    if isinstance(obj, (tuple, list)):
        return "[" + "; ".join(show(c) for c in obj) + "]"
    if isinstance(obj, dict):
        return ", ".join(f"{k}={show(v)}" for k, v in obj.items())
    return str(obj)


def certificate_id(query: str, verdict: str, value: str, witness: str, certificate: str) -> str:
    payload = "\x1f".join((query, verdict, value, witness, certificate)).encode("utf-8")
    return "C" + hashlib.sha256(payload).hexdigest()[:12]


@dataclass(frozen=True)
class Row:
    query: str
    verdict: str
    value: str
    witness: str
    certificate: str = ""

    @property
    def certificate_id(self) -> str:
        return certificate_id(self.query, self.verdict, self.value, self.witness, self.certificate)

    def cells(self) -> tuple[str, ...]:
        return (self.query, self.verdict, self.value, self.witness, self.certificate_id)


def row(query: str, ok: bool | None, value: Any, witness: Any = None, certificate: str = "") -> Row:
    """Build a row; ``ok=None`` means informational (no verdict asserted)."""
    verdict = INFO if ok is None else (PASS if ok else FAIL)
    return Row(query, verdict, show(value), show(witness), certificate)


@dataclass
class Report:
    title: str
    rows: list[Row] = field(default_factory=list)

    def add(self, r: Row) -> Row:
        self.rows.append(r)
        return r

    def extend(self, rows) -> None:
        self.rows.extend(rows)

    @property
    def failures(self) -> list[Row]:
        return [r for r in self.rows if r.verdict in (FAIL, UNSUPPORTED)]

    @property
    def all_pass(self) -> bool:
        return not self.failures

    def summary(self) -> str:
        counts = {v: sum(r.verdict == v for r in self.rows) for v in (PASS, FAIL, INFO, UNSUPPORTED)}
        n = len(self.rows)
        return f"{n} row{'' if n == 1 else 's'}: " + ", ".join(f"{k} {v}" for v, k in counts.items() if k or v in (PASS, FAIL))

    def render(self, fmt_name: str = "markdown") -> str:
        if fmt_name == "csv":
            return self.to_csv()
        if fmt_name == "markdown":
            return self.to_markdown()
        raise ValueError(f"unknown format {fmt_name!r}; expected one of {FORMATS}")

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(COLUMNS)
        for r in self.rows:
            w.writerow(r.cells())
        return buf.getvalue()

    def to_markdown(self) -> str:
        def cell(s: str) -> str:
            return s.replace("|", "\\|").replace("\n", " ")

        lines = [f"# {self.title}", "", "| " + " | ".join(COLUMNS) + " |", "|" + "---|" * len(COLUMNS)]
        lines += ["| " + " | ".join(cell(c) for c in r.cells()) + " |" for r in self.rows]
        lines += ["", f"Summary: {self.summary()}"]
        notes = [r for r in self.rows if r.certificate]
        if notes:
            lines += ["", "Certificates:", ""]
            lines += [f"- {r.certificate_id}: {cell(r.certificate)}" for r in notes]
        return "\n".join(lines) + "\n"


def merge(title: str, reports: list[Report]) -> Report:
    out = Report(title)
    for rep in reports:
        out.extend(rep.rows)
    return out
