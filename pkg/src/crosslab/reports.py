"""Verification reports and their byte-stable JSON / CSV serialization."""
from __future__ import annotations

import json
import math
import os
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

SIGNATURE_HEADER = ("d", "N", "a", "n_pos", "n_zero", "n_neg")
AMPLITUDE_HEADER = ("s", "t", "Re A", "Im A")
RECORD_HEADER = ("check", "residual", "tolerance", "bound", "passed")


@dataclass
class CheckRecord:
    name: str
    residual: float
    tolerance: float
    bound: str = "upper"        # "upper": pass iff residual <= tol; "lower": pass iff residual > tol
    runtime_ms: float = 0.0

    @property
    def passed(self) -> bool:
        r = float(self.residual)
        if math.isnan(r):
            return False
        return r <= self.tolerance if self.bound == "upper" else r > self.tolerance

    def as_dict(self, timing: bool = False) -> dict:
        out = {"name": self.name, "residual": float(self.residual), "tolerance": float(self.tolerance),
               "bound": self.bound, "passed": self.passed}
        if timing:
            out["runtime_ms"] = float(self.runtime_ms)
        return out


@dataclass
class VerificationReport:
    suite: str
    config: dict
    records: list[CheckRecord]
    fingerprint: str
    tables: dict = field(default_factory=dict)   # name -> {"header": [...], "rows": [[...], ...]}

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.records)

    def as_dict(self, timing: bool = False) -> dict:
        return {"suite": self.suite, "config": self.config, "fingerprint": self.fingerprint,
                "passed": self.passed, "records": [r.as_dict(timing) for r in self.records],
                "tables": self.tables}

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        recs = [CheckRecord(r["name"], r["residual"], r["tolerance"], r.get("bound", "upper"),
                            r.get("runtime_ms", 0.0)) for r in d["records"]]
        return cls(d["suite"], d["config"], recs, d["fingerprint"], d.get("tables", {}))

    def summary_lines(self) -> list[str]:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name}: residual {_fmt_float(r.residual)}"
                 f" ({'<=' if r.bound == 'upper' else '>'} {_fmt_float(r.tolerance)})" for r in self.records]
        lines.append(f"{self.suite}: {'PASS' if self.passed else 'FAIL'} [{self.fingerprint}]")
        return lines


# ------------------------------------------------------------ serialization

def _fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if not any(c in text for c in ".eE"):
        text += ".0"
    return text


def plain(obj):
    """Reduce Fractions, complex numbers, tuples and numpy scalars to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [plain(v) for v in obj]
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, Fraction):
        return int(obj) if obj.denominator == 1 else str(obj)
    if hasattr(obj, "item") and not isinstance(obj, (int, float, complex)):
        obj = obj.item()
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if isinstance(obj, (int, float)):
        return obj
    return str(obj)


def _encode(obj, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(k)}: {_encode(obj[k], indent + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_encode(v, 0) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + _encode(v, indent + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def to_json_text(report: VerificationReport, timing: bool = False) -> str:
    return _encode(plain(report.as_dict(timing)), 0) + "\n"


def _csv_cell(v) -> str:
    if isinstance(v, complex):
        sign = "-" if v.imag < 0 or (v.imag == 0 and math.copysign(1, v.imag) < 0) else "+"
        return f"{_fmt_float(v.real)}{sign}{_fmt_float(abs(v.imag))}j"
    v = plain(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return _fmt_float(v)
    return str(v)


def to_csv_text(report: VerificationReport) -> str:
    """The suite's primary table if it has one, otherwise the check records."""
    if report.tables:
        name = sorted(report.tables)[0] if "primary" not in report.tables else "primary"
        table = report.tables[name]
        header, rows = table["header"], table["rows"]
    else:
        header = RECORD_HEADER
        rows = [[r.name, r.residual, r.tolerance, r.bound, r.passed] for r in report.records]
    lines = [",".join(header)] + [",".join(_csv_cell(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def render(report: VerificationReport, fmt: str = "json", timing: bool = False) -> str:
    if fmt == "json":
        return to_json_text(report, timing)
    if fmt == "csv":
        return to_csv_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def atomic_write(path, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(report: VerificationReport, fmt: str, path, timing: bool = False) -> None:
    atomic_write(path, render(report, fmt, timing))


def _parse_constant(name: str) -> float:
    return {"NaN": math.nan, "Infinity": math.inf, "-Infinity": -math.inf}[name]


def load_report(path) -> VerificationReport:
    with open(path, encoding="utf-8") as fh:
        return VerificationReport.from_dict(json.load(fh, parse_constant=_parse_constant))
