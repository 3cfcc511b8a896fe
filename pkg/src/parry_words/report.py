"""
Analysis reports and their JSON / CSV encodings.

JSON keys always come out in the same order and arrays are plain integer
lists, so a report for fixed inputs is byte-identical across runs.
"""
import io
import json
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd

logger = logging.getLogger("parry-words")

REPORT_KEYS = (
    "digits",
    "classification",
    "horizon",
    "c",
    "delta_c",
    "delta2_c",
    "p",
    "closed_forms",
    "verdicts",
    "timings",
)

CSV_COLUMNS = ["n", "C", "ΔC", "Δ²C", "P", "P_closed", "ΔC_closed"]


@dataclass
class Verdict:
    """Outcome of one identity check; counterexample holds the first failure."""
    name: str
    passed: bool
    checked: int = 0
    counterexample: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": self.counterexample,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "Verdict":
        return cls(data["name"], bool(data["passed"]), int(data.get("checked", 0)), data.get("counterexample"))


@dataclass
class AnalysisReport:
    digits: Tuple[int, ...]
    classification: Dict[str, Any]
    horizon: int
    c: List[int]
    delta_c: List[int]
    delta2_c: List[int]
    p: List[int]
    closed_forms: Dict[str, Any] = field(default_factory=dict)
    verdicts: List[Verdict] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(v.passed for v in self.verdicts)

    def failures(self) -> List[Verdict]:
        return [v for v in self.verdicts if not v.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "digits": list(self.digits),
            "classification": self.classification,
            "horizon": self.horizon,
            "c": list(self.c),
            "delta_c": list(self.delta_c),
            "delta2_c": list(self.delta2_c),
            "p": list(self.p),
            "closed_forms": self.closed_forms,
            "verdicts": [v.to_dict() for v in self.verdicts],
            "timings": self.timings,
        }

    def summary(self) -> Dict[str, Any]:
        """Compact form for verify and sweep output."""
        return {
            "digits": list(self.digits),
            "classification": self.classification,
            "horizon": self.horizon,
            "passed": self.passed,
            "psi": self.closed_forms.get("psi"),
            "verdicts": [
                {"name": v.name, "passed": v.passed, "checked": v.checked}
                if v.passed else v.to_dict()
                for v in self.verdicts
            ],
        }


def _json_bytes(obj: Any) -> bytes:
    return (json.dumps(obj, indent=2, ensure_ascii=False) + "\n").encode("utf-8")


def _csv_frame(r: AnalysisReport) -> pd.DataFrame:
    size = len(r.c)

    def column(values: List[Optional[int]]) -> pd.Series:
        padded = list(values)[:size] + [None] * max(0, size - len(values))
        return pd.Series(padded, dtype="Int64")

    return pd.DataFrame({
        "n": pd.Series(range(size), dtype="Int64"),
        "C": column(r.c),
        "ΔC": column(r.delta_c),
        "Δ²C": column(r.delta2_c),
        "P": column(r.p),
        "P_closed": column(r.closed_forms.get("p", [])),
        "ΔC_closed": column(r.closed_forms.get("delta_c", [])),
    }, columns=CSV_COLUMNS)


def emit_report(r: AnalysisReport, fmt: str = "json") -> bytes:
    if fmt == "json":
        return _json_bytes(r.to_dict())
    if fmt == "csv":
        buffer = io.StringIO()
        _csv_frame(r).to_csv(buffer, index=False, lineterminator="\n")
        return buffer.getvalue().encode("utf-8")
    raise ValueError(f"Unknown report format {fmt!r} (expected json or csv)")


def emit_summary(reports: List[AnalysisReport]) -> bytes:
    return _json_bytes([r.summary() for r in reports])


def parse_report(data: bytes) -> AnalysisReport:
    """Inverse of emit_report(..., "json")."""
    obj = json.loads(data.decode("utf-8"))
    missing = [key for key in REPORT_KEYS if key not in obj]
    if missing:
        raise ValueError(f"Report is missing keys: {', '.join(missing)}")
    return AnalysisReport(
        digits=tuple(obj["digits"]),
        classification=obj["classification"],
        horizon=int(obj["horizon"]),
        c=list(obj["c"]),
        delta_c=list(obj["delta_c"]),
        delta2_c=list(obj["delta2_c"]),
        p=list(obj["p"]),
        closed_forms=obj["closed_forms"],
        verdicts=[Verdict.from_dict(v) for v in obj["verdicts"]],
        timings=obj["timings"],
    )
