"""
Tests for report encoding.
"""
import io
import json

import pandas as pd
import pytest

from parry_words.report import (
    CSV_COLUMNS,
    REPORT_KEYS,
    AnalysisReport,
    Verdict,
    emit_report,
    emit_summary,
    parse_report,
)
from parry_words.verify import run_theorem_suite


def small_report(**overrides) -> AnalysisReport:
    fields = dict(
        digits=(2, 2),
        classification={"tag": "ConfluentNonUnit", "m": 2, "t": 2, "s": 2},
        horizon=3,
        c=[1, 2, 3, 5],
        delta_c=[1, 1, 2],
        delta2_c=[0, 1],
        p=[1, 2, 1, 2],
        closed_forms={"p": [1, 2, 1, 2], "delta_c": [1, 1, 2], "psi": None},
        verdicts=[
            Verdict("closed_form_p", True, 4),
            Verdict("zero_blocks", False, 2, {"missing": [[1, 4, 1]]}),
        ],
    )
    fields.update(overrides)
    return AnalysisReport(**fields)


def test_json_key_order():
    obj = json.loads(emit_report(small_report()))
    assert tuple(obj) == REPORT_KEYS
    assert list(obj["verdicts"][0]) == ["name", "passed", "checked", "counterexample"]


def test_json_round_trip():
    report = small_report()
    data = emit_report(report)
    parsed = parse_report(data)
    assert parsed == report
    assert emit_report(parsed) == data
    assert data.endswith(b"\n")


def test_parse_report_rejects_missing_keys():
    obj = json.loads(emit_report(small_report()))
    del obj["horizon"]
    with pytest.raises(ValueError, match="horizon"):
        parse_report(json.dumps(obj).encode("utf-8"))


def test_passed_and_failures():
    report = small_report()
    assert not report.passed
    assert [v.name for v in report.failures()] == ["zero_blocks"]
    assert small_report(verdicts=[Verdict("closed_form_p", True, 4)]).passed


def test_summary_keeps_counterexamples_of_failures_only():
    summary = small_report().summary()
    assert summary["passed"] is False
    assert summary["verdicts"][0] == {"name": "closed_form_p", "passed": True, "checked": 4}
    assert summary["verdicts"][1]["counterexample"] == {"missing": [[1, 4, 1]]}
    listing = json.loads(emit_summary([small_report(), small_report()]))
    assert len(listing) == 2


def test_csv_columns_and_padding():
    frame = pd.read_csv(io.BytesIO(emit_report(small_report(), "csv")))
    assert list(frame.columns) == CSV_COLUMNS
    assert frame["n"].tolist() == [0, 1, 2, 3]
    assert frame["C"].tolist() == [1, 2, 3, 5]
    assert frame["ΔC"].isna().tolist() == [False, False, False, True]
    assert frame["Δ²C"].isna().sum() == 2


def test_csv_without_closed_forms():
    text = emit_report(small_report(closed_forms={}), "csv").decode("utf-8")
    lines = text.splitlines()
    assert lines[0] == ",".join(CSV_COLUMNS)
    assert lines[1] == "0,1,1,0,1,,"


def test_unknown_format():
    with pytest.raises(ValueError):
        emit_report(small_report(), "xml")


def test_reports_are_deterministic():
    first = emit_report(run_theorem_suite([2, 2], prefix_len=20_000, n_max=40))
    second = emit_report(run_theorem_suite([2, 2], prefix_len=20_000, n_max=40))
    assert first == second
    assert json.loads(first)["timings"] == {}


def test_zero_n_max_report():
    report = run_theorem_suite([1, 1], prefix_len=100, n_max=0)
    assert report.horizon == 0
    assert report.c == [1]
    assert report.p == [1]
    assert report.delta_c == []
    assert report.closed_forms["p"] == [1]
    frame = pd.read_csv(io.BytesIO(emit_report(report, "csv")))
    assert len(frame) == 1


def test_timings_recorded_on_request():
    report = run_theorem_suite([1, 1], prefix_len=5000, n_max=20, timings=True)
    assert set(report.timings) == {"generate", "index", "verify"}
