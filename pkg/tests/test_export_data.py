import json

import pandas as pd

from superjets import export_data

REPORT = {
    "schema_version": 1,
    "command": "build",
    "kind": "fiber",
    "construction": "app1",
    "ok": False,
    "verdicts": [
        {"name": "q_squared", "ok": True, "kind": None, "message": "Q^2 = 0", "witness": None},
        {"name": "closed", "ok": False, "kind": "closed", "message": "not closed", "witness": {"omega": "x1*dx1"}},
    ],
    "objects": {"dim": 3, "degrees": {"x1": 0}},
}


def test_verdicts_frame():
    df = export_data.verdicts_frame(REPORT)
    assert list(df.columns) == ["check", "ok", "kind", "message", "witness"]
    assert df["check"].tolist() == ["q_squared", "closed"]
    assert json.loads(df.iloc[1]["witness"]) == {"omega": "x1*dx1"}


def test_verdicts_frame_empty_report():
    df = export_data.verdicts_frame({})
    assert df.empty
    assert "check" in df.columns


def test_export_to_csv():
    data = export_data.export_to_csv(REPORT)
    assert data.decode("utf-8").splitlines()[0] == "check,ok,kind,message,witness"


def test_export_to_json_is_stable():
    data = export_data.export_to_json(REPORT)
    assert json.loads(data) == REPORT
    assert export_data.export_to_json(dict(reversed(list(REPORT.items())))) == data


def test_summary_report():
    text = export_data.generate_summary_report(REPORT, timestamp=False)
    lines = text.splitlines()
    assert lines[0] == "SUPERJETS BUILD REPORT"
    assert "Construction: app1" in lines
    assert "Overall: FAILED" in lines
    assert "[ok  ] q_squared: Q^2 = 0" in lines
    assert "[FAIL] closed: not closed" in lines
    assert any(line.strip().startswith("witness:") for line in lines)
    assert "Generated:" not in text


def test_summary_report_without_report():
    assert export_data.generate_summary_report(None) == "No report available."


def test_history_frame_filters():
    history = pd.DataFrame([
        {"id": 1, "command": "check", "kind": "young", "construction": None, "ok": True,
         "input": "a.json", "created": "2024-01-01 00:00:00", "report": {}},
        {"id": 2, "command": "build", "kind": "fiber", "construction": "app1", "ok": False,
         "input": "b.json", "created": "2024-01-02 00:00:00", "report": {}},
    ])
    assert export_data.history_frame(history)["id"].tolist() == [1, 2]
    assert export_data.history_frame(history, "All")["id"].tolist() == [1, 2]
    assert export_data.history_frame(history, "build")["id"].tolist() == [2]
    assert export_data.history_frame(history, ok=True)["id"].tolist() == [1]
    assert "report" not in export_data.history_frame(history).columns
