import json
import logging
from datetime import datetime

import pandas as pd

logger = logging.getLogger(__name__)

RULE = "=" * 60


def verdicts_frame(report):
    """One row per verdict of a report"""
    rows = []
    for verdict in report.get("verdicts", []):
        rows.append({
            "check": verdict.get("name"),
            "ok": verdict.get("ok"),
            "kind": verdict.get("kind"),
            "message": verdict.get("message"),
            "witness": json.dumps(verdict.get("witness"), sort_keys=True, default=str),
        })
    return pd.DataFrame(rows, columns=["check", "ok", "kind", "message", "witness"])


def export_to_csv(report):
    """Export the verdict table of a report to CSV"""
    try:
        return verdicts_frame(report).to_csv(index=False).encode("utf-8")
    except Exception as e:
        logger.error("Error exporting to CSV: %s", e)
        return None


def export_to_json(report):
    """Export a full report as canonical JSON"""
    try:
        return (json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False, default=str) + "\n").encode("utf-8")
    except Exception as e:
        logger.error("Error exporting to JSON: %s", e)
        return None


def generate_summary_report(report, timestamp=True):
    """Generate a text summary of a report"""
    if not report:
        return "No report available."
    header = f"SUPERJETS {str(report.get('command', '')).upper()} REPORT"
    lines = [header]
    if timestamp:
        lines.append(f"Generated: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')}")
    lines += [RULE, f"Kind: {report.get('kind')}"]
    if report.get("construction"):
        lines.append(f"Construction: {report['construction']}")
    lines.append(f"Overall: {'OK' if report.get('ok') else 'FAILED'}")
    lines += ["", "VERDICTS", RULE]
    for verdict in report.get("verdicts", []):
        mark = "ok  " if verdict.get("ok") else "FAIL"
        lines.append(f"[{mark}] {verdict.get('name')}: {verdict.get('message')}")
        if not verdict.get("ok") and verdict.get("witness") is not None:
            lines.append(f"       witness: {json.dumps(verdict['witness'], sort_keys=True, default=str)}")
    objects = report.get("objects") or {}
    if objects:
        lines += ["", "OBJECTS", RULE]
        for name, value in objects.items():
            if isinstance(value, (dict, list)):
                lines.append(f"{name}:")
                lines.append(json.dumps(value, indent=2, sort_keys=True, ensure_ascii=False, default=str))
            else:
                lines.append(f"{name}: {value}")
    return "\n".join(lines) + "\n"


def history_frame(history_df, command=None, ok=None):
    """Saved reports filtered by command and outcome"""
    df = history_df.copy()
    if command and command != "All":
        df = df[df["command"] == command]
    if ok is not None:
        df = df[df["ok"].astype(bool) == ok]
    return df[["id", "command", "kind", "construction", "ok", "input", "created"]]
