import json
import logging
import os
from datetime import datetime

import pandas as pd

from superjets import config
from superjets.constructions import (
    CrossedModule,
    GroupCocycle,
    adjoint_crossed_module,
    heisenberg_center_crossed_module,
    identity_crossed_module,
    point_algebra,
)
from superjets.errors import SchemaError
from superjets.linfty import abelian_lie, heisenberg_lie, lie_algebra, sl2, upper_triangular_lie
from superjets.nervejet import PolyGroupLaw, abelian_law, heisenberg_law, upper_triangular_law
from superjets.schur import YoungDiagram
from superjets.simplicial import (
    PointedFiniteSet,
    cyclic_group,
    delta_simplex,
    discrete,
    from_explicit,
    group_from_table,
    klein_group,
    nerve_group,
    pair_nerve,
)
from superjets.superalg import format_scalar, to_scalar

logger = logging.getLogger(__name__)

DOCUMENT_KINDS = (
    "lie_algebra",
    "crossed_module",
    "cocycle",
    "group_law",
    "simplicial_set",
    "young",
    "gerbe_cocycle",
    "fiber",
)

REQUIRED_FIELDS = {
    "lie_algebra": ("basis",),
    "crossed_module": ("g", "h", "m"),
    "cocycle": ("group", "h", "n", "phi"),
    "group_law": ("coordinates", "law"),
    "simplicial_set": ("construction",),
    "young": ("rows",),
    "gerbe_cocycle": ("fiber_dim", "h"),
    "fiber": ("fiber_dim",),
}

LIE_EXAMPLES = {
    "abelian": lambda doc: abelian_lie(int(doc.get("dim", 2))),
    "heisenberg": lambda doc: heisenberg_lie(),
    "sl2": lambda doc: sl2(),
    "upper_triangular": lambda doc: upper_triangular_lie(int(doc.get("n", 4))),
}

GROUP_LAW_EXAMPLES = {
    "abelian": lambda doc: abelian_law(int(doc.get("dim", 2))),
    "heisenberg": lambda doc: heisenberg_law(),
    "upper_triangular": lambda doc: upper_triangular_law(int(doc.get("n", 4))),
}

HISTORY_COLUMNS = ["id", "command", "kind", "construction", "ok", "input", "created", "report"]


def ensure_data_directory():
    """Ensure the data directory exists"""
    os.makedirs(os.path.dirname(config.HISTORY_FILE) or ".", exist_ok=True)


# -- input documents -----------------------------------------------------------


def load_document(path):
    """Load an input document from a JSON file"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise SchemaError(f"line {e.lineno}", e.msg) from None
    except OSError as e:
        raise SchemaError("input", f"cannot read {path}: {e.strerror}") from None


def validate_document(doc):
    """Validate an input document before parsing"""
    if not isinstance(doc, dict):
        return False, "Document must be a JSON object"
    kind = doc.get("kind")
    if kind not in DOCUMENT_KINDS:
        return False, f"Invalid kind. Must be one of: {list(DOCUMENT_KINDS)}"
    if doc.get("example"):
        return True, "Valid"
    for field_name in REQUIRED_FIELDS[kind]:
        if field_name not in doc:
            return False, f"Missing required field: {field_name}"
    return True, "Valid"


def _scalar(value, where):
    try:
        return to_scalar(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(where, f"{value!r} is not an exact rational") from None


def _vector(row, where):
    if not isinstance(row, dict):
        raise SchemaError(where, "expected a mapping of basis names to scalars")
    return {name: _scalar(c, where) for name, c in row.items()}


def _example(doc, table, where):
    name = doc.get("example")
    if name not in table:
        raise SchemaError(where, f"unknown example {name!r}; choose from {sorted(table)}")
    return table[name](doc)


def parse_lie_algebra(doc):
    if doc.get("example"):
        return _example(doc, LIE_EXAMPLES, "example")
    rows = []
    for entry in doc.get("brackets", []):
        if not isinstance(entry, list) or len(entry) != 3:
            raise SchemaError("brackets", f"expected [x, y, {{z: c}}], got {entry!r}")
        x, y, outputs = entry
        rows.append((x, y, _vector(outputs, "brackets")))
    return lie_algebra(doc["basis"], rows)


def parse_group_law(doc):
    if doc.get("example"):
        return _example(doc, GROUP_LAW_EXAMPLES, "example")
    return PolyGroupLaw(tuple(doc["coordinates"]), dict(doc["law"]))


def parse_crossed_module(doc):
    example = doc.get("example")
    if example == "identity":
        return identity_crossed_module()
    if example == "heisenberg_center":
        return heisenberg_center_crossed_module()
    if example == "adjoint":
        flip = doc.get("sign_flip")
        return adjoint_crossed_module(parse_lie_algebra(doc["lie"]), tuple(flip) if flip else None)
    if example:
        raise SchemaError("example", f"unknown crossed module {example!r}")
    action = {}
    for entry in doc.get("action", []):
        x, a, row = entry
        action[(x, a)] = _vector(row, "action")
    m = {a: _vector(row, "m") for a, row in doc["m"].items()}
    return CrossedModule(parse_lie_algebra(doc["g"]), parse_lie_algebra(doc["h"]), m, action)


def parse_cocycle(doc):
    group = parse_group_law(doc["group"])
    n = int(doc["n"])
    slots = group.slot_algebra(n)
    phi = {k: slots.parse(text) for k, text in doc["phi"].items()}
    action = None
    if doc.get("action"):
        one = group.slot_algebra(1)
        action = {(b, a): one.parse(text) for b, a, text in doc["action"]}
    return GroupCocycle(group, tuple(doc["h"]), n, phi, action)


def parse_group_table(doc):
    if "cyclic" in doc:
        return cyclic_group(int(doc["cyclic"]))
    if doc.get("klein"):
        return klein_group()
    if "elements" in doc and "table" in doc:
        return group_from_table(doc["elements"], doc["table"])
    raise SchemaError("group", "give cyclic: n, klein: true, or elements and table")


def parse_pointed_set(doc, size=None):
    """Pointed set from a document entry, or ``{*, s1, ..}`` of the given size"""
    if doc is None:
        if size is None:
            raise SchemaError("pointed_set", "no pointed set given")
        if size < 1:
            raise SchemaError("pointed_set", "a pointed set has at least the basepoint")
        return PointedFiniteSet(("*",) + tuple(f"s{i}" for i in range(1, size)), "*")
    return PointedFiniteSet(tuple(str(e) for e in doc["elements"]), str(doc.get("basepoint", doc["elements"][0])))


def parse_simplicial_set(doc):
    construction = doc["construction"]
    m = doc.get("m")
    if construction == "nerve":
        return nerve_group(parse_group_table(doc["group"]), 2 if m is None else int(m))
    if construction == "delta":
        return delta_simplex(int(doc.get("p", 1)), 1 if m is None else int(m))
    if construction == "discrete":
        return discrete(doc.get("points", ["a"]), 0 if m is None else int(m))
    if construction == "pairs":
        return pair_nerve(parse_pointed_set(doc.get("set"), doc.get("size")), 2 if m is None else int(m))
    if construction == "explicit":
        return from_explicit(doc)
    raise SchemaError("construction", f"unknown simplicial set construction {construction!r}")


def parse_gerbe_cocycle(doc):
    fiber_dim = int(doc["fiber_dim"])
    return fiber_dim, point_algebra(fiber_dim).parse(doc["h"])


def parse_document(doc):
    """Turn a validated document into its domain object"""
    ok, message = validate_document(doc)
    if not ok:
        raise SchemaError("document", message)
    kind = doc["kind"]
    try:
        if kind == "lie_algebra":
            return parse_lie_algebra(doc)
        if kind == "crossed_module":
            return parse_crossed_module(doc)
        if kind == "cocycle":
            return parse_cocycle(doc)
        if kind == "group_law":
            return parse_group_law(doc)
        if kind == "simplicial_set":
            return parse_simplicial_set(doc)
        if kind == "young":
            return YoungDiagram(tuple(doc["rows"]))
        if kind == "gerbe_cocycle":
            return parse_gerbe_cocycle(doc)
        return int(doc["fiber_dim"]), int(doc.get("form_degree", 1))
    except KeyError as e:
        raise SchemaError(str(e.args[0]), "missing required field") from None
    except (TypeError, ValueError) as e:
        raise SchemaError(kind, str(e)) from None


def _canonical_pointed_set(doc):
    elements = [str(e) for e in doc["elements"]]
    return {"elements": elements, "basepoint": str(doc.get("basepoint", elements[0]))}


def _canonical_group_table(doc):
    if "cyclic" in doc:
        return {"cyclic": int(doc["cyclic"])}
    if doc.get("klein"):
        return {"klein": True}
    return {"elements": [str(e) for e in doc["elements"]], "table": [[str(e) for e in row] for row in doc["table"]]}


def _canonical_simplicial_set(doc):
    out = {"kind": "simplicial_set", "construction": doc["construction"]}
    for name in ("m", "p", "size"):
        if doc.get(name) is not None:
            out[name] = int(doc[name])
    if "group" in doc:
        out["group"] = _canonical_group_table(doc["group"])
    if "points" in doc:
        out["points"] = [str(p) for p in doc["points"]]
    for name in ("set", "pointed_set"):
        if doc.get(name):
            out[name] = _canonical_pointed_set(doc[name])
    if doc["construction"] == "explicit":
        out["levels"] = [[str(label) for label in level] for level in doc["levels"]]
        for name in ("faces", "degeneracies"):
            if name in doc:
                out[name] = {
                    str(n): [[str(label) for label in row] for row in rows]
                    for n, rows in sorted(doc[name].items(), key=lambda item: int(item[0]))
                }
        if "name" in doc:
            out["name"] = str(doc["name"])
    return out


def _canonical_cocycle(doc):
    group = canonicalize_document({"kind": "group_law", **doc["group"]})
    group.pop("kind")
    cocycle = parse_cocycle(doc)
    out = {
        "kind": "cocycle",
        "group": group,
        "h": list(cocycle.h),
        "n": cocycle.n,
        "phi": {k: str(v) for k, v in sorted(cocycle.phi.items())},
    }
    if cocycle.action:
        out["action"] = [[b, a, str(entry)] for (b, a), entry in sorted(cocycle.action.items())]
    return out


def canonicalize_document(doc):
    """Canonical form of a document: parsed objects re-serialised, keys sorted"""
    kind = doc.get("kind")
    if doc.get("example"):
        return dict(doc)
    if kind == "lie_algebra":
        return {"kind": kind, **parse_lie_algebra(doc).to_dict()}
    if kind == "group_law":
        return {"kind": kind, **parse_group_law(doc).to_dict()}
    if kind == "gerbe_cocycle":
        fiber_dim, h = parse_gerbe_cocycle(doc)
        return {"kind": kind, "fiber_dim": fiber_dim, "h": str(h)}
    if kind == "crossed_module" and "m" in doc:
        out = dict(doc)
        out["g"] = canonicalize_document({"kind": "lie_algebra", **doc["g"]})
        out["h"] = canonicalize_document({"kind": "lie_algebra", **doc["h"]})
        for side in ("g", "h"):
            out[side].pop("kind")
        out["m"] = {a: {k: format_scalar(c) for k, c in sorted(row.items())} for a, row in sorted(doc["m"].items())}
        return out
    if kind == "cocycle":
        return _canonical_cocycle(doc)
    if kind == "simplicial_set":
        return _canonical_simplicial_set(doc)
    if kind == "young":
        out = {"kind": kind, "rows": [int(r) for r in doc["rows"]]}
        for name in ("n", "k", "degree"):
            if name in doc:
                out[name] = int(doc[name])
        if "parity" in doc:
            parity = doc["parity"]
            out["parity"] = parity.lower() if isinstance(parity, str) else int(parity)
        return out
    if kind == "fiber":
        return {"kind": kind, "fiber_dim": int(doc["fiber_dim"]), "form_degree": int(doc.get("form_degree", 1))}
    return dict(doc)


def serialize_document(doc):
    return json.dumps(canonicalize_document(doc), indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def save_document(doc, path):
    """Save a document in canonical form"""
    with open(path, "w", encoding="utf-8") as f:
        f.write(serialize_document(doc))
    return path


# -- report history ------------------------------------------------------------------


def load_report_history():
    """Load saved reports as a DataFrame"""
    ensure_data_directory()
    try:
        if os.path.exists(config.HISTORY_FILE):
            with open(config.HISTORY_FILE, "r", encoding="utf-8") as f:
                data = json.load(f)
            if data:
                df = pd.DataFrame(data)
                for col in HISTORY_COLUMNS:
                    if col not in df.columns:
                        df[col] = None
                return df
        return pd.DataFrame(columns=HISTORY_COLUMNS)
    except Exception as e:
        logger.error("Error loading report history: %s", e)
        return pd.DataFrame(columns=HISTORY_COLUMNS)


def save_report_history(df):
    """Save the report history to JSON"""
    ensure_data_directory()
    try:
        with open(config.HISTORY_FILE, "w", encoding="utf-8") as f:
            json.dump(df.to_dict("records"), f, indent=2, ensure_ascii=False, default=str)
        return True
    except Exception as e:
        logger.error("Error saving report history: %s", e)
        return False


def append_report(report, input_name=""):
    """Append a report to the history and return its id"""
    df = load_report_history()
    next_id = int(df["id"].max()) + 1 if not df.empty else 1
    record = {
        "id": next_id,
        "command": report.get("command"),
        "kind": report.get("kind"),
        "construction": report.get("construction"),
        "ok": bool(report.get("ok")),
        "input": input_name,
        "created": datetime.now().strftime("%Y-%m-%d %H:%M:%S"),
        "report": report,
    }
    df = pd.concat([df, pd.DataFrame([record])], ignore_index=True)
    save_report_history(df)
    return next_id


def get_report_by_id(report_id):
    """Get a saved report by id"""
    df = load_report_history()
    match = df[df["id"] == report_id]
    if match.empty:
        return None
    return match.iloc[0]["report"]


def get_reports_by_command(command):
    df = load_report_history()
    return df[df["command"] == command]


def get_history_statistics():
    """Summary statistics over the saved reports"""
    df = load_report_history()
    if df.empty:
        return {}
    return {
        "total_reports": len(df),
        "passing": int(df["ok"].astype(bool).sum()),
        "failing": int((~df["ok"].astype(bool)).sum()),
        "by_command": df["command"].value_counts().to_dict(),
        "by_kind": df["kind"].value_counts().to_dict(),
    }
