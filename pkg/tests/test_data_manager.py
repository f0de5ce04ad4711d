import json
from fractions import Fraction

import pytest

from superjets import data_manager
from superjets.errors import CrossedModuleError, SchemaError
from superjets.linfty import heisenberg_lie, sl2
from superjets.schur import YoungDiagram


@pytest.mark.parametrize("doc, message", [
    ([], "Document must be a JSON object"),
    ({"kind": "manifold"}, "Invalid kind"),
    ({"kind": "lie_algebra"}, "Missing required field: basis"),
    ({"kind": "young"}, "Missing required field: rows"),
    ({"kind": "crossed_module", "g": {}, "h": {}}, "Missing required field: m"),
])
def test_validate_document_rejects(doc, message):
    ok, text = data_manager.validate_document(doc)
    assert not ok
    assert message in text


def test_validate_document_accepts_examples():
    assert data_manager.validate_document({"kind": "lie_algebra", "example": "sl2"}) == (True, "Valid")
    assert data_manager.validate_document({"kind": "fiber", "fiber_dim": 2}) == (True, "Valid")


def test_load_document_reports_line_of_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text('{\n  "kind": "young",\n  "rows": [2, 1\n}\n')
    with pytest.raises(SchemaError) as info:
        data_manager.load_document(str(path))
    assert info.value.field.startswith("line ")


def test_load_document_missing_file(tmp_path):
    with pytest.raises(SchemaError) as info:
        data_manager.load_document(str(tmp_path / "absent.json"))
    assert info.value.field == "input"


def test_parse_lie_examples():
    assert data_manager.parse_document({"kind": "lie_algebra", "example": "sl2"}) == sl2()
    assert data_manager.parse_document({"kind": "lie_algebra", "example": "heisenberg"}) == heisenberg_lie()
    assert data_manager.parse_document({"kind": "lie_algebra", "example": "abelian", "dim": 3}).dim == 3


def test_parse_explicit_lie_algebra():
    doc = {"kind": "lie_algebra", "basis": ["x", "y", "z"], "brackets": [["x", "y", {"z": "1/2"}]]}
    lie = data_manager.parse_document(doc)
    assert lie.structure("x", "y") == {"z": Fraction(1, 2)}
    assert lie.structure("y", "x") == {"z": Fraction(-1, 2)}


@pytest.mark.parametrize("doc", [
    {"kind": "lie_algebra", "basis": ["x", "y"], "brackets": [["x", "y", {"x": "abc"}]]},
    {"kind": "lie_algebra", "basis": ["x", "y"], "brackets": [["x", "y"]]},
    {"kind": "lie_algebra", "basis": ["x", "y"], "brackets": [["x", "w", {"x": 1}]]},
    {"kind": "lie_algebra", "example": "so3"},
    {"kind": "simplicial_set", "construction": "sphere"},
    {"kind": "gerbe_cocycle", "fiber_dim": 1, "h": "x1 + w9"},
])
def test_parse_document_schema_errors(doc):
    with pytest.raises(SchemaError):
        data_manager.parse_document(doc)


def test_parse_document_rejects_invalid():
    with pytest.raises(SchemaError):
        data_manager.parse_document({"kind": "group_law", "coordinates": ["x"]})


def test_parse_crossed_module_with_flip_fails_axioms():
    doc = {"kind": "crossed_module", "example": "adjoint", "lie": {"example": "sl2"}, "sign_flip": ["h", "e"]}
    with pytest.raises(CrossedModuleError):
        data_manager.parse_document(doc)


def test_parse_simplicial_sets():
    nerve = data_manager.parse_document(
        {"kind": "simplicial_set", "construction": "nerve", "group": {"cyclic": 2}})
    assert nerve.m == 2
    assert nerve.sizes() == [1, 2, 4, 8]
    pairs = data_manager.parse_document({"kind": "simplicial_set", "construction": "pairs", "size": 2})
    assert pairs.sizes()[:2] == [2, 4]
    delta = data_manager.parse_document({"kind": "simplicial_set", "construction": "delta"})
    assert delta.m == 1


def test_parse_pointed_set():
    S = data_manager.parse_pointed_set(None, 3)
    assert S.elements == ("*", "s1", "s2")
    assert S.basepoint == "*"
    explicit = data_manager.parse_pointed_set({"elements": ["a", "b"], "basepoint": "b"})
    assert explicit.basepoint == "b"
    with pytest.raises(SchemaError):
        data_manager.parse_pointed_set(None, 0)
    with pytest.raises(SchemaError):
        data_manager.parse_pointed_set(None)


def test_parse_small_kinds():
    assert data_manager.parse_document({"kind": "young", "rows": [2, 1]}) == YoungDiagram((2, 1))
    assert data_manager.parse_document({"kind": "fiber", "fiber_dim": 2}) == (2, 1)
    fiber_dim, h = data_manager.parse_document({"kind": "gerbe_cocycle", "fiber_dim": 1, "h": "x1*z1"})
    assert fiber_dim == 1
    assert str(h) == "x1*z1"


def test_serialize_document_is_canonical():
    doc = {"kind": "lie_algebra", "basis": ["x", "y", "z"],
           "brackets": [["y", "x", {"z": "-1/2"}]]}
    text = data_manager.serialize_document(doc)
    assert text.endswith("\n")
    assert data_manager.serialize_document(json.loads(text)) == text
    assert json.loads(text)["brackets"] == [["x", "y", {"z": "1/2"}]]


def test_save_document_round_trip(tmp_path):
    doc = {"kind": "lie_algebra", "example": "sl2"}
    path = data_manager.save_document(doc, str(tmp_path / "sl2.json"))
    assert data_manager.load_document(path) == doc


def test_empty_history(history_file):
    assert data_manager.load_report_history().empty
    assert data_manager.get_history_statistics() == {}
    assert data_manager.get_report_by_id(1) is None


def test_append_and_query_history(history_file):
    passing = {"command": "check", "kind": "lie_algebra", "ok": True, "verdicts": []}
    failing = {"command": "build", "kind": "fiber", "construction": "app1", "ok": False, "verdicts": []}
    assert data_manager.append_report(passing, "sl2.json") == 1
    assert data_manager.append_report(failing) == 2
    assert history_file.exists()

    assert data_manager.get_report_by_id(2)["construction"] == "app1"
    assert len(data_manager.get_reports_by_command("check")) == 1

    stats = data_manager.get_history_statistics()
    assert stats["total_reports"] == 2
    assert stats["passing"] == 1
    assert stats["failing"] == 1
    assert stats["by_command"] == {"check": 1, "build": 1}


def test_canonical_cocycle_reparses_phi():
    doc = {"kind": "cocycle", "group": {"example": "abelian", "dim": 2}, "n": "2", "h": ["k"],
           "phi": {"k": "x2_2 * x1_1 + 0*x1_2"}}
    canonical = json.loads(data_manager.serialize_document(doc))
    assert canonical == {"kind": "cocycle", "group": {"example": "abelian", "dim": 2}, "h": ["k"], "n": 2,
                         "phi": {"k": "x1_1*x2_2"}}
    assert data_manager.parse_document(canonical).phi["k"] == data_manager.parse_document(doc).phi["k"]


@pytest.mark.parametrize("doc, expected", [
    ({"rows": ["2", 1], "parity": "ODD", "n": "3", "kind": "young"},
     {"kind": "young", "rows": [2, 1], "n": 3, "parity": "odd"}),
    ({"form_degree": "2", "fiber_dim": "3", "kind": "fiber"},
     {"kind": "fiber", "fiber_dim": 3, "form_degree": 2}),
    ({"kind": "fiber", "fiber_dim": 1},
     {"kind": "fiber", "fiber_dim": 1, "form_degree": 1}),
    ({"pointed_set": {"elements": ["*", 1]}, "m": "2", "group": {"cyclic": "3"},
      "construction": "nerve", "kind": "simplicial_set"},
     {"kind": "simplicial_set", "construction": "nerve", "m": 2, "group": {"cyclic": 3},
      "pointed_set": {"elements": ["*", "1"], "basepoint": "*"}}),
])
def test_canonical_small_kinds(doc, expected):
    text = data_manager.serialize_document(doc)
    assert json.loads(text) == expected
    assert data_manager.serialize_document(json.loads(text)) == text


def test_canonical_explicit_simplicial_set_orders_face_tables():
    doc = {"kind": "simplicial_set", "construction": "explicit", "m": 0,
           "levels": [["a"], ["a"]],
           "faces": {"1": [["a"], ["a"]]},
           "degeneracies": {"0": [["a"]]}}
    canonical = data_manager.canonicalize_document(doc)
    assert canonical["levels"] == [["a"], ["a"]]
    assert list(canonical["faces"]) == ["1"]
    assert data_manager.parse_document(canonical).sizes() == [1, 1]
