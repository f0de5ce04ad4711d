import json
from pathlib import Path

import pytest

from superjets.cli import main

DATA_DIR = Path(__file__).resolve().parent.parent / "data"

SL2_BROKEN = {
    "kind": "lie_algebra",
    "basis": ["h", "e", "f"],
    "brackets": [["h", "e", {"e": 3}], ["h", "f", {"f": -2}], ["e", "f", {"h": 1}]],
}


@pytest.fixture
def write_doc(tmp_path):
    def write(doc, name="doc.json"):
        path = tmp_path / name
        path.write_text(doc if isinstance(doc, str) else json.dumps(doc))
        return str(path)
    return write


def run_structured(capsys, *argv):
    code = main(["--format", "structured", *argv])
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_check_sl2_passes(write_doc, capsys):
    code = main(["check", "--input", write_doc({"kind": "lie_algebra", "example": "sl2"})])
    out = capsys.readouterr().out
    assert code == 0
    assert "[ok  ] jacobi" in out


def test_check_broken_jacobi_fails(write_doc, capsys):
    code, report = run_structured(capsys, "check", "--input", write_doc(SL2_BROKEN))
    assert code == 1
    assert not report["ok"]
    verdicts = {v["name"]: v for v in report["verdicts"]}
    assert verdicts["jacobi"]["kind"] == "jacobi"
    assert not verdicts["q_squared"]["ok"]


def test_check_crossed_module_flip_is_a_failing_report(write_doc, capsys):
    doc = {"kind": "crossed_module", "example": "adjoint", "lie": {"example": "heisenberg"}, "sign_flip": ["e1", "e2"]}
    code, report = run_structured(capsys, "check", "--input", write_doc(doc))
    assert code == 1
    assert report["verdicts"][0]["kind"] == "equivariance"


@pytest.mark.parametrize("doc", [
    {"kind": "lie_algebra"},
    {"kind": "manifold"},
    '{"kind": "young", "rows": [2, 1}',
])
def test_unusable_input_exits_2(write_doc, capsys, doc):
    assert main(["check", "--input", write_doc(doc)]) == 2
    assert capsys.readouterr().err.startswith("error:")


def test_build_rejects_wrong_construction(write_doc, capsys):
    assert main(["build", "--input", write_doc({"kind": "young", "rows": [2]}), "--construction", "ce"]) == 2


def test_build_ce_is_deterministic(write_doc, capsys):
    path = write_doc({"kind": "lie_algebra", "example": "heisenberg"})
    code, report = run_structured(capsys, "build", "--input", path, "--construction", "ce")
    assert code == 0
    assert report["command"] == "build"
    assert report["construction"] == "ce"
    assert report["objects"]["q"]["e3"] == "-e1*e2"
    assert report["objects"]["degrees"] == {"e1": 1, "e2": 1, "e3": 1}

    main(["--format", "structured", "build", "--input", path, "--construction", "ce"])
    first = capsys.readouterr().out
    main(["--format", "structured", "build", "--input", path, "--construction", "ce"])
    assert capsys.readouterr().out == first


def test_build_nerve_one_jet(write_doc, capsys):
    path = write_doc({"kind": "group_law", "example": "heisenberg"})
    code, report = run_structured(capsys, "build", "--input", path, "--construction", "nerve_one_jet")
    assert code == 0
    assert [v["name"] for v in report["verdicts"]] == ["isomorphism", "q_squared"]


def test_build_app1(write_doc, capsys):
    path = write_doc({"kind": "fiber", "fiber_dim": 2})
    code, report = run_structured(capsys, "build", "--input", path, "--construction", "app1", "--degree", "1")
    assert code == 0
    assert report["objects"]["dim"] == 3


def test_enumerate_nerve_against_oracle(write_doc, capsys):
    doc = {"kind": "simplicial_set", "construction": "nerve", "group": {"cyclic": 3}, "m": 2}
    code, report = run_structured(capsys, "enumerate", "--input", write_doc(doc), "--params", "3")
    assert code == 0
    assert report["objects"]["count"] == 9
    assert report["objects"]["oracle_count"] == 9


def test_enumerate_without_oracle(write_doc, capsys):
    doc = {"kind": "simplicial_set", "construction": "nerve", "group": {"cyclic": 2}, "m": 2}
    code, report = run_structured(capsys, "enumerate", "--input", write_doc(doc), "--params", "2", "--no-oracle")
    assert code == 0
    assert "oracle_count" not in report["objects"]
    assert [v["name"] for v in report["verdicts"]] == ["surjective", "bijective"]


def test_enumerate_non_kan_target_fails(write_doc, capsys):
    doc = {"kind": "simplicial_set", "construction": "delta", "p": 1}
    code, report = run_structured(capsys, "enumerate", "--input", write_doc(doc), "--params", "2")
    assert code == 1
    assert report["verdicts"][0]["name"] == "kan"


def test_enumerate_needs_pointed_set(write_doc, capsys):
    doc = {"kind": "simplicial_set", "construction": "nerve", "group": {"cyclic": 2}}
    assert main(["enumerate", "--input", write_doc(doc)]) == 2


def test_schur_dim(capsys):
    code, report = run_structured(capsys, "schur", "dim", "--rows", "2,1", "--n", "3")
    assert code == 0
    assert report["objects"]["dim"] == 8


def test_schur_series_needs_two_columns(capsys):
    assert main(["schur", "series", "--rows", "3,1"]) == 2


def test_schur_dim_needs_diagram(capsys):
    assert main(["schur", "dim"]) == 2


def test_save_and_export(write_doc, history_file, capsys, tmp_path):
    path = write_doc({"kind": "young", "rows": [2, 2], "n": 2})
    assert main(["--save", "check", "--input", path]) == 0
    capsys.readouterr()

    assert main(["export", "--id", "1", "--to", "json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["command"] == "check"
    assert report["objects"]["dim"] == 1

    target = tmp_path / "verdicts.csv"
    assert main(["export", "--id", "1", "--to", "csv", "--output", str(target)]) == 0
    assert target.read_text().startswith("check,ok,kind,message,witness")

    assert main(["export", "--id", "7"]) == 2


def test_version(capsys):
    with pytest.raises(SystemExit) as info:
        main(["--version"])
    assert info.value.code == 0
    assert "superjets" in capsys.readouterr().out


@pytest.mark.parametrize("name, expected", [
    ("sl2.json", 0),
    ("sl2_broken.json", 1),
    ("heisenberg_law.json", 0),
    ("crossed_heisenberg.json", 0),
    ("cocycle_area.json", 0),
    ("nerve_z3.json", 0),
    ("young_22.json", 0),
    ("gerbe.json", 0),
    ("fiber.json", 0),
])
def test_check_bundled_documents(capsys, name, expected):
    assert main(["check", "--input", str(DATA_DIR / name)]) == expected


def test_enumerate_bundled_pointed_set(capsys):
    code, report = run_structured(capsys, "enumerate", "--input", str(DATA_DIR / "nerve_z3.json"))
    assert code == 0
    assert report["objects"]["pointed_set"] == ["*", "a", "b"]
    assert report["objects"]["count"] == report["objects"]["oracle_count"] == 9
