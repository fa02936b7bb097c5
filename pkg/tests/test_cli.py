import io
import json
import subprocess
import sys

import pytest

from lrq import errors
from lrq.classify import gl3_catalog
from lrq.cli import group_from_spec, run
from lrq.deform import rigidity_dim_ge_4
from lrq.exactmath import CycMatrix, matrix_to_json, root_of_unity


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err or out
    doc = json.loads(out)
    assert doc["schema"] == 1
    return doc


def fails(name, *argv):
    code, out, _ = call(*argv)
    assert code == 1
    doc = json.loads(out)
    assert doc["schema"] == 1 and doc["error"] == name and doc["detail"]
    return doc


def mat(rows):
    return matrix_to_json(CycMatrix.from_rows(rows))


def spec(*gens, **extra):
    return json.dumps({"generators": [mat(g) for g in gens], **extra})


# examples


def test_classify_sl2_p7():
    doc = ok("classify", "sl2", "--char", "7", "--max-length", "120", "--json")
    last = doc["entries"][-1]
    assert last["family"] == "BI" and last["length"] == 120
    assert len(doc["entries"]) == 120 + 29 + 3


def test_rigidity_example():
    doc = ok("rigidity", "--char", "7", "--type", "1/7(1,2,4)")
    assert doc["rigid"] is False
    assert doc["defSpace"] == "W(k)[eps]/(eps^2, 7*eps)"


def test_toric_example():
    doc = ok("toric", "--n", "5", "--q", "1,4")
    assert doc["hj"] == [2, 2, 2, 2] and doc["e_hk"] == "9/5" and doc["class_group"] == [5]


def test_rigidity_rigid_and_high_dimension():
    assert ok("rigidity", "--char", "2", "--type", "1/7(1,2,4)")["rigid"] is True
    assert ok("rigidity", "--char", "5", "--type", "1/5(1,1,1,2)")["rigid"] is True


def test_rigidity_metacyclic_reports_both_choices():
    doc = ok("rigidity", "--char", "7", "--metacyclic", "7,2,1,2")
    assert doc["rigid"] is None and doc["choiceDependent"] is True
    assert doc["answers"]["2"]["rigid"] is False and doc["answers"]["4"]["rigid"] is True
    assert ok("rigidity", "--char", "7", "--metacyclic", "7,2,1,2", "--cube-root", "2")["rigid"] is False


def test_text_mode():
    code, out, _ = call("toric", "--n", "5", "--q", "1,4", "--text")
    assert code == 0 and "e_hk: \"9/5\"" in out and "schema" not in out


def test_lambda_and_characters():
    z = root_of_unity(5, 1)
    doc = ok("lambda", "--spec", spec([[z, 0], [0, z ** 2]]), "--characters")
    assert doc["lambda"] == doc["lambda_traces"] == 0 and doc["very_small"] is True
    assert doc["det_character"]["trivial"] is False


def test_lambda_reads_file(tmp_path):
    f = tmp_path / "g.json"
    f.write_text(json.dumps({"family": "BT"}))
    doc = ok("lambda", "--spec", f"@{f}", "--char", "5")
    assert doc["length"] == 24 and doc["gorenstein"] is True


def test_invariants_family():
    doc = ok("invariants", "--family", "BD", "--params", "n=3", "--char", "5")
    assert doc["f_signature"] == "1/12"
    doc = ok("invariants", "--family", "MuNQ", "--params", "n=5,q=4", "--hilbert-kunz")
    assert doc["e_hk"] == "9/5"


def test_deform_rdp_and_dominance():
    doc = ok("deform-rdp", "--gamma", "D4")
    assert doc["monotone"] is True and "4A1" in doc["specializations"]
    doc = ok("hj-dominate", "--a", "3,2,3", "--aprime", "2,2,2")
    assert doc["dominates"] is True


def test_rdp():
    doc = ok("rdp", "--type", "E8", "--char", "7")
    assert doc["f_regular"] is True and doc["length"] == 120


# determinism and round trip


@pytest.mark.parametrize("argv", [
    ("classify", "gl2", "--char", "5", "--max-length", "40"),
    ("classify", "gl3", "--char", "7", "--max-length", "21"),
    ("deform-rdp", "--gamma", "E7"),
    ("invariants", "--family", "BO", "--char", "5"),
])
def test_byte_identical(argv):
    assert call(*argv)[1] == call(*argv)[1]


@pytest.mark.parametrize("group,p,L", [("sl2", 5, 48), ("gl2", 3, 36), ("gl3", 7, 21), ("sl3", 0, 20)])
def test_classify_round_trip(group, p, L):
    doc = ok("classify", group, "--char", str(p), "--max-length", str(L))
    for e in doc["entries"]:
        G = group_from_spec({"generators": e["generators"], "dimension": int(group[-1])})
        assert G.order == e["length"]


def test_metacyclic_entry_round_trip():
    (e,) = [e for e in gl3_catalog(7, 7, 63) if e.family == "Metacyclic3"]
    doc = json.loads(json.dumps(e.to_json()))
    assert group_from_spec({"generators": doc["generators"]}).order == doc["length"] == 63


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "lrq", "toric", "--n", "3", "--q", "1,2"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["e_hk"] == "5/3"


# exit codes


@pytest.mark.parametrize("argv", [
    (),
    ("nope",),
    ("toric", "--n", "5"),
    ("toric", "--n", "5", "--q", "1,4", "--bogus"),
    ("toric", "--n", "5", "--q", "1,x"),
    ("rigidity", "--char", "7"),
    ("lambda", "--spec", "{not json"),
    ("classify", "sl2", "--char", "7", "--max-length", "0"),
    ("toric", "--n", "5", "--q", "1,4", "--json", "--text"),
])
def test_usage_errors(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and err


# every domain error is reachable and named uniquely

ROUTES = {
    "BadInput": ("toric", "--n", "6", "--q", "1,2"),
    "NotDivisible": ("lambda", "--spec", json.dumps({"generators": [
        {"conductor": 3, "entries": [[{"conductor": 4, "terms": [[1, "1"]]}]]}]})),
    "ConductorTooLarge": ("lambda", "--spec", json.dumps({"generators": [
        {"entries": [[{"conductor": 5000, "terms": [[1, "1"]]}]]}]})),
    "DimensionMismatch": ("lambda", "--spec", json.dumps({"generators": [
        {"rows": 2, "cols": 2, "entries": [["1"]]}]})),
    "NotInvertible": ("lambda", "--spec", spec([[1, 0], [0, 0]])),
    "NotAHomomorphism": ("lambda", "--spec", json.dumps({
        "scheme": {"char": 0, "group": {"family": "Mu", "params": {"n": 4}}},
        "images": [mat([[root_of_unity(3, 1)]])]})),
    "NotLinearlyReductive": ("invariants", "--family", "BD", "--params", "n=3", "--char", "2"),
    "ConnectedPartNotCyclic": ("lambda", "--char", "2", "--characters", "--spec",
                               spec([[-1, 0, 0], [0, -1, 0], [0, 0, 1]], [[1, 0, 0], [0, -1, 0], [0, 0, -1]])),
    "NotVerySmall": ("invariants", "--spec", spec([[1, 0], [0, -1]])),
    "NotImplementedForNonAbelian": ("invariants", "--family", "BT", "--char", "5", "--hilbert-kunz"),
    "Unrealizable": ("rdp", "--type", "E8", "--char", "5"),
    "BadDimension": ("rigidity", "--char", "7", "--type", "1/5(1,2)"),
    "BadSequence": ("hj-dominate", "--a", "1,2", "--aprime", "2"),
}


@pytest.mark.parametrize("name", sorted(ROUTES))
def test_error_routes(name):
    fails(name, *ROUTES[name])


def test_cap_exceeded(monkeypatch):
    monkeypatch.setenv("LRQ_CAP", "10")
    fails("CapExceeded", "lambda", "--spec", spec([[root_of_unity(12, 1), 0], [0, root_of_unity(12, 11)]]))


def test_missing_identification_in_text_mode():
    code, out, err = call("rigidity", "--char", "7", "--metacyclic", "7,2,1,2", "--text")
    assert code == 1 and out == "" and err.startswith("error: MissingIdentification:")


def test_error_enumeration_is_covered():
    names = [cls.__name__ for cls in errors.all_error_types()]
    assert len(names) == len(set(names))
    covered = set(ROUTES) | {"CapExceeded", "MissingIdentification"}
    assert set(names) == covered
    # the library route for the dimension error agrees with the CLI
    with pytest.raises(errors.BadDimension):
        rigidity_dim_ge_4(2)
