import io
import json

import pytest

from fqgraphs.cli import RunConfig, run


def invoke(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def test_spectrum_q3():
    code, out, _ = invoke("spectrum", "--p", "3", "--d", "2", "--check-oracle")
    assert code == 0
    rep = json.loads(out)
    assert [r["color"] for r in rep["records"]] == [[1], [2]]
    assert all(r["ramanujan_ok"] and r["oracle_ok"] for r in rep["records"])
    assert rep["records"][0]["eigenvalues"] == [4.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0]
    assert rep["config"]["p"] == 3


def test_count_edgeless(tmp_path):
    pat = tmp_path / "h.json"
    pat.write_text(json.dumps({"k": 2, "edges": []}))
    code, out, _ = invoke("count", "--p", "5", "--d", "2", "--pattern", str(pat),
                          "--subset-size", "9", "--seed", "3")
    assert code == 0
    rec = json.loads(out)["records"][0]
    assert rec["ordered_count"] == 9 * 8 and rec["subset_size"] == 9


def test_count_subset_file(tmp_path):
    pat = tmp_path / "h.json"
    pat.write_text(json.dumps({"k": 2, "edges": [[0, 1, [1]]]}))
    sub = tmp_path / "e.json"
    sub.write_text(json.dumps({"sample": {"size": 12, "seed": 1}}))
    code, out, _ = invoke("count", "--p", "5", "--d", "2", "--pattern", str(pat),
                          "--subset-file", str(sub))
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["subset_size"] == 12
    assert json.loads(out)["config"]["subset"] == {"sample": {"size": 12, "seed": 1}}
    sub.write_text(json.dumps([0, 1, 2, 5]))
    code, out, _ = invoke("count", "--p", "5", "--d", "2", "--pattern", str(pat),
                          "--subset-file", str(sub))
    assert json.loads(out)["records"][0]["subset_size"] == 4


def test_sphere_table():
    code, out, _ = invoke("sphere", "--p", "3", "--d", "2")
    recs = json.loads(out)["records"]
    assert code == 0
    assert [(r["t"], r["sphere_size"], r["pair_count"]) for r in recs] == [
        ([0], 1, 9), ([1], 4, 36), ([2], 4, 36)]


def test_certify_and_mixing():
    code, out, _ = invoke("certify", "--p", "3", "--d", "2")
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["rc_ok"] and rec["lambda_max"] == 2.0
    code, out, _ = invoke("mixing", "--p", "5", "--d", "2", "--samples", "50", "--seed", "1")
    assert code == 0
    assert all(r["violations"] == 0 for r in json.loads(out)["records"])
    code, out, _ = invoke("mixing", "--p", "5", "--d", "2", "--samples", "200", "--seed", "1",
                          "--lambda-scale", "0.1")
    assert code == 0  # violations are expected for a scaled-down lambda
    assert any(r["violations"] for r in json.loads(out)["records"])


def test_kaleido_grid_csv():
    code, out, _ = invoke("kaleido", "--q-grid", "5,7,9", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[0].startswith("q,d,vertex_count")


def test_kaleido_containment(tmp_path):
    pat = tmp_path / "h.json"
    pat.write_text(json.dumps({"k": 2, "edges": [[0, 1, 1]]}))
    code, out, _ = invoke("kaleido", "--q-grid", "7", "--pattern", str(pat))
    rep = json.loads(out)
    assert code == 0 and rep["records"][0]["containment"]["ok"] and rep["growth_ok"]


def test_fdist_expr_and_table(tmp_path):
    code, out, _ = invoke("fdist", "--p", "7", "--d", "2", "--expr", "cubes", "--j", "1")
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["directed"] and rec["j"] == [1]
    table = tmp_path / "t.json"
    table.write_text(json.dumps({"table": [2] * 25, "j": 2}))
    code, out, _ = invoke("fdist", "--p", "5", "--d", "2", "--table", str(table))
    rec = json.loads(out)["records"][0]
    assert code == 0 and rec["c1"] == 0.0 and rec["lambda_zero"] == 25.0


def test_extension_field_colors():
    code, out, _ = invoke("spectrum", "--p", "3", "--r", "2", "--modulus", "[1,0,1]",
                          "--d", "2", "--color", "[0,1]", "--color", "2")
    recs = json.loads(out)["records"]
    assert code == 0 and [r["color"] for r in recs] == [[0, 1], [2, 0]]


@pytest.mark.parametrize("argv", [
    ("spectrum", "--p", "2"),
    ("spectrum", "--p", "9"),
    ("spectrum", "--p", "5", "--r", "2", "--modulus", "[1,0,1]"),
    ("count", "--p", "5"),
    ("spectrum", "--p", "3", "--color", "0"),
    ("fdist", "--p", "3"),
])
def test_config_errors_exit_2(argv):
    code, out, err = invoke(*argv)
    assert code == 2 and out == ""
    assert "error" in json.loads(err)


def test_missing_file_exit_2():
    code, _, err = invoke("count", "--p", "5", "--pattern", "/nonexistent.json")
    assert code == 2 and json.loads(err)["error"] == "FileFormatError"


def test_run_config_roundtrip(tmp_path):
    cfg = RunConfig(p=3, r=2, modulus=[1, 0, 1], d=3, form={"dim": 3, "gram": [[1, 0, 0], [0, 1, 0], [0, 0, [0, 1]]]},
                    colors=[[1, 0], 2], seed=2**63 + 5, q_grid=[5, 7], pattern={"k": 2, "edges": [[0, 1, 1]]})
    text = cfg.to_json()
    assert RunConfig.from_json(text) == cfg
    assert RunConfig.from_json(text).to_json() == text
    code, out, _ = invoke("certify", "--p", "3", "--d", "2", "--dump-config")
    assert RunConfig.from_json(out).to_json() == out.strip()
    path = tmp_path / "cfg.json"
    path.write_text(out)
    code, out2, _ = invoke("certify", "--config", str(path))
    assert code == 0 and json.loads(out2)["records"][0]["rc_ok"]


def test_explicit_form_file(tmp_path):
    form = tmp_path / "q.json"
    form.write_text(json.dumps({"dim": 2, "gram": [[1, 0], [0, 2]]}))
    code, out, _ = invoke("spectrum", "--p", "5", "--d", "2", "--form", str(form))
    rep = json.loads(out)
    assert code == 0 and rep["config"]["form"]["gram"] == [[1, 0], [0, 2]]
    assert all(r["valency"] == 6 for r in rep["records"])
