import io
import os
import json
import re
import subprocess
import sys

import pytest

from momentangle import cli
from momentangle.errors import InternalInconsistency, ParseError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv, "--output", "json")
    assert code == 0, err
    return json.loads(out)


def test_parse_examples(tmp_path):
    K = cli.parse_facets_text("1 2\n2 3\n3 1\n")
    assert K.m == 3 and K.facet_lists() == [[1, 2], [1, 3], [2, 3]]
    K = cli.parse_facets_text("m 4\n1 2\n2 3\n3 4\n1 4\n")
    assert K.m == 4 and K.f_vector() == [4, 4]
    with pytest.raises(ParseError) as exc:
        cli.parse_facets_text("1 2\nx 3\n")
    assert exc.value.line == 2
    f = tmp_path / "c.facets"
    f.write_text("# comment\n\n1 2  # edge\n2 3\n1 3\n")
    assert cli.parse_facets(f).f_vector() == [3, 3]


@pytest.mark.parametrize("text", ["", "m 3\nm 3\n1 2 3\n", "1 2\nm 2\n", "0 1\n", "m x\n1\n"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        cli.parse_facets_text(text)


def test_json_schema():
    rep = run_json("info", "c4")
    assert set(rep) == {"command", "complex", "field", "gates", "result"}
    assert set(rep["complex"]) == {"m", "dim", "f_vector"}
    assert set(rep["field"]) == {"p"}
    assert set(rep["gates"]) == {"homology_manifold", "orientable"}


def test_tightness_rp2():
    res = run_json("tightness", "rp2_6", "-p", "2")["result"]
    assert res["verdict"] == "TIGHT"
    assert res["bound"] == {"lhs": 34, "rhs": 34}
    code, out, _ = run("tightness", "rp2_6")
    assert "bound: 34 = 34" in out


def test_tightness_c4():
    res = run_json("tightness", "c4")["result"]
    assert res["verdict"] == "NOT_TIGHT"
    assert res["witnesses"][0]["J"] == [1, 3] and res["witnesses"][0]["q"] == 0


def test_duality_torus7():
    res = run_json("duality", "torus7")["result"]
    assert res["verdict"] == "EQUAL"
    nz = {(e["q"], e["l"]) for e in res["entries"] if e["lhs"]}
    assert nz == {(0, 1), (1, 3), (1, 5), (2, 7)}


def test_betti_subcomplex():
    res = run_json("betti", "c4", "--subcomplex", "1,3")["result"]
    assert res["betti"] == {"0": 2} and res["subcomplex"] == [1, 3]
    assert run("betti", "c4", "--subcomplex", "1,9")[0] == cli.EXIT_CONFIG


def test_exit_codes(tmp_path, monkeypatch):
    assert run("lemma", "c4")[0] == cli.EXIT_CONFIG
    assert run("info", "no_such_file.facets")[0] == cli.EXIT_CONFIG
    assert run("info", "c4", "-p", "4")[0] == cli.EXIT_CONFIG
    ghost = tmp_path / "g.facets"
    ghost.write_text("m 3\n1 2\n")
    assert run("info", str(ghost))[0] == cli.EXIT_CONFIG
    assert run("tightness", "rp2_6", "-p", "3", "--method", "lemma")[0] == cli.EXIT_GATE
    assert run("duality", "rp2_6", "-p", "3")[0] == cli.EXIT_GATE
    assert run("hochster", "torus9", "--m-cap", "8")[0] == cli.EXIT_CONFIG

    def broken(*a, **k):
        raise InternalInconsistency("forced")

    monkeypatch.setitem(cli.HANDLERS, "info", broken)
    assert run("info", "c4")[0] == cli.EXIT_INCONSISTENT


NUM = re.compile(r"-?\d+")


@pytest.mark.parametrize("cmd", cli.COMMANDS)
def test_table_and_json_agree(cmd):
    rep = run_json(cmd, "c4")
    code, table, _ = run(cmd, "c4")
    assert code == 0
    if cmd in ("hochster", "double"):
        key = "table" if cmd == "hochster" else "double_homology"
        rows = [tuple(int(x) for x in NUM.findall(line))
                for line in table.splitlines() if re.match(r"^\s+-?\d+\s+-?\d+\s+\(", line)]
        assert rows == [(e["k"], e["l"], *e["bidegree"], e["dim"]) for e in rep["result"][key]]
    if cmd == "hochster":
        assert f"beta(Z_K) = {rep['result']['beta_zk']}" in table
    if cmd == "duality":
        rows = [tuple(int(x) for x in NUM.findall(line)) for line in table.splitlines()
                if re.match(r"^\s+\d+\s+\d+\s+\d+\s+\d+\s+(yes|no)$", line)]
        assert rows == [(e["q"], e["l"], e["lhs"], e["rhs"]) for e in rep["result"]["entries"]]
    f = rep["complex"]["f_vector"]
    assert f"f-vector={tuple(f)}" in table


def test_console_entry():
    out = subprocess.run([sys.executable, "-m", "momentangle.cli", "hochster", "c3", "--output", "json"],
                         capture_output=True, text=True, check=True).stdout
    assert json.loads(out)["result"]["beta_zk"] == 2


@pytest.mark.parametrize("cmd", ["hochster", "tightness", "double"])
def test_numpy_backend_same_output(cmd):
    args = [sys.executable, "-m", "momentangle.cli", cmd, "rp2_6", "--output", "json"]
    env = dict(os.environ)
    fast = subprocess.run(args, capture_output=True, text=True, check=True, env=env).stdout
    env["MOMENTANGLE_NO_NUMBA"] = "1"
    slow = subprocess.run(args, capture_output=True, text=True, check=True, env=env).stdout
    assert fast == slow
