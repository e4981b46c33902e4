import json
from fractions import Fraction

import pytest

from threadskein import serialize
from threadskein.cli import run

F = Fraction


@pytest.fixture
def ta_file(tmp_path, T_A):
    path = tmp_path / "TA.json"
    path.write_text(serialize.dumps(serialize.thread_to_json(T_A)))
    return str(path)


def test_thread_dist(ta_file, capsys):
    assert run(["thread", "dist", "--thread", ta_file, "--x", "0/1", "--y", "1/1"]) == 0
    assert capsys.readouterr().out == "1/2\n"


def test_gap_point_is_an_error(ta_file, capsys):
    assert run(["thread", "dist", "--thread", ta_file, "--x", "9/16", "--y", "0"]) == 1
    assert "INVALID_POINT" in capsys.readouterr().err


def test_unknown_flag(capsys):
    assert run(["thread", "dist", "--bogus"]) == 2


def test_missing_subcommand():
    assert run([]) == 2


def test_cantor_build_matches_fixture(tmp_path, T_A):
    out = tmp_path / "t.json"
    assert run(["cantor", "build", "--gamma-rule", "half-bound", "--k", "3", "--width", "1/2", "--out", str(out)]) == 0
    assert serialize.thread_from_json(json.loads(out.read_text())) == T_A
    assert run(["cantor", "build", "--gamma", "1/8,1/16,1/32", "--k", "3", "--width", "1/2", "--out", str(out)]) == 0
    assert serialize.thread_from_json(json.loads(out.read_text())) == T_A


def test_lipmap_commands(tmp_path, capsys):
    t = {"length": "1/1", "width": "1/1", "gaps": []}
    path = tmp_path / "m.json"
    path.write_text(json.dumps({"domain": t, "codomain": t, "points": [["0", "0"], ["1/2", "1"], ["1", "1"]]}))
    assert run(["lipmap", "lipconst", "--map", str(path)]) == 0
    assert capsys.readouterr().out == "2/1\n"
    assert run(["lipmap", "criterion", "--map", str(path), "--K", "1"]) == 1
    assert json.loads(capsys.readouterr().out)["witness"] == ["0/1", "1/2"]


def test_gammastar_run_and_check(tmp_path, capsys):
    out = tmp_path / "run.json"
    args = ["gammastar", "run", "--rule", "half-bound", "--widths", "1/2,1/3,1/4", "--K", "2", "--eps", "1/4", "--k", "3"]
    assert run(args + ["--out", str(out)]) == 0
    data = json.loads(out.read_text())
    assert data["produced"][0] == "1/64"
    assert run(["gammastar", "check", "--run", str(out)]) == 0
    assert capsys.readouterr().out.strip() == "ACCEPT"


def test_gammastar_certify(ta_file, capsys):
    assert run(["gammastar", "certify", "--target", ta_file, "--budgets", "1/64", "--K", "2", "--m", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["outcome"] == "INFEASIBLE"


def test_skein_dist_default_space(capsys):
    assert run(["skein", "dist", "--p", "A", "--q", "(A,B)#1@1/16"]) == 0
    assert capsys.readouterr().out == "1/16\n"


def test_verify_single_suite(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["verify", "--suite", "cantor", "--seed", "7", "--out", str(a)]) == 0
    assert run(["verify", "--suite", "cantor", "--seed", "7", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text())["seed"] == 7


def test_verify_needs_selection():
    assert run(["verify", "--seed", "7"]) == 2


def test_emit(ta_file, tmp_path):
    svg, csv = tmp_path / "t.svg", tmp_path / "t.csv"
    assert run(["emit", "--input", ta_file, "--svg", str(svg)]) == 0
    assert svg.read_text().count('class="piece"') == 4
    assert run(["emit", "--input", ta_file, "--csv", str(csv)]) == 0
    assert csv.read_text().splitlines()[0].startswith(",0/1")
