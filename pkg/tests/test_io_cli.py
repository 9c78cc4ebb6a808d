import json
import subprocess
import sys

import pytest

from knotcone import cli, export, io
from knotcone.cone import build_cone
from knotcone.invariants import dual_class, local_class_Cn
from knotcone.staircase import mirror_staircase, staircase


def run(argv, capsys, stdin: str | None = None, monkeypatch=None):
    if stdin is not None:
        import io as _io
        monkeypatch.setattr(sys, "stdin", _io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


# ------------------------------------------------------------ serialization

@pytest.mark.parametrize("c", [local_class_Cn(3), dual_class(4), staircase(2).to_uv()])
def test_uv_round_trip(c):
    doc = io.complex_to_json(c)
    assert io.complex_from_json(json.loads(io.dumps(doc))) == c
    assert io.complex_to_json(io.complex_from_json(doc)) == doc


def test_filtered_round_trip():
    k = mirror_staircase(3)
    doc = io.filtered_to_json(k)
    assert io.filtered_to_json(io.filtered_from_json(doc)) == doc


def test_cone_round_trip():
    cone = build_cone(mirror_staircase(2), 3)
    doc = io.cone_to_json(cone, 2)
    back, n = io.cone_from_json(json.loads(io.dumps(doc)))
    assert n == 2 and back.p == 3 and back.a_range == cone.a_range
    assert io.cone_to_json(back, 2) == doc


def test_uv_parser_rejects_bad_documents():
    good = io.complex_to_json(local_class_Cn(2))
    for mutate in (
        lambda d: d.update(ring="Z[U]"),
        lambda d: d["differential"][0].update(u=-1),
        lambda d: d["differential"].append(dict(d["differential"][0])),
        lambda d: d["generators"].append(dict(d["generators"][0])),
        lambda d: d["differential"][0].update(to="ghost"),
    ):
        doc = json.loads(json.dumps(good))
        mutate(doc)
        with pytest.raises(ValueError):
            io.complex_from_json(doc)


def test_filtered_parser_rejects_bad_documents():
    good = io.filtered_to_json(staircase(1))
    doc = json.loads(json.dumps(good))
    doc["differential"][0]["to"] = "ghost"
    with pytest.raises(ValueError):
        io.filtered_from_json(doc)
    with pytest.raises(ValueError):
        io.cone_from_json(good)
    with pytest.raises(ValueError):
        io.parse_any({"ring": "?"})


# ----------------------------------------------------------------- export

def test_svg_of_dual_c3():
    svg = export.to_svg(dual_class(3))
    assert svg.startswith("<svg") and svg.count("<circle") == 13
    pos, _ = export.layout(dual_class(3))
    assert pos["alpha1*"] == (0.0, 10.0)
    assert pos["alpha3*"] == (3.0, 3.0)
    assert pos["alpha5*"] == (10.0, 0.0)


def test_svg_of_filtered_staircase_and_powers():
    svg = export.to_svg(staircase(2), powers=True)
    assert svg.count("<circle") == 7
    assert "U^" in export.to_svg(local_class_Cn(3), powers=True)


def test_dot_and_tsv():
    dot = export.to_dot(local_class_Cn(2))
    assert dot.startswith("digraph") and dot.count("->") == 4
    tsv = export.to_tsv(staircase(1))
    assert tsv.splitlines()[0] == "kind\tid\ti\tj\tmaslov"
    assert sum(1 for r in tsv.splitlines() if r.startswith("edge")) == 2


# -------------------------------------------------------------------- CLI

def test_build_staircase(capsys):
    code, out, _ = run(["build-staircase", "--n", "2"], capsys)
    assert code == 0
    assert len(io.filtered_from_json(json.loads(out))) == 7


def test_build_staircase_from_polynomial(capsys):
    code, out, _ = run(["build-staircase", "--poly", "1,-1,1"], capsys)
    assert code == 0 and len(json.loads(out)["generators"]) == 3
    code, _, err = run(["build-staircase", "--poly", "1,1,1"], capsys)
    assert code == 1 and json.loads(err)["error"] == "input"


@pytest.mark.parametrize("argv", [["build-staircase", "--n", "0"],
                                  ["build-cone", "--n", "2", "--p", "0"],
                                  ["obstruct", "--n", "1"]])
def test_invalid_arguments_exit_1(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1
    assert "message" in json.loads(err)


def test_non_json_input_exit_1(capsys, monkeypatch):
    code, _, err = run(["reduce"], capsys, "not json", monkeypatch)
    assert code == 1


def test_truncate_refuses_unreduced(capsys, monkeypatch):
    doc = io.dumps(io.cone_to_json(build_cone(mirror_staircase(2), 3), 2))
    code, _, _ = run(["truncate"], capsys, doc, monkeypatch)
    assert code == 1


def test_full_pipe_through_files(tmp_path, capsys):
    cone, red, loc = tmp_path / "cone.json", tmp_path / "red.json", tmp_path / "loc.json"
    log = tmp_path / "red.log"
    assert cli.main(["build-cone", "--n", "3", "--p", "5", "--out", str(cone)]) == 0
    assert cli.main(["reduce", "--in", str(cone), "--out", str(red), "--log", str(log)]) == 0
    assert cli.main(["truncate", "--in", str(red), "--to", "5", "--out", str(loc)]) == 0
    capsys.readouterr()
    assert cli.main(["invariants", "--in", str(loc)]) == 0
    inv = json.loads(capsys.readouterr().out)
    assert inv["tau"] == -10 and inv["d"] == 0
    assert {(r["i"], r["j"]): r["value"] for r in inv["phi"]} == {
        (1, 0): -1, (3, 0): -1, (3, 3): -1, (6, 3): -1, (6, 4): -1, (6, 5): -1}
    assert cli.main(["verify", "--in", str(cone), "--log", str(log), "--expect", str(red)]) == 0
    assert json.loads(capsys.readouterr().out)["matches"] is True


def test_verify_detects_mismatch(tmp_path, capsys):
    cone, red, log = tmp_path / "cone.json", tmp_path / "red.json", tmp_path / "red.log"
    cli.main(["build-cone", "--n", "2", "--p", "3", "--out", str(cone)])
    cli.main(["reduce", "--in", str(cone), "--out", str(red), "--log", str(log)])
    capsys.readouterr()
    assert cli.main(["verify", "--in", str(cone), "--log", str(log), "--expect", str(cone)]) == 1
    assert json.loads(capsys.readouterr().out)["matches"] is False
    log.write_text('{"step": "cancel", "source": "A0:a1", "target": "nowhere", "uPower": 0}\n')
    assert cli.main(["verify", "--in", str(cone), "--log", str(log)]) == 1


def test_invariants_tsv_of_uv_document(tmp_path, capsys):
    path = tmp_path / "c.json"
    path.write_text(io.dumps(io.complex_to_json(dual_class(3))))
    assert cli.main(["invariants", "--in", str(path), "--format", "tsv"]) == 0
    assert capsys.readouterr().out.splitlines()[0] == "tau\t10"


def test_obstruct_several_in_parallel(capsys):
    code, out, _ = run(["obstruct", "--n", "2", "3", "--jobs", "2"], capsys)
    assert code == 0
    assert [c["bound"] for c in json.loads(out)] == [1, 2]


def test_export_builtin_and_dual(capsys):
    code, out, _ = run(["export", "--builtin", "Cn*:3"], capsys)
    assert code == 0 and out.count("<circle") == 13
    code, out, _ = run(["export", "--builtin", "Cn:3", "--dual", "--format", "dot"], capsys)
    assert code == 0 and '"alpha3*"' in out
    code, _, _ = run(["export", "--builtin", "knot:3"], capsys)
    assert code == 1


def test_output_directory_from_environment(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path))
    assert cli.main(["build-staircase", "--n", "1", "--out", "k.json"]) == 0
    assert json.loads((tmp_path / "k.json").read_text())["ring"] == io.RING_INF


def test_stdin_stdout_pipe():
    py = [sys.executable, "-m", "knotcone.cli"]
    a = subprocess.run(py + ["build-cone", "--n", "2", "--p", "3"], capture_output=True, check=True)
    b = subprocess.run(py + ["reduce"], input=a.stdout, capture_output=True, check=True)
    c = subprocess.run(py + ["truncate"], input=b.stdout, capture_output=True, check=True)
    d = subprocess.run(py + ["invariants"], input=c.stdout, capture_output=True, check=True)
    assert json.loads(d.stdout)["tau"] == -3
