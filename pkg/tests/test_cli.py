import json
import subprocess
import sys
from pathlib import Path

import pytest

from pointlike.cli import main
from pointlike.exponents import Pi
from pointlike.io import (
    RunReport,
    certificate_terms,
    dfa_from_dict,
    dfa_to_dict,
    semigroup_from_dict,
    semigroup_to_dict,
)
from pointlike.semigroup import Presentation, brandt_b2
from pointlike.terms import eval_term

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, (json.loads(out) if out.strip() else None), err


def test_pointlikes_z2(capsys):
    code, rep, _ = run(capsys, "pointlikes", DATA / "z2.json", "--pi", "empty")
    assert code == 0
    fam = rep["results"]["family"]
    assert [m["subset"] for m in fam] == [[0], [1], [0, 1]]
    assert [m["maximal"] for m in fam] == [False, False, True]
    assert fam[2]["derivation"] == {"rule": "omega-star", "base": [1], "k": 2}


def test_pointlikes_aperiodic_and_z3(capsys):
    _, rep, _ = run(capsys, "pointlikes", DATA / "b2.json")
    assert all(len(m["subset"]) == 1 for m in rep["results"]["family"])
    _, rep, _ = run(capsys, "pointlikes", DATA / "z3.json", "--pi", "2")
    assert rep["results"]["size"] == 7
    _, rep, _ = run(capsys, "pointlikes", DATA / "z3.json", "--pi-complement", "2")
    assert rep["results"]["size"] == 3


def test_idempotent_pointlikes(capsys):
    code, rep, _ = run(capsys, "idempotent-pointlikes", DATA / "z2.json")
    assert code == 0
    assert rep["results"]["idempotent_pointlikes"] == [[0], [1], [0, 1]]


def test_witness_certificate(capsys):
    code, rep, _ = run(capsys, "witness", DATA / "z2.json", "--subset", "0,1")
    assert code == 0 and rep["ok"] and rep["verification"]["passed"]
    cert = rep["results"]
    assert cert["subset"] == [0, 1] and cert["idempotent_projection"]
    P = Presentation(*_z2())
    for p, t in certificate_terms(cert).items():
        assert eval_term(P, t, Pi.empty()) == p


def _z2():
    from pointlike.semigroup import cyclic_group

    return cyclic_group(2), ("a",), {"a": 1}


def test_witness_not_in_family(capsys):
    code, rep, err = run(capsys, "witness", DATA / "b2.json", "--subset", "0,1")
    assert code == 3 and rep is None and "not a pointlike" in err


def test_reduce_da(capsys, tmp_path):
    code, rep, _ = run(capsys, "reduce-da", DATA / "b2.json", DATA / "da_pair.txt")
    assert code == 0
    assert rep["verification"]["phi_ok"] and rep["verification"]["omega_only"]
    assert rep["verification"]["corpus_counterexample"] is None
    code, rep, _ = run(capsys, "reduce-da", DATA / "b2.json", DATA / "da_pair.txt", "--idempotent")
    assert code == 0 and rep["verification"]["idempotent_checked"]


def test_reduce_exit_codes(capsys, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("(* a b)\n(* b a)\n")
    code, _, err = run(capsys, "reduce-da", DATA / "b2.json", bad)
    assert code == 4 and "counterexample" in err
    slow = tmp_path / "slow.txt"
    slow.write_text("(* a a b (pow (* a b) w) b b)\n")
    code, _, _ = run(capsys, "reduce-da", DATA / "b2.json", slow, "--cap", "1")
    assert code == 5


def test_membership_syntactic_eval(capsys):
    _, rep, _ = run(capsys, "membership", DATA / "b2.json", "DA")
    assert rep["results"]["member"] is False
    _, rep, _ = run(capsys, "syntactic", DATA / "ab_star.json")
    assert rep["results"]["semigroup"]["order"] == 5
    assert rep["results"]["isomorphic_to_B2"]
    assert rep["results"]["membership"] == {"A": True, "DA": False, "DO": False}
    _, rep, _ = run(capsys, "eval-term", DATA / "b2.json", "(pow (* a b) w)")
    assert rep["results"]["value"] == 2  # the element ab


def test_format_errors(capsys, tmp_path):
    assert run(capsys, "pointlikes", tmp_path / "missing.json")[0] == 2
    broken = tmp_path / "broken.json"
    broken.write_text("{not json")
    assert run(capsys, "pointlikes", broken)[0] == 2
    nonassoc = tmp_path / "nonassoc.json"
    nonassoc.write_text(json.dumps({"order": 2, "table": [[1, 0], [0, 0]]}))
    assert run(capsys, "pointlikes", nonassoc)[0] == 2
    assert run(capsys, "eval-term", DATA / "b2.json", "(pow a 1)")[0] == 2
    assert run(capsys, "eval-term", DATA / "b2.json", "z")[0] == 2
    assert run(capsys, "pointlikes", DATA / "z2.json", "--pi", "4")[0] == 2
    incomplete = tmp_path / "dfa.json"
    incomplete.write_text(json.dumps({"states": 2, "initial": 0, "alphabet": ["a"], "delta": {"a": [0]}}))
    assert run(capsys, "syntactic", incomplete)[0] == 2


def test_deterministic_output():
    cmd = [sys.executable, "-m", "pointlike.cli", "witness", str(DATA / "z2.json"), "--subset", "0,1"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first


def test_timing_is_opt_in(capsys):
    _, rep, _ = run(capsys, "--timing", "membership", DATA / "b2.json", "A")
    assert rep["timing"]["seconds"] >= 0
    _, rep, _ = run(capsys, "membership", DATA / "b2.json", "A")
    assert "timing" not in rep


def test_run_report_round_trip():
    rep = RunReport(["pointlikes", "x.json"], {"semigroup": "00"}, {"size": 3}, {"passed": True}, True, {"seconds": 0.5})
    assert RunReport.from_json(rep.to_json()) == rep
    rep.timing = None
    assert RunReport.from_json(rep.to_json()) == rep


def test_file_format_round_trips():
    P = Presentation(brandt_b2(), ("a", "b"), {"a": 0, "b": 1})
    assert semigroup_from_dict(semigroup_to_dict(P)) == P
    d = json.loads((DATA / "ab_star.json").read_text())
    assert dfa_to_dict(dfa_from_dict(d)) == d


def test_semigroup_without_letters_gets_generators():
    P = semigroup_from_dict({"order": 2, "table": [[0, 1], [1, 0]]})
    assert P.alphabet == ("a",) and P.letter_map == {"a": 1}
