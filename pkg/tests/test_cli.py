import json

import pytest

from bistable import biorder, games
from bistable.cli import run


def call(capsys, *argv):
    code = run(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_eval_top(capsys):
    code, out, _ = call(capsys, "eval", "--fuel", "1000", "top")
    assert code == 0 and "ConvergedTop" in out


def test_eval_json_and_trace(capsys):
    code, out, _ = call(capsys, "eval", "--format", "json", "--trace", "(pi 1 (tuple top bot))")
    data = json.loads(out)
    assert code == 0 and data["outcome"] == "ConvergedTop" and data["steps"] == len(data["trace"]) == 1


def test_eval_macro_and_divergence(capsys):
    code, out, _ = call(capsys, "eval", "--fuel", "50", "(Y (lam (x S) x))")
    assert code == 0 and "after 50 steps" in out
    code, out, _ = call(capsys, "eval", "((if0 (callcc (lam (k (-> nat S)) (k 0)))) (tuple top bot))")
    assert "ConvergedTop" in out


def test_hom_lists_three_functions(capsys):
    code, out, _ = call(capsys, "hom", "S", "S")
    assert code == 0 and out.strip().endswith("3 functions")
    code, out, _ = call(capsys, "hom", "--format", "json", "(* S S)", "S")
    assert json.loads(out)["count"] == 4


def test_verify_seq_lemma(capsys):
    code, out, _ = call(capsys, "verify", "seq-lemma", "--n", "3")
    assert code == 0 and "PASS" in out


def test_verify_json(capsys):
    code, out, _ = call(capsys, "verify", "hom-counts", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data[0]["passed"] and data[0]["name"] == "hom-counts"


def test_denote_both_dialects(capsys):
    code, out, _ = call(capsys, "denote", "(lam (x S) x)")
    assert code == 0 and ": (-> S S)" in out
    code, out, _ = call(capsys, "denote", "--format", "json", "--dialect", "spcf", "--cutoff", "4", "(succ 0)")
    data = json.loads(out)
    assert data["type"] == "nat" and data["element"] == "1"


def test_define_by_label_and_index(capsys):
    code, out, _ = call(capsys, "define", "(-> (* S S) S)", "[⊥,⊥,⊤,⊤]")
    assert code == 0 and out.startswith("(")
    code, out2, _ = call(capsys, "define", "(-> (* S S) S)", '{"index": 0}')
    assert code == 0
    code, out3, _ = call(capsys, "denote", "--format", "json", out.strip())
    assert json.loads(out3)["element"] == "[⊥,⊥,⊤,⊤]"


def test_define_rejects_unknown_element(capsys):
    code, _, err = call(capsys, "define", "(-> (* S S) S)", "[⊥,⊥,⊥,⊤]")
    assert code == 2 and err.startswith("error:")


def test_retract(capsys):
    code, out, _ = call(capsys, "retract", "--format", "json", "(-> (-> S S) S)")
    data = json.loads(out)
    assert code == 0 and set(data) == {"type", "target", "inj", "proj"}


def test_cps_diff(capsys):
    code, out, _ = call(capsys, "cps", "--diff", "((lam (x S) x) top)")
    assert code == 0 and "same" in out


def test_check_biorder(capsys, tmp_path):
    path = tmp_path / "sigma.json"
    path.write_text(json.dumps(biorder.sigma().to_json()))
    code, out, _ = call(capsys, "check-biorder", str(path))
    assert code == 0 and "valid" in out
    # two incomparable elements in one class have no class meet
    bad = json.dumps({"elements": ["a", "b"], "leq": [], "classes": [[0, 1]]})
    code, out, _ = call(capsys, "check-biorder", bad)
    assert code == 1 and out.strip()
    assert call(capsys, "check-biorder", '{"elements": 3}')[0] == 2


def test_game_round_trip(capsys):
    g = games.affine_arrow(games.o_game(), games.o_game())
    code, out, _ = call(capsys, "game", "--format", "json", g.dumps())
    data = json.loads(out)
    assert code == 0 and len(data["strategies"]) == 3
    B = biorder.FiniteBiorder.from_json(data["biorder"])
    assert biorder.validate(B) == []


def test_sequentialize_identity(capsys):
    o = games.o_game().to_json()
    fn = json.dumps({"src": o, "tgt": o, "table": [0, 1]})
    code, out, _ = call(capsys, "sequentialize", "--format", "json", fn)
    s = games.Strategy.from_json(json.loads(out))
    assert code == 0 and games.validate_strategy(s) == []
    assert s.plays == {(), ("r.o", "l.⟨o⟩")}  # copycat


def test_usage_errors_exit_2(capsys):
    assert call(capsys, "eval", "(unbalanced")[0] == 2
    assert call(capsys, "eval", "--fuel", "-1", "top")[0] == 2
    assert call(capsys, "denote", "--cutoff", "0", "top")[0] == 2
    assert call(capsys, "nosuchcommand")[0] == 2
    assert call(capsys, "game", "{not json")[0] == 2


def test_output_is_deterministic(capsys):
    first = call(capsys, "hom", "--format", "json", "(-> S S)", "S")[1]
    assert call(capsys, "hom", "--format", "json", "(-> S S)", "S")[1] == first
