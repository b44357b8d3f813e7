import json

import pytest

from lattice_voa.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out) if out.strip() else None


def _lattice(result):
    return [t["lattice"] for t in result["terms"]]


def test_mode_vacuum_axiom(capsys):
    code, data = run_json(capsys, "mode", "--rs", "A1", "--A", "e^1", "--n", "-1", "--v", "vac")
    assert code == 0 and _lattice(data["result"]) == [[1]]


def test_mode_exp_product(capsys):
    code, data = run_json(capsys, "mode", "--rs", "A1", "--A", "e^1", "--n", "-3/2", "--v", "e^1")
    assert code == 0 and _lattice(data["result"]) == [[2]]
    assert data["result"]["terms"][0]["creators"] == []


def test_mode_accepts_state_json(capsys):
    state = json.dumps({"terms": [{"lattice": [1], "creators": [], "coeff": ["1", "0"]}]})
    code, data = run_json(capsys, "mode", "--rs", "A1", "--A", state, "--n", "-1", "--v", "vac")
    assert code == 0 and _lattice(data["result"]) == [[1]]


def test_mode_text_output(capsys):
    code, out = run(capsys, "mode", "--rs", "A1", "--A", "e^1", "--n", "-1", "--v", "vac", "--text")
    assert code == 0 and "e^[1]" in out


def test_malformed_input_exits_2(capsys):
    assert run(capsys, "mode", "--rs", "A1", "--A", "{bad", "--n", "-1", "--v", "vac")[0] == 2
    assert run(capsys, "mode", "--rs", "A1", "--A", "e^1", "--n", "x", "--v", "vac")[0] == 2
    assert run(capsys, "mode", "--rs", "Z9", "--A", "e^1", "--n", "-1", "--v", "vac")[0] == 2
    assert run(capsys, "verify", "--rs", "A1", "--suite", "nonsense")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_precondition_violation_exits_3(capsys):
    assert run(capsys, "mode", "--rs", "A1", "--A", "e^1", "--n", "-1/3", "--v", "vac")[0] == 3
    assert run(capsys, "char", "--rs", "D4", "--lambda", "1,1,0,0", "--cutoff", "1")[0] == 3
    assert run(capsys, "span", "--rs", "A2", "--lambda", "1,-1")[0] == 3
    assert run(capsys, "relations", "--rs", "A2", "--i", "1", "--j", "2")[0] == 3


def test_char_examples(capsys):
    code, data = run_json(capsys, "char", "--rs", "A1", "--lambda", "2", "--cutoff", "2")
    assert code == 0 and data["graded_dims"] == [3, 4, 7]
    code, data = run_json(capsys, "char", "--rs", "A2", "--lambda", "1,1", "--cutoff", "0")
    assert code == 0 and data["graded_dims"] == [8]


def test_span(capsys):
    code, data = run_json(capsys, "span", "--rs", "A1", "--lambda", "2", "--cutoff", "3")
    assert code == 0 and data["quotient_dims"] == [3, 4, 7]


def test_mult(capsys):
    code, data = run_json(capsys, "mult", "--rs", "A1", "--factor", "e^1@0", "--factor", "e^1@0")
    assert code == 0 and data["lambda"] == [2]
    assert _lattice(data["reduced"]) == [[2]]
    code, a = run_json(capsys, "mult", "--rs", "A2", "--factor", "lift:1:0@1", "--factor", "lift:2:1@0")
    code2, b = run_json(capsys, "mult", "--rs", "A2", "--factor", "lift:2:1@0", "--factor", "lift:1:0@1")
    assert code == code2 == 0 and a["reduced"] == b["reduced"]
    assert run(capsys, "mult", "--rs", "A1", "--factor", "e^1@-1", "--factor", "e^1@0")[0] == 3


def test_relations_include_singlet(capsys):
    code, data = run_json(capsys, "relations", "--rs", "A2", "--i", "2", "--j", "1", "--cutoff", "1")
    assert code == 0 and len(data) == 1
    series = data[0]["series"]
    assert series["s"] == 1 and [c["q"] for c in series["coefficients"]] == [0, 1]
    assert len(data[0]["kernel"]) == 3


def test_tableaux(capsys):
    code, data = run_json(capsys, "tableaux", "--r", "13", "--i", "10", "--j", "6")
    assert code == 0
    assert [t["k"] for t in data["tableaux"]] == [0, 1, 2, 3, 4]
    assert data["tableaux"][3]["C"] == [1, 2, 3, 5, 6, 9, 10, 11, 12, 13]
    code, data = run_json(capsys, "tableaux", "--col1", "2,3", "--col2", "1,4")
    assert code == 0 and data["P"] == [1, 2, 3] and data["k"] == 1


def test_verify_characters_reports_quarter(capsys):
    code, data = run_json(capsys, "verify", "--rs", "A1", "--suite", "characters")
    assert code == 0 and data["passed"]
    names = {c["name"]: c for c in data["checks"]}
    assert "1/4" in names["fundamental-conformal-weight"]["anchor"]
    assert all(c["anchor"] for c in data["checks"])


def test_verify_relations_a2(capsys):
    code, data = run_json(capsys, "verify", "--rs", "A2", "--suite", "relations", "--cutoff", "3")
    assert code == 0 and all(c["passed"] for c in data["checks"])


def test_verify_voa_axioms_a1(capsys):
    code, data = run_json(capsys, "verify", "--rs", "A1", "--suite", "voa-axioms", "--cutoff", "4")
    assert code == 0 and data["passed"]


def test_verify_relations_outside_type_a(capsys):
    assert run(capsys, "verify", "--rs", "D4", "--suite", "relations")[0] == 3


@pytest.mark.parametrize("argv", [
    ("verify", "--rs", "A1", "--suite", "voa-axioms", "--cutoff", "3", "--seed", "5"),
    ("relations", "--rs", "A2", "--i", "1", "--j", "1"),
    ("span", "--rs", "A2", "--lambda", "1,1", "--cutoff", "2"),
])
def test_output_is_deterministic(capsys, argv):
    first = run(capsys, *argv)
    second = run(capsys, *argv)
    assert first == second and first[0] == 0
