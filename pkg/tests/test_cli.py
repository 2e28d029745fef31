"""End-to-end CLI behavior: JSON schemas, exit codes, determinism."""

import json

from weylcheb.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# --- roots -----------------------------------------------------------------------

def test_roots_a2(capsys):
    code, out, _ = run_cli(capsys, "roots", "A2")
    payload = json.loads(out)
    assert code == 0 and payload["pass"]
    assert len(payload["roots"]) == 6
    assert payload["cartan"] == [[2, -1], [-1, 2]]


def test_roots_bad_spec(capsys):
    code, _, err = run_cli(capsys, "roots", "Z9")
    assert code == 2
    assert "Z9" in err


def test_roots_reducible_block_cartan(capsys):
    code, out, _ = run_cli(capsys, "roots", "A1xA1")
    payload = json.loads(out)
    assert code == 0
    assert payload["cartan"] == [[2, 0], [0, 2]]


def test_roots_gram_is_rational_strings(capsys):
    _, out, _ = run_cli(capsys, "roots", "G2")
    payload = json.loads(out)
    assert payload["gram"][1][1] == "2/3"


# --- weyl ------------------------------------------------------------------------

def test_weyl_order(capsys):
    code, out, _ = run_cli(capsys, "weyl", "B2")
    assert code == 0
    assert json.loads(out)["order"] == 8


def test_weyl_refuses_large_groups_by_default(capsys):
    code, _, err = run_cli(capsys, "weyl", "E6")
    assert code == 2
    assert "51840" in err and "cap" in err


# --- chebmap ----------------------------------------------------------------------

def test_chebmap_a2_exact_output(capsys):
    code, out, _ = run_cli(capsys, "chebmap", "A2", "2", "--samples", "20")
    payload = json.loads(out)
    assert code == 0
    assert payload["components"][0] == [
        {"exponents": [2, 0], "coeff": 1},
        {"exponents": [0, 1], "coeff": -2},
    ]
    assert payload["components"][1] == [
        {"exponents": [0, 2], "coeff": 1},
        {"exponents": [1, 0], "coeff": -2},
    ]
    assert payload["verification"]["max_residual"] < 1e-8


def test_chebmap_degree_five(capsys):
    code, out, _ = run_cli(capsys, "chebmap", "A1", "5", "--samples", "20")
    payload = json.loads(out)
    assert code == 0
    # 2 cos(5 theta) in 2 cos(theta): X^5 - 5 X^3 + 5 X
    assert payload["components"][0] == [
        {"exponents": [5], "coeff": 1},
        {"exponents": [3], "coeff": -5},
        {"exponents": [1], "coeff": 5},
    ]
    assert payload["verification"]["max_residual"] < 1e-8


def test_chebmap_g2_integer_coefficients(capsys):
    code, out, _ = run_cli(capsys, "chebmap", "G2", "2", "--samples", "20")
    payload = json.loads(out)
    assert code == 0
    for comp in payload["components"]:
        for term in comp:
            assert isinstance(term["coeff"], int)
    assert payload["verification"]["max_residual"] < 1e-8


# --- verification commands -----------------------------------------------------------

def test_verify_functional(capsys):
    code, out, _ = run_cli(capsys, "verify-functional", "B2", "2",
                           "--samples", "20")
    assert code == 0
    assert json.loads(out)["pass"]


def test_verify_postcritical_a2(capsys):
    code, out, _ = run_cli(capsys, "verify-postcritical", "A2", "2",
                           "--samples", "25")
    payload = json.loads(out)
    assert code == 0
    assert payload["pass"] and payload["deltoid_pass"]
    assert payload["diagram_invariance"]["pass"]


# --- img-verify ------------------------------------------------------------------------

def test_img_verify_a1(capsys):
    code, out, _ = run_cli(capsys, "img-verify", "A1", "2", "3")
    payload = json.loads(out)
    assert code == 0 and payload["pass"]
    orders = {o["level"]: o["numeric"] for o in payload["group_orders"]}
    assert orders == {1: 2, 2: 8, 3: 16}


def test_img_verify_a2(capsys):
    code, out, _ = run_cli(capsys, "img-verify", "A2", "2", "2")
    payload = json.loads(out)
    assert code == 0 and payload["pass"]
    assert len(payload["generators"][0]["levels"][1]["numeric_perm"]) == 16


def test_img_verify_refuses_oversized(capsys):
    code, _, err = run_cli(capsys, "img-verify", "B3", "3", "3")
    assert code == 2
    assert "cap" in err


# --- act and automaton --------------------------------------------------------------------

def test_act_odometer(capsys):
    code, out, _ = run_cli(capsys, "act", "A1", "2", "t", "111")
    assert code == 0 and out.strip() == "000"


def test_act_identity(capsys):
    code, out, _ = run_cli(capsys, "act", "A2", "2", "id", "0101")
    assert code == 0 and out.strip() == "0101"


def test_act_generator_word(capsys):
    code, out, _ = run_cli(capsys, "act", "A1", "2", "s1*a0", "000")
    assert code == 0
    # s1 a0 is translation by -1: 000 encodes 0, image is 7 = 111
    assert out.strip() == "111"


def test_act_rejects_bad_word(capsys):
    code, _, err = run_cli(capsys, "act", "A1", "2", "q7", "000")
    assert code == 2 and "q7" in err


def test_automaton_json(capsys):
    code, out, _ = run_cli(capsys, "automaton", "A1", "2")
    payload = json.loads(out)
    assert code == 0
    assert payload["alphabet_size"] == 2
    assert 3 <= len(payload["states"]) <= 4


def test_automaton_deterministic(capsys):
    _, out1, _ = run_cli(capsys, "automaton", "A2", "2")
    _, out2, _ = run_cli(capsys, "automaton", "A2", "2")
    assert out1 == out2


def test_out_flag_writes_file(tmp_path, capsys):
    target = tmp_path / "roots.json"
    code, out, _ = run_cli(capsys, "roots", "A1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["rank"] == 1
