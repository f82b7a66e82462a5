import json

import pytest

from app.main import run

C1_ARGS = ["--p", "5", "--f", "2", "--e", "1", "--n", "4,2", "--n2", "0,0"]
C2_ARGS = ["--p", "5", "--f", "1", "--e", "1", "--n", "2", "--n2", "0"]


def run_json(capsys, argv):
    status = run(argv)
    return status, json.loads(capsys.readouterr().out)


def test_weight_set_of_a_class(capsys):
    status, payload = run_json(capsys, ["weights", *C2_ARGS, "--class", "2:0"])
    assert status == 0
    assert payload["schema"] == "sw/1"
    assert payload["weight_set"] == ["1/0"]
    assert payload["w_exp_ss"] == ["1/0", "3/2"]


def test_index_set(capsys):
    status, payload = run_json(capsys, ["jah", *C1_ARGS, "--weight", "3,1/0,0"])
    assert status == 0
    assert payload["jah"] == [{"m": 14, "k": 0}, {"m": 22, "k": 0}]
    assert payload["ell"] == [1, 1]
    assert payload["jah_fast"] == payload["jah"]


def test_witness_set(capsys):
    status, payload = run_json(capsys, ["sset", *C1_ARGS, "--weight", "8,3/4,1"])
    assert status == 0
    assert payload["maximal"]["J"] == [0]
    assert payload["maximal"]["s"] == [5, 0]


def test_solve_congruence(capsys):
    status, payload = run_json(capsys, ["solve-congruence", "--p", "5", "--f", "2", "--J", "", "--c", "4,2"])
    assert status == 0
    assert payload["r"] == [5, 1]
    assert payload["solutions"] == [[5, 1]]
    assert payload["admissible_tau0"] == [0]


def test_solve_congruence_from_x(capsys):
    argv = ["solve-congruence", "--p", "5", "--f", "1", "--e", "2", "--n", "2",
            "--J", "0", "--x", "1"]
    status, payload = run_json(capsys, argv)
    assert status == 0
    assert payload["exceptional"] == "full"
    assert payload["solutions"] == [[1], [5]]


def test_packets(capsys):
    argv = ["packets", "--p", "5", "--f", "1", "--e", "1", "--n", "1",
            "--chi-cyclotomic", "--chi2-unramified", "--class", "tr"]
    status, payload = run_json(capsys, argv)
    assert status == 0
    assert payload["tres_ramifiee"] is True
    assert payload["weight_set"] == ["4/0"]
    assert {"w": [0], "weights": ["0/0", "4/0"]} in payload["packets"]


def test_verify_exit_status(capsys):
    argv = ["verify", "--suite", "gen-conj", "--primes", "5", "--max-f", "2",
            "--max-e", "2", "--max-ef", "2", "--deterministic"]
    assert run(argv) == 0
    assert json.loads(capsys.readouterr().out)["summary"]["violations"] == 0


def test_tsv_output(capsys):
    assert run(["weights", *C2_ARGS, "--format", "tsv"]) == 0
    assert "w_exp_ss\t1/0;3/2" in capsys.readouterr().out


def test_output_file(tmp_path):
    out = tmp_path / "weights.json"
    assert run(["weights", *C2_ARGS, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["command"] == "weights"


@pytest.mark.parametrize("argv, argument", [
    (["weights", "--p", "4", "--f", "1", "--e", "1", "--n", "2"], "p"),
    (["jah", *C1_ARGS, "--weight", "3,1"], "weight"),
    (["weights", *C2_ARGS, "--chi-trivial"], "flags"),
    (["weights", *C2_ARGS, "--class", "7:0"], "class"),
    (["weights", *C2_ARGS, "--class", "oops"], "class"),
    (["weights", *C2_ARGS, "--bogus"], "argv"),
    (["verify", "--suite", "", "--primes", "2"], "suites"),
    (["weights", "--p", "5", "--f", "1", "--e", "1", "--n", "a"], "n"),
])
def test_input_errors(capsys, argv, argument):
    assert run(argv) == 2
    assert f"{argument}:" in capsys.readouterr().err


def test_ambiguous_maximum_is_not_reported_as_bad_input(capsys):
    argv = ["jah", "--p", "5", "--f", "1", "--e", "2", "--n", "4", "--weight", "3/3"]
    assert run(argv) == 2
    err = capsys.readouterr().err
    assert err.startswith("sw: internal error: AmbiguityError:")
    assert "sw: error:" not in err


def test_sset_reports_ambiguous_candidates(capsys):
    argv = ["sset", "--p", "5", "--f", "1", "--e", "2", "--n", "4", "--weight", "3/3"]
    status, payload = run_json(capsys, argv)
    assert status == 0
    assert payload["maximal"] is None
    assert len(payload["ambiguous"]) == 2
