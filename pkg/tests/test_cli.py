"""Command-line interface: exit codes, output formats, subcommands."""

import io
import json

import pytest

from padicsat.cli import main
from padicsat.parser import parse_instance
from padicsat.testkit import verify_witness

SAT_GEQ = "vars x y\neq 1 x + 1 y = 3\nval 3 : v(x) >= 0\nval 3 : v(y) >= 0\n"
UNSAT_PINNED = "vars x y\neq 1 x + 1 y = 2\nval 2 : v(x) == 1\nval 2 : v(y) == 1\n"
MIXED_OPEN = (
    "vars x y z\neq 1 x + 1 y + 1 z = 0\nval 3 : v(x) <= 5\nval 3 : v(y) >= 0\n"
)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def test_solve_exit_codes(tmp_path, capsys):
    assert main(["solve", write(tmp_path, "sat.txt", SAT_GEQ)]) == 0
    assert "sat" in capsys.readouterr().out.splitlines()[0]

    assert main(["solve", write(tmp_path, "unsat.txt", UNSAT_PINNED)]) == 1
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "unsat"

    assert main(["solve", write(tmp_path, "open.txt", MIXED_OPEN)]) == 2
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "unknown"


def test_solve_window_resolves_unknown(tmp_path, capsys):
    path = write(tmp_path, "open.txt", MIXED_OPEN)
    code = main(["solve", path, "--window", "-10", "--witness"])
    out = capsys.readouterr().out
    assert code == 0, out
    assert out.splitlines()[0] == "sat"


def test_solve_reads_stdin(monkeypatch, capsys):
    monkeypatch.setattr("sys.stdin", io.StringIO(SAT_GEQ))
    assert main(["solve"]) == 0
    assert "sat" in capsys.readouterr().out


def test_solve_json_witness_schema(tmp_path, capsys):
    path = write(tmp_path, "sat.txt", SAT_GEQ)
    assert main(["solve", path, "--json", "--witness"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "sat"
    assert payload["fragment"] == "3:GEQ"
    assert set(payload["witness"]) == {"x", "y"}
    for entry in payload["witness"].values():
        assert entry["p"] in (0, 3)
        for coeff, exp in entry["terms"]:
            assert isinstance(coeff, str) and isinstance(exp, int)
    assert payload["stats"]["size"] > 0
    assert payload["stats"]["time_ms"] >= 0

    # the JSON witness round-trips through the checker
    witness_path = tmp_path / "witness.json"
    witness_path.write_text(json.dumps(payload["witness"]))
    assert main(["check", path, str(witness_path)]) == 0
    assert capsys.readouterr().out.strip() == "valid"


def test_solve_json_rational_witness(tmp_path, capsys):
    path = write(tmp_path, "plain.txt", "vars x y\neq 1 x + 1 y = 5/2\n")
    assert main(["solve", path, "--json", "--witness"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "sat"
    assert payload["fragment"] == "NONE"
    for entry in payload["witness"].values():
        assert entry["p"] == 0
        assert entry["terms"][0][1] == 0
        assert "value" in entry


def test_solve_guard_controls_value_field(tmp_path, capsys):
    path = write(tmp_path, "deep.txt", "vars x\nval 3 : v(x) >= 40\n")
    assert main(["solve", path, "--json", "--witness"]) == 0
    with_value = json.loads(capsys.readouterr().out)
    assert main(["solve", path, "--json", "--witness", "--guard", "5"]) == 0
    without_value = json.loads(capsys.readouterr().out)
    entry = with_value["witness"]["x"]
    assert "value" in entry and entry["value"] != "0"
    assert "value" not in without_value["witness"]["x"]


def test_check_rejects_bad_witness(tmp_path, capsys):
    path = write(tmp_path, "sat.txt", SAT_GEQ)
    witness_path = tmp_path / "bad.json"
    witness_path.write_text(json.dumps({"x": "1/3", "y": "8/3"}))
    assert main(["check", path, str(witness_path)]) == 1
    assert "invalid" in capsys.readouterr().out

    witness_path.write_text("not json")
    assert main(["check", path, str(witness_path)]) == 3
    assert "error" in capsys.readouterr().err


def test_classify_output(tmp_path, capsys):
    path = write(
        tmp_path,
        "mixed.txt",
        "vars x y\nval 2 : v(x) >= 0\nval 3 : v(y) <= 1\nval 3 : v(y) >= 0\n"
        "ord 1 x < 1\n",
    )
    assert main(["classify", path]) == 0
    out = capsys.readouterr().out
    assert out.splitlines()[0] == "2:GEQ,3:HARD,ord"
    assert "p = 2: GEQ (in P)" in out
    assert "p = 3: HARD (NP-complete fragment)" in out
    assert "order constraints" in out


def test_gen_output_parses_and_is_deterministic(capsys):
    assert main(["gen", "--seed", "7", "--vars", "3", "--eqs", "2", "--orders", "1"]) == 0
    first = capsys.readouterr().out
    inst = parse_instance(first)
    assert len(inst.variables) == 3
    assert len(inst.equations) == 2
    assert len(inst.orders) == 1
    assert main(["gen", "--seed", "7", "--vars", "3", "--eqs", "2", "--orders", "1"]) == 0
    assert capsys.readouterr().out == first


def test_oracle_agrees_with_solver(tmp_path, capsys):
    for seed in range(12):
        p = main(["gen", "--seed", str(seed), "--fragment", "geq", "--primes", "3"])
        assert p == 0
        text = capsys.readouterr().out
        path = write(tmp_path, f"g{seed}.txt", text)
        solver_code = main(["solve", path])
        capsys.readouterr()
        oracle_code = main(["oracle", path])
        capsys.readouterr()
        assert solver_code in (0, 1)
        assert oracle_code == solver_code, text


def test_oracle_rejects_other_fragments(tmp_path, capsys):
    path = write(tmp_path, "leq.txt", "vars x\nval 3 : v(x) <= 1\n")
    assert main(["oracle", path]) == 3
    assert "lower-bound" in capsys.readouterr().err


def test_bench_smoke(capsys):
    assert main(["bench", "--sizes", "2,3"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 3  # header plus one row per size
    assert out[1].strip().startswith("2")


def test_usage_errors(tmp_path, capsys):
    assert main([]) == 3
    capsys.readouterr()
    assert main(["frobnicate"]) == 3
    capsys.readouterr()
    assert main(["solve", "--no-such-flag"]) == 3
    capsys.readouterr()
    assert main(["solve", str(tmp_path / "missing.txt")]) == 3
    assert "cannot read" in capsys.readouterr().err
    assert main(["-h"]) == 0
    assert "solve" in capsys.readouterr().out


def test_parse_error_reports_position(tmp_path, capsys):
    path = write(tmp_path, "broken.txt", "vars x\neq 1 q = 0\n")
    assert main(["solve", path]) == 3
    err = capsys.readouterr().err
    assert "parse error" in err
    assert "line 2" in err


def test_guard_env_variable(tmp_path, capsys, monkeypatch):
    path = write(tmp_path, "deep.txt", "vars x\nval 3 : v(x) >= 40\n")
    monkeypatch.setenv("PADIC_GUARD", "5")
    assert main(["solve", path, "--json", "--witness"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert "value" not in payload["witness"]["x"]

    monkeypatch.setenv("PADIC_GUARD", "banana")
    assert main(["solve", path]) == 3
    assert "PADIC_GUARD" in capsys.readouterr().err


def test_multi_prime_decision_only(tmp_path, capsys):
    text = (
        "vars x y\n"
        "eq 1 x + 1 y = 3\n"
        "val 2 : v(x) >= 0\n"
        "val 3 : v(y) >= 0\n"
        "ord 1 x <= 2\n"
    )
    path = write(tmp_path, "multi.txt", text)
    assert main(["solve", path, "--witness"]) == 0
    out = capsys.readouterr().out
    assert "decision only" in out
    assert main(["solve", path, "--json", "--witness"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["status"] == "sat"
    assert payload["witness"] is None
    assert payload["fragment"] == "2:GEQ,3:GEQ,ord"


def test_witness_print_verifies(tmp_path, capsys):
    # the human-readable witness agrees with what the checker accepts
    path = write(tmp_path, "sat.txt", SAT_GEQ)
    assert main(["solve", path, "--json", "--witness"]) == 0
    payload = json.loads(capsys.readouterr().out)
    from padicsat.cli import _witness_from_json

    witness = _witness_from_json(json.dumps(payload["witness"]))
    assert verify_witness(parse_instance(SAT_GEQ), witness)
