"""End-to-end CLI contract: exit codes, JSON reports, determinism."""

import json
import os
import subprocess
import sys

DOC = json.dumps(
    {
        "version": "1",
        "spaces": {
            "X": {
                "carrier": ["a", "b", "c"],
                "coarse_generators": [["a", "b"]],
                "bounded_generators": [["a", "b"]],
                "classical": False,
            },
            "P": {"carrier": ["p"], "coarse_generators": [], "classical": True},
            "Y": {"carrier": ["p", "q"], "coarse_generators": [], "classical": True},
        },
        "maps": {
            "swap": {"table": {"p": "q", "q": "p"}},
            "idY": {"table": {"p": "p", "q": "q"}},
        },
        "diagrams": {
            "pairY": {
                "objects": {"L": "Y", "R": "Y"},
                "arrows": [{"src": "L", "dst": "R", "map": "swap"}],
            }
        },
    }
)

BAD_DOC = json.dumps(
    {
        "version": "1",
        "spaces": {
            "C": {
                "carrier": ["u", "v"],
                "coarse_generators": [["u", "v"]],
                "bounded_generators": [["u"]],
                "classical": False,
            }
        },
    }
)


def run_cli(*args, stdin_text="", env_extra=None):
    env = dict(os.environ)
    if env_extra:
        env.update(env_extra)
    proc = subprocess.run(
        [sys.executable, "-m", "coarsecat.cli", *args],
        input=stdin_text,
        capture_output=True,
        text=True,
        env=env,
    )
    return proc


def report(proc):
    return json.loads(proc.stdout)


def test_validate_ok():
    proc = run_cli("validate", stdin_text=DOC)
    assert proc.returncode == 0
    body = report(proc)
    assert body["ok"] and body["spaces"] == 3


def test_validate_invalid_document_exits_one_with_witness():
    proc = run_cli("validate", stdin_text=BAD_DOC)
    assert proc.returncode == 1
    body = report(proc)
    assert not body["ok"]
    assert body["witness"][0]["path"] == "spaces.C"


def test_validate_malformed_json_exits_one():
    proc = run_cli("validate", stdin_text="{nope")
    assert proc.returncode == 1
    assert "line 1" in report(proc)["message"]


def test_other_commands_treat_bad_documents_as_errors():
    proc = run_cli("components", "--space", "C", stdin_text=BAD_DOC)
    assert proc.returncode == 2
    assert report(proc)["error"] == "DocumentError"


def test_normalize_is_idempotent():
    first = run_cli("normalize", stdin_text=DOC)
    assert first.returncode == 0
    second = run_cli("normalize", stdin_text=first.stdout)
    assert second.stdout == first.stdout


def test_reports_are_byte_identical():
    a = run_cli("oracle", "--diagram", "pairY", stdin_text=DOC)
    b = run_cli("oracle", "--diagram", "pairY", stdin_text=DOC)
    assert a.returncode == b.returncode == 0
    assert a.stdout == b.stdout


def test_product_and_tensor():
    prod = report(run_cli("product", "--spaces", "X,P", stdin_text=DOC))
    assert prod["ok"]
    assert prod["result"]["classical"] is True
    tens = report(run_cli("tensor", "--spaces", "X,P", stdin_text=DOC))
    assert tens["result"]["classical"] is False


def test_close_false_has_point_witness():
    proc = run_cli(
        "close", "--dom", "Y", "--cod", "Y", "--left", "swap", "--right", "idY",
        stdin_text=DOC,
    )
    assert proc.returncode == 1
    assert report(proc)["witness"]["point"] == "p"


def test_equivalent_true():
    proc = run_cli(
        "equivalent", "--dom", "Y", "--cod", "Y", "--map", "swap", stdin_text=DOC
    )
    assert proc.returncode == 0


def test_fixture_pushout():
    proc = run_cli("colimit", "--fixture", "ex_PO")
    assert proc.returncode == 0
    body = report(proc)
    assert body["result"] == {
        "bornology": "triv",
        "coarse": "full",
        "symbolic": True,
    }


def test_fixture_admissibility_counterexample():
    proc = run_cli("admissible", "--fixture", "exa_N")
    assert proc.returncode == 1
    body = report(proc)
    assert body["witness"]["k"] == "N_min_min"
    assert body["witness"]["preimage"]["progressions"] == [[0, 1]]


def test_symbolic_limit_is_an_error():
    proc = run_cli("limit", "--fixture", "exa_N")
    assert proc.returncode == 2


def test_carrier_cap_env():
    proc = run_cli("validate", stdin_text=DOC, env_extra={"COARSECAT_MAX_CARRIER": "2"})
    assert proc.returncode == 2
    body = report(proc)
    assert body["error"] == "CapExceeded"
    assert body["hint"] == "COARSECAT_MAX_CARRIER"


def test_missing_flag_is_an_error():
    proc = run_cli("components", stdin_text=DOC)
    assert proc.returncode == 2
    assert "--space" in report(proc)["message"]


def test_unknown_command_usage_error():
    proc = run_cli("frobnicate", stdin_text=DOC)
    assert proc.returncode == 2


def test_split_and_flasque_pipeline():
    body = report(run_cli("split", "--space", "X", stdin_text=DOC))
    assert body["unbounded_part"]["carrier"] == ["c"]
    proc = run_cli("flasque", "--space", "P", stdin_text=DOC)
    assert proc.returncode == 1


def test_exists_classical_sides():
    ok = run_cli("exists-classical", "--diagram", "pairY", "--side", "limit",
                 stdin_text=DOC)
    assert ok.returncode == 0
    assert report(ok)["result"]["carrier"] == ["(p,q)", "(q,p)"]
