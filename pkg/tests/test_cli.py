import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from legalarg.cli import EXIT_OK, EXIT_PARSE, EXIT_UNSAT, EXIT_VALIDATION, main


def run_cli(*argv, stdin_text=""):
    out = io.StringIO()
    code = main(list(argv), out=out, inp=io.StringIO(stdin_text))
    return code, out.getvalue()


def test_validate_bundled(example1_path):
    code, out = run_cli("validate", "--case", str(example1_path))
    assert code == EXIT_OK and out.startswith("ok:")


def test_solve_girlfriend_column(example1_path):
    code, out = run_cli("solve", "--case", str(example1_path), "--assume", "p(T3) >= 0.7")
    assert code == EXIT_OK
    assert out.splitlines() == [
        "Innocence: 1",
        "Einc: [0, 0.3]",
        "Eex: [0.7, 1]",
        "T1: [0, 0.33]",
        "T2: [0.7, 1]",
        "T3: [0.7, 1] *",
        "E1: [0, 0.3]",
    ]


def test_solve_exact_mode(example1_path):
    code, out = run_cli(
        "solve", "--case", str(example1_path), "--assume", "p(T3) >= 0.7", "--exact"
    )
    assert "T1: [0, 1/3]" in out
    assert "Einc: [0, 3/10]" in out


def test_solve_marks_directly_constrained(example2_path):
    code, out = run_cli(
        "solve", "--case", str(example2_path),
        "--assume", "p(W1) = 1", "--assume", "p(E1) = 1",
    )
    assert code == EXIT_OK
    lines = dict(l.split(": ", 1) for l in out.splitlines())
    assert lines["W1"] == "1 *" and lines["E1"] == "1 *"
    assert lines["Innocence"] == "0.94"
    assert lines["Einc"] == "[0.06, 0.7]"


def test_parse_error_exit_code(tmp_path):
    bad = tmp_path / "bad.case"
    bad.write_text("case v1\nfrobnicate\n")
    code, out = run_cli("solve", "--case", str(bad))
    assert code == EXIT_PARSE and "parse error" in out


def test_validation_error_exit_code(tmp_path):
    bad = tmp_path / "bad.case"
    bad.write_text(
        "case v1\nscheme blaf\narg Innocence meta\narg Einc meta\narg Eex meta\n"
        "edge Einc Innocence -1/2\n"
    )
    code, out = run_cli("solve", "--case", str(bad))
    assert code == EXIT_VALIDATION and "validation error" in out


def test_unsat_exit_code_names_assumptions(example1_path):
    code, out = run_cli(
        "solve", "--case", str(example1_path),
        "--assume", "p(T3) >= 0.7", "--assume", "p(E1) = 1",
    )
    assert code == EXIT_UNSAT
    assert out.startswith("unsatisfiable: conflicting assumptions:")


def test_missing_file_is_parse_error():
    code, _ = run_cli("solve", "--case", "/nonexistent.case")
    assert code == EXIT_PARSE


def test_explain_verdict(example1_path):
    code, out = run_cli(
        "explain", "--case", str(example1_path), "--assume", "p(T3) >= 0.7", "verdict"
    )
    assert code == EXIT_OK
    assert out.strip() == (
        "innocent: exculpatory evidence (Eex >= 0.7) via T2 (>= 0.7) via T3 (>= 0.7)"
    )


def test_explain_bound(example1_path):
    code, out = run_cli(
        "explain", "--case", str(example1_path), "--assume", "p(T3) >= 0.7",
        "Einc", "upper", "--depth", "1",
    )
    assert code == EXIT_OK
    assert out.splitlines()[0] == "Einc <= 0.3"


def test_check_bundled_camera(camera_path):
    code, out = run_cli("check", "--case", str(camera_path))
    assert code == EXIT_OK
    report = json.loads(out)
    assert report["validation"] == "ok"
    assert report["oracle"]["mode"] == "explicit" and report["oracle"]["match"]


def test_check_three_node_oracle(three_node_path):
    code, out = run_cli("check", "--case", str(three_node_path))
    report = json.loads(out)
    assert code == EXIT_OK and report["oracle"]["match"]


def test_whatif_replays_table_columns(example1_path):
    script = "\n".join([
        "assume p(T3) >= 0.7",
        "solve",
        "retract a1",
        "assume p(E1) >= 0.9",
        "solve",
        "verdict",
        "quit",
    ]) + "\n"
    code, out = run_cli("whatif", "--case", str(example1_path), stdin_text=script)
    assert code == EXIT_OK
    assert "Eex: [0.7, 1]" in out
    assert "Einc: [0.9, 1]" in out
    assert "guilty: inculpatory evidence (Einc >= 0.9)" in out


def test_whatif_undo_restores_prior_beliefs(example1_path):
    script = "assume p(E1) >= 0.9\nsolve\nundo\nsolve\nquit\n"
    code, out = run_cli("whatif", "--case", str(example1_path), stdin_text=script)
    tables = [l for l in out.splitlines() if l.startswith("Innocence:")]
    assert tables == ["Innocence: 0.1", "Innocence: 1"]


def test_whatif_survives_user_errors(example1_path):
    script = "assume p(Qqq) >= 0.5\nretract zz\nbogus\nsolve\nquit\n"
    code, out = run_cli("whatif", "--case", str(example1_path), stdin_text=script)
    assert code == EXIT_OK
    assert out.count("error:") == 3
    assert "Innocence: 1" in out


def test_whatif_session_log_and_replay(example1_path, tmp_path):
    session = tmp_path / "steps.jsonl"
    script = (
        "assume p(T3) >= 0.7\nsolve\n"
        f"save-session {session}\nquit\n"
    )
    code, first = run_cli("whatif", "--case", str(example1_path), stdin_text=script)
    assert code == EXIT_OK and session.exists()
    # replay: the saved log reproduces the same table, then the loop continues
    code, second = run_cli(
        "whatif", "--case", str(example1_path), "--session", str(session),
        stdin_text="quit\n",
    )
    assert code == EXIT_OK
    first_table = [l for l in first.splitlines() if ":" in l and "error" not in l]
    second_table = [l for l in second.splitlines() if ":" in l]
    assert [l for l in first_table if l.startswith(("Innocence", "Einc", "Eex", "T", "E1"))] == [
        l for l in second_table if l.startswith(("Innocence", "Einc", "Eex", "T", "E1"))
    ]


def test_whatif_unsat_then_retract(example1_path):
    script = (
        "assume p(T3) >= 0.7\nassume p(E1) = 1\nsolve\n"
        "retract a1\nsolve\nquit\n"
    )
    code, out = run_cli("whatif", "--case", str(example1_path), stdin_text=script)
    assert "unsatisfiable: conflicting assumptions:" in out
    assert "Einc: 1" in out  # after retracting the alibi floor, p(E1)=1 pins Einc


def test_console_entry_point(example1_path):
    proc = subprocess.run(
        [sys.executable, "-m", "legalarg.cli", "solve", "--case", str(example1_path)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "Innocence: 1"
