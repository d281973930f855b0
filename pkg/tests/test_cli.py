import json

import pytest

from tmlg.cli import main

THEORY = """\
theory T
vertex a
vertex b
edge f : a -> b
edge e : a -> a
"""


@pytest.fixture
def theory_file(tmp_path):
    path = tmp_path / "theory.mlg"
    path.write_text(THEORY)
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_check_infers(theory_file, capsys):
    code, out, _ = run(capsys, "check", theory_file, "(refl 'a)")
    assert code == 0
    assert out.strip() == "(Id G 'a 'a)"


def test_check_mismatch_exit_one(theory_file, capsys):
    code, _, err = run(capsys, "check", theory_file, "(refl 'a)",
                       "--type", "(Id G 'a 'b)")
    assert code == 1
    assert "type error" in err
    assert "Traceback" not in err


def test_parse_error_exit_two(theory_file, capsys):
    code, _, err = run(capsys, "check", theory_file, "(((")
    assert code == 2


def test_usage_error_exit_two(capsys):
    assert main(["bogus-command"]) == 2


def test_normalize(theory_file, capsys):
    code, out, _ = run(capsys, "normalize", theory_file,
                       "(rec ((n) Nat) z ((x y) (s y)) (s (s z)))")
    assert code == 0
    assert out.strip() == "(s (s z))"


def test_eval_word(theory_file, capsys):
    code, out, _ = run(capsys, "eval", theory_file, "'f")
    assert code == 0
    assert "word f : a -> b" in out


def test_canon(theory_file, capsys):
    code, out, _ = run(capsys, "canon", theory_file,
                       "(rec ((n) Nat) z ((x y) (s y)) (s (s z)))")
    assert code == 0
    assert out.splitlines()[0] == "(s (s z))"
    assert out.splitlines()[1].startswith("proof: ")


def test_realize_doppelganger(theory_file, capsys):
    code, out, _ = run(capsys, "realize", theory_file,
                       "(J ((x y z) G) ((x) 'b) 'a 'a 'e)")
    assert code == 0
    assert "'b" in out


def test_pi0_json(theory_file, capsys):
    code, out, _ = run(capsys, "pi0", theory_file, "--json", "--samples",
                       "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["kind"] == "pi0"
    assert payload["verdict"] == "pass"


def test_retract_json_deterministic(theory_file, capsys):
    code1, out1, _ = run(capsys, "retract", theory_file, "--json",
                         "--fuel", "10", "--seed", "3")
    code2, out2, _ = run(capsys, "retract", theory_file, "--json",
                         "--fuel", "10", "--seed", "3")
    assert code1 == code2 == 0
    strip = lambda s: [json.dumps({k: v for k, v in json.loads(line).items()
                                   if k != "stats"}, sort_keys=True)
                       for line in s.splitlines()]
    assert strip(out1) == strip(out2)
    for line in out1.splitlines():
        assert json.loads(line)["verdict"] == "pass"


def test_word_command(theory_file, capsys):
    code, out, _ = run(capsys, "word", theory_file, "e . e^")
    assert code == 0
    assert "1@a : a -> a" in out
    code, out, _ = run(capsys, "word", theory_file, "f^")
    assert "f^ : b -> a" in out


def test_word_unknown_edge(theory_file, capsys):
    code, _, err = run(capsys, "word", theory_file, "nope")
    assert code == 2


def test_term_from_file(theory_file, tmp_path, capsys):
    tf = tmp_path / "term.tml"
    tf.write_text("(s (s z))")
    code, out, _ = run(capsys, "canon", theory_file, f"@{tf}")
    assert code == 0
    assert out.splitlines()[0] == "(s (s z))"
