import importlib.resources
import shutil
from pathlib import Path

import pytest

from sequitur.cli import main


@pytest.fixture()
def cal_dir(tmp_path):
    src = importlib.resources.files("sequitur") / "calculi"
    for name in ("lk.cal", "ll.cal", "lkbox.cal"):
        shutil.copy(str(src / name), tmp_path / name)
    return tmp_path


def test_check_identity_exit_zero(cal_dir, tmp_path, capsys):
    out = tmp_path / "rep1"
    code = main(["check", str(cal_dir / "lk.cal"), "--property", "identity",
                 "--out", str(out)])
    assert code == 0
    assert (out / "report.json").exists()
    assert (out / "report.tex").exists()
    stdout = capsys.readouterr().out
    assert "4 proved" in stdout


def test_check_weakening_unknown_exit_two(cal_dir, tmp_path):
    out = tmp_path / "rep2"
    code = main(["check", str(cal_dir / "ll.cal"), "--property", "weakening",
                 "--out", str(out)])
    assert code == 2


def test_check_missing_file_exit_one(tmp_path, capsys):
    code = main(["check", str(tmp_path / "missing.cal"),
                 "--property", "identity"])
    assert code == 1
    assert "no such calculus" in capsys.readouterr().err


def test_check_parse_error_exit_one(tmp_path, capsys):
    bad = tmp_path / "bad.cal"
    bad.write_text("zone L antecedent\nrule broken\n", encoding="utf-8")
    code = main(["check", str(bad), "--property", "identity"])
    assert code == 1
    err = capsys.readouterr().err
    assert "ParseError" in err or "MissingIdentityRule" in err


def test_check_failed_exit_three(tmp_path):
    # a structurally valid cut whose conclusion swaps the zones, so the
    # exhaustively decided atomic family genuinely fails
    text = """\
zone L antecedent weakening contraction
zone R succedent weakening contraction
conn and 2 "#1 \\wedge #2" prec 40
axiom init : (G, p |- D, p)
rule andR : (G |- D, A) (G |- D, B) => (G |- D, A and B)
cut twisted : (G1 |- D1, A) (G2, A |- D2) => (D1, D2 |- G1, G2)
identity init
"""
    f = tmp_path / "twisted.cal"
    f.write_text(text, encoding="utf-8")
    out = tmp_path / "rep3"
    code = main(["check", str(f), "--property", "cut", "--rule", "twisted",
                 "--out", str(out)])
    assert code == 3


def test_check_reports_byte_identical(cal_dir, tmp_path):
    """Determinism: two consecutive runs write identical bytes."""
    outs = []
    for i in (1, 2):
        out = tmp_path / f"det{i}"
        code = main(["check", str(cal_dir / "lk.cal"), "--property", "cut",
                     "--out", str(out)])
        assert code == 0
        outs.append(((out / "report.json").read_bytes(),
                     (out / "report.tex").read_bytes()))
    assert outs[0] == outs[1]


def test_prove_and_render(cal_dir, tmp_path, capsys):
    code = main(["prove", str(cal_dir / "lk.cal"),
                 "--goal", "p |- p and p", "--depth", "3"])
    assert code == 0
    assert "\\infer" in capsys.readouterr().out
    code2 = main(["prove", str(cal_dir / "lk.cal"),
                  "--goal", "p |- q", "--depth", "3"])
    assert code2 == 2
    tex = tmp_path / "rules.tex"
    code3 = main(["render", str(cal_dir / "ll.cal"), "--out", str(tex),
                  "--full-doc"])
    assert code3 == 0
    assert tex.read_text(encoding="utf-8").startswith("\\documentclass")
