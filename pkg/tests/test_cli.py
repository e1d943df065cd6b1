import json
import os
import pathlib
import subprocess
import sys

import pytest

from pllk import cli, corpus, proofio

CORPUS = pathlib.Path(__file__).resolve().parent.parent / "corpus"


def run(argv, env=None):
    full_env = dict(os.environ)
    if env:
        full_env.update(env)
    proc = subprocess.run([sys.executable, "-m", "pllk.cli", *argv],
                          capture_output=True, text=True, env=full_env)
    return proc.returncode, proc.stdout, proc.stderr


def test_check_failing_criterion():
    code, out, _ = run(["check", str(CORPUS / "dlightning.pll"),
                        "--system", "opllinf", "--criteria", "wp"])
    assert code == 1
    assert "wp: fails" in out


def test_check_validity_only():
    code, out, _ = run(["check", str(CORPUS / "zero.pll"), "--system", "pll"])
    assert code == 0
    assert "ok" in out


def test_check_full_criteria_line_format():
    code, out, _ = run(["check", str(CORPUS / "stream01.pll"),
                        "--criteria", "wp,p,fe,reg,wreg"])
    assert code == 0
    for line in ("wp: holds", "p: holds", "fe: holds", "reg: holds",
                 "wreg: holds"):
        assert line in out


def test_check_parse_error(tmp_path):
    bad = tmp_path / "bad.pll"
    bad.write_text("(! X")
    code, out, err = run(["check", str(bad)])
    assert code == 2
    assert "byte" in err


def test_reduce_finite_input(tmp_path):
    code, out, _ = run(["reduce", str(CORPUS / "pll_fpqb.pll"), "--height", "2"])
    assert code == 0
    parsed = proofio.parse_proof(out)
    assert parsed.concl == corpus.pll_fpqb().concl


def test_reduce_fuel_exhaustion_exit_code():
    code, out, err = run(["reduce", str(CORPUS / "dlightning.pll"),
                          "--height", "1"])
    assert code == 3
    assert proofio.parse_proof(out).kind == "hyp"


def test_reduce_stream_with_trace():
    code, out, _ = run(["reduce", str(CORPUS / "stream_der_cut.pll"),
                        "--height", "2", "--trace"])
    assert code == 0
    assert "step 0: cp-qb @ e; measure=(" in out


def test_unfold_depth():
    code, out, _ = run(["unfold", str(CORPUS / "stream01.pll"), "--depth", "3"])
    assert code == 0
    d = proofio.parse_proof(out)
    assert d.height == 3


def test_sem_json_output():
    code, out, _ = run(["sem", str(CORPUS / "zero.pll"), "--base", "X=2",
                        "--trunc", "5", "--emit-json"])
    assert code == 0
    data = json.loads(out)
    assert len(data) == 2
    assert data[0][0][0] == "pair"


def test_translate_roundtrip_via_cli(tmp_path):
    out_path = tmp_path / "inf.pll"
    code, _, _ = run(["translate", str(CORPUS / "fp_ax.pll"), "--to", "pllinf",
                      "--emit", str(out_path)])
    assert code == 0
    back = tmp_path / "back.pll"
    code, _, _ = run(["translate", str(out_path), "--to", "pll",
                      "--emit", str(back)])
    assert code == 0
    assert proofio.parse_proof(back.read_text()) == corpus.fp_ax()


def test_translate_mell():
    code, out, _ = run(["translate", str(CORPUS / "abs.pll"), "--to", "mell"])
    assert code == 0
    assert "(qc" in out and "(qd" in out


def test_simulate_cli():
    code, out, _ = run(["simulate", str(CORPUS / "pll_fpfp.pll"),
                        "--redex", "e"])
    assert code == 0
    assert "step 0: bp-bp @ e" in out


def test_pllk_fuel_env():
    code, out, err = run(["reduce", str(CORPUS / "stream_abs_cut.pll"),
                          "--height", "2"], env={"PLLK_FUEL": "1"})
    assert code == 3  # one step of fuel cannot normalize


def test_emit_dot(tmp_path):
    dot = tmp_path / "g.dot"
    code, _, _ = run(["check", str(CORPUS / "zero.pll"), "--system", "pll",
                      "--emit-dot", str(dot)])
    assert code == 0
    text = dot.read_text()
    assert text.startswith("digraph") and "ax" in text


def test_main_callable_directly(capsys):
    rc = cli.main(["check", str(CORPUS / "exprog.pll"), "--criteria", "wp,p"])
    out = capsys.readouterr().out
    assert rc == 1
    assert "wp: holds" in out and "p: fails" in out
