from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from quivar.cli import main, render, run_cli
from quivar.fixtures import H1, H2, one_loop, triangle_quiver, two_cycle
from quivar.quiver import mdeg


@pytest.fixture
def files(tmp_path: Path) -> dict[str, str]:
    out = {}
    docs = {
        "triangle.json": triangle_quiver().to_dict(),
        "loop1.json": one_loop().to_dict(),
        "c2.json": two_cycle().to_dict(),
        "h1.json": {"word": list(H1)},
        "h2.json": {"word": list(H2)},
        "d2.json": mdeg(H2).to_dict(),
    }
    for name, doc in docs.items():
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        out[name] = str(p)
    return out


def _json(capsys) -> dict:
    return json.loads(capsys.readouterr().out)


def test_equiv_zero_h1(files, capsys):
    code = main(["equiv-zero", "--quiver", files["triangle.json"], "--word", files["h1.json"], "--char", "2"])
    assert code == 0
    out = _json(capsys)
    assert out["equiv_zero"] is True and out["certificate"] == "rule3"


def test_equiv_zero_h2(files, capsys):
    assert main(["equiv-zero", "--quiver", files["triangle.json"], "--word", files["h2.json"]]) == 0
    assert _json(capsys)["equiv_zero"] is False


def test_m_bound(capsys):
    assert main(["m-bound", "--n", "2", "--d", "2", "--m", "2", "--char", "2"]) == 0
    assert _json(capsys)["M"] == 4


def test_class_nonempty(capsys):
    assert main(["class-nonempty", "--n", "3", "--d", "4", "--m", "2"]) == 0
    assert _json(capsys)["nonempty"] is True


def test_omega_report(files, capsys):
    assert main(["omega", "--quiver", files["triangle.json"], "--delta", files["d2.json"]]) == 0
    out = _json(capsys)
    assert out["omega_equiv"] == "yes" and out["omega2"] is False


def test_max_degree_defaults_to_bound(files, capsys):
    assert main(["max-degree", "--quiver", files["loop1.json"], "--char", "2"]) == 0
    out = _json(capsys)
    assert out["M_Q"] == 1 and out["bound"] == 1 and out["within_bound"]


def test_chain_outside_omega2_is_bad_input(files, tmp_path, capsys):
    d = tmp_path / "sq.json"
    d.write_text('{"a": 2, "b": 2}')
    assert main(["chain", "--quiver", files["c2.json"], "--delta", str(d)]) == 2


def test_fault_injection_exit_code(files, capsys):
    code = main(["cross-validate", "--quiver", files["loop1.json"], "--cutoff", "4", "--char", "2",
                 "--inject-fault"])
    assert code == 1
    assert _json(capsys)["mismatches"]


def test_cross_validate_clean(files, capsys):
    assert main(["cross-validate", "--quiver", files["loop1.json"], "--cutoff", "4", "--char", "2"]) == 0
    assert _json(capsys)["mismatches"] == []


def test_oracle_decomp(files, tmp_path, capsys):
    w = tmp_path / "xx.json"
    w.write_text('{"word": ["x", "x"]}')
    assert main(["oracle", "decomp", "--quiver", files["loop1.json"], "--word", str(w), "--field", "gf2"]) == 0
    assert _json(capsys)["decomposable"] is True
    assert main(["oracle", "decomp", "--quiver", files["loop1.json"], "--word", str(w), "--field", "q"]) == 0
    assert _json(capsys)["decomposable"] is False


def test_oracle_poly_dump(files, tmp_path, capsys):
    w = tmp_path / "x.json"
    w.write_text('{"word": ["x"]}')
    assert main(["oracle", "poly", "--quiver", files["loop1.json"], "--word", str(w), "--k", "2"]) == 0
    out = _json(capsys)
    coeffs = sorted(t["coeff"] for t in out["polynomial"])
    assert coeffs == ["-1", "1"]


def test_extremal_verify(capsys):
    assert main(["extremal", "--family", "e", "--n", "4", "--d", "8", "--m", "2", "--verify"]) == 0
    out = _json(capsys)
    assert out["verification"]["ok"] is True
    assert out["witness"]["claimed_degree"] == 12


def test_extremal_inconclusive(capsys):
    assert main(["extremal", "--family", "e", "--n", "4", "--d", "9", "--m", "3"]) == 3


def test_survey_csv(capsys):
    assert main(["survey", "--max-n", "1", "--max-d", "2", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,d,m,char,M,D,gap,holds"
    assert "1,1,1,2,2,2,0,True" in lines


def test_usage_errors(capsys):
    assert main([]) == 2
    assert main(["no-such-command"]) == 2
    assert main(["m-bound", "--n", "2", "--bogus"]) == 2
    assert main(["m-bound", "--n", "2", "--d", "2", "--m", "2", "--char", "7"]) == 2


def test_bad_files(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert main(["equiv-zero", "--quiver", str(bad), "--word", str(bad)]) == 2
    assert main(["equiv-zero", "--quiver", str(tmp_path / "missing.json"), "--word", str(bad)]) == 2


def test_not_closed_word_is_bad_input(files, tmp_path):
    w = tmp_path / "w.json"
    w.write_text('{"word": ["a", "b"]}')
    assert main(["equiv-zero", "--quiver", files["triangle.json"], "--word", str(w)]) == 2


def test_output_is_deterministic(files, capsys):
    argv = ["omega", "--quiver", files["triangle.json"], "--delta", files["d2.json"]]
    run_cli(argv)
    first = capsys.readouterr().out
    run_cli(argv)
    assert capsys.readouterr().out == first


def test_render_formats():
    payload = {"b": 1, "a": [1, 2]}
    assert render(payload, "json").index('"a"') < render(payload, "json").index('"b"')
    assert render(payload, "csv").splitlines()[0] == "a,b"
    assert "a" in render(payload, "table")


def test_threads_env_validated(monkeypatch, capsys):
    monkeypatch.setenv("QUIVAR_THREADS", "zero")
    assert main(["m-bound", "--n", "2", "--d", "2", "--m", "2"]) == 2
    monkeypatch.setenv("QUIVAR_THREADS", "4")
    assert main(["m-bound", "--n", "2", "--d", "2", "--m", "2"]) == 0


def test_accept_single_criterion(capsys):
    assert main(["accept", "--only", "1"]) == 0
    captured = capsys.readouterr()
    assert captured.err.startswith("[PASS] criterion 1")


def test_console_entry_point(files):
    proc = subprocess.run([sys.executable, "-m", "quivar.cli", "m-bound", "--n", "7", "--d", "9", "--m", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["M"] == 15
