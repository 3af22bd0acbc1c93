import json
import subprocess
import sys

import numpy as np
import pytest

from qratio.cli import main
from qratio.model import read_matrix, read_vector


def run(*argv):
    return main([str(a) for a in argv])


@pytest.fixture
def instance(tmp_path, capsys):
    code = run("gen", "--kind", "gaussian", "--m", 16, "--N", 40, "--seed", 3, "--out", tmp_path / "A.txt",
               "--k", 3, "--x-out", tmp_path / "x.txt", "--y-out", tmp_path / "y.txt")
    assert code == 0
    assert capsys.readouterr().out.strip() == "eta=0.0"
    return tmp_path


def test_version():
    out = subprocess.run([sys.executable, "-m", "qratio", "--version"], capture_output=True, text=True)
    assert out.returncode == 0
    assert out.stdout.startswith("qratio ")
    assert "numpy" in out.stdout


def test_gen_solve_round_trip(instance):
    out = instance / "r.json"
    assert run("solve", "--method", "ccp", "--q", "1.5", "--matrix", instance / "A.txt", "--y", instance / "y.txt",
               "--eta", 0, "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["termination"] == "converged"
    assert rep["q"] == "1.5"
    assert rep["config"]["cap_factor"] == 100.0
    x = read_vector(instance / "x.txt")
    assert np.linalg.norm(np.array(rep["solution"]) - x) <= 1e-3 * np.linalg.norm(x)


def test_solve_flags_are_echoed(instance):
    out = instance / "r.json"
    assert run("solve", "--method", "pm", "--q", "inf", "--matrix", instance / "A.txt", "--y", instance / "y.txt",
               "--a-cap", 50, "--delta", 1e-6, "--out", out) == 0
    rep = json.loads(out.read_text())
    assert rep["q"] == "inf"
    assert rep["config"]["cap_factor"] == 50.0 and rep["config"]["delta"] == 1e-6


def test_negative_eta_is_usage_error(instance, capsys):
    with pytest.raises(SystemExit) as exc:
        run("solve", "--method", "pm", "--q", 2, "--eta", -1, "--matrix", instance / "A.txt", "--y", instance / "y.txt")
    assert exc.value.code == 2
    err = capsys.readouterr()
    assert "eta" in err.err and err.out == ""


def test_unknown_flag_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        run("toy", "--bogus")
    assert exc.value.code == 2


def test_q_at_most_one_rejected(instance):
    with pytest.raises(SystemExit) as exc:
        run("solve", "--method", "pm", "--q", 1, "--matrix", instance / "A.txt", "--y", instance / "y.txt")
    assert exc.value.code == 2


def test_infeasible_exit_code(tmp_path, caplog):
    (tmp_path / "A.txt").write_text("2 2\n1 0\n1 0\n")
    (tmp_path / "y.txt").write_text("2\n1 2\n")
    out = tmp_path / "r.json"
    assert run("solve", "--method", "pm", "--q", 2, "--matrix", tmp_path / "A.txt", "--y", tmp_path / "y.txt",
               "--out", out) == 1
    assert json.loads(out.read_text())["termination"] == "infeasible"
    assert "infeasible" in caplog.text


def test_missing_file_exit_code(tmp_path, capsys):
    assert run("kernel-ratio", "--q", "inf", "--matrix", tmp_path / "none.txt") == 2
    assert "no such file" in capsys.readouterr().err


def test_kernel_ratio_and_cmsv(instance, capsys):
    assert run("kernel-ratio", "--q", "inf", "--matrix", instance / "A.txt", "--k", 1) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["kernel_ratio_inf"] >= 1
    assert rep["sufficient_k"] == pytest.approx(rep["kernel_ratio_inf"] / 3)
    assert rep["approximate"] == []
    assert run("--threads", 1, "cmsv", "--q", 2, "--s", 2, "--matrix", instance / "A.txt", "--restarts", 5) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["cmsv_estimate"] > 0 and rep["approximate"] == ["cmsv_estimate"]
    assert run("cmsv", "--q", 2, "--s", 100, "--matrix", instance / "A.txt") == 2


def test_sparsity_csv(tmp_path, capsys):
    (tmp_path / "v.txt").write_text("4\n1 1 0 0\n")
    assert run("sparsity", "--q", 2, "--vector", tmp_path / "v.txt") == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1] == "value,2.0"
    assert lines[3] == "index,pi"
    assert lines[4:] == ["0,0.5", "1,0.5", "2,0.0", "3,0.0"]


def test_fvalue(tmp_path, capsys):
    from qratio.model import TOY_MATRIX, TOY_MEASUREMENTS, write_matrix, write_vector

    write_matrix(tmp_path / "A.txt", TOY_MATRIX)
    write_vector(tmp_path / "y.txt", TOY_MEASUREMENTS)
    assert run("fvalue", "--lam", 0.5, "--q", 2, "--matrix", tmp_path / "A.txt", "--y", tmp_path / "y.txt", "--exact") == 0
    assert float(capsys.readouterr().out) < 0


def test_toy_command(tmp_path):
    assert run("toy", "--out", tmp_path / "toy", "--no-dca") == 0
    names = sorted(p.name for p in (tmp_path / "toy").iterdir())
    assert names == ["toy_f_values.csv", "toy_minimizers.csv", "toy_parametric.csv", "toy_sparsity.csv"]
    mins = (tmp_path / "toy" / "toy_minimizers.csv").read_text()
    assert "0.5,0.0 9.0 10.0" in mins


def test_bench_command(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("name = s\nm = 12\nN = 30\nsparsity_grid = 2\nq_grid = 2\nmethods = ccp\nreplications = 1\n")
    assert run("bench", "--spec", cfg, "--out", tmp_path / "o") == 0
    assert (tmp_path / "o" / "summary.csv").exists()
    assert run("bench", "--spec", tmp_path / "missing.cfg", "--out", tmp_path / "o") == 2
    cfg.write_text("colour = red\n")
    assert run("bench", "--spec", cfg, "--out", tmp_path / "o") == 2


def test_gen_dct(tmp_path):
    assert run("gen", "--kind", "dct", "--m", 5, "--N", 9, "--F", 5, "--out", tmp_path / "D.txt") == 0
    a = read_matrix(tmp_path / "D.txt")
    np.testing.assert_allclose(a[:, 0], 1 / np.sqrt(5))
    assert run("gen", "--kind", "dct", "--m", 5, "--N", 9, "--out", tmp_path / "D.txt") == 2
