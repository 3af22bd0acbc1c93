import json
import math

import numpy as np
import pytest

from qratio import bench
from qratio.bench import (
    ExperimentSpec,
    load_spec,
    parse_spec,
    replay_row,
    rows_csv,
    run_agreement,
    run_bench,
    power_law_sparsity_profile,
    run_phase_transition,
    run_ratio_study,
    run_toy_scan,
    summarize,
    summary_csv,
)
from qratio.ensembles import EnsembleSpec


@pytest.fixture(scope="module")
def toy_scan():
    return run_toy_scan(with_dca=False)


def test_toy_scan_minimisers(toy_scan):
    mins = toy_scan["minimizers"]
    for q in (1.5, 2.0, math.inf):
        assert mins[q] == [0.0, 10.0]
    assert mins[0.5] == [0.0, 9.0, 10.0]
    assert toy_scan["global_minimizer"] == 0.0
    assert toy_scan["support_sizes"] == {0.0: 3, 9.0: 5, 10.0: 4}
    assert toy_scan["lambda_bar"] == pytest.approx(math.sqrt(2324) / 78, rel=1e-14)
    assert len(toy_scan["t"]) == 2001 and toy_scan["t"][0] == -5 and toy_scan["t"][-1] == 15


def test_toy_parametric_table(toy_scan):
    par = toy_scan["parametric"]
    lam_bar = toy_scan["lambda_bar"]
    i0 = int(np.flatnonzero(toy_scan["t"] == 0.0)[0])
    assert par[lam_bar][i0] == pytest.approx(0.0, abs=1e-12)
    assert np.all(par[1.0] > 0)


def test_power_law_sparsity_profile():
    d = power_law_sparsity_profile()
    assert d["sparsity"][math.inf] == pytest.approx(1.6251, abs=5e-4)
    assert d["sparsity"][0.0] == 50


def test_parse_spec_and_errors():
    spec = parse_spec(
        """
        # comment
        name = t
        kind = dct
        m = 8
        N = 16
        F = 5
        sparsity_grid = 2:6:2
        q_grid = 1.5, inf
        methods = ccp, bpdn
        replications = 3
        """
    )
    assert spec.sparsity_grid == (2, 4, 6)
    assert spec.q_grid == (1.5, math.inf)
    assert spec.ensemble.F == 5
    with pytest.raises(ValueError, match="unknown key"):
        parse_spec("nme = x\n")
    with pytest.raises(ValueError, match="duplicate"):
        parse_spec("m = 3\nm = 4\n")
    with pytest.raises(ValueError):
        parse_spec("replications = 0\n")
    with pytest.raises(ValueError):
        parse_spec("success_threshold = 0\n")
    with pytest.raises(ValueError):
        parse_spec("methods = omp\n")


@pytest.mark.parametrize("name", bench.BUILTIN_CONFIGS)
def test_builtin_configs_load(name):
    spec = load_spec(name)
    assert spec.name == name
    full = spec.at_full_size()
    if name.startswith(("fig7", "fig8", "fig9")):
        assert full.replications == 100
    if name.startswith("fig6"):
        assert spec.experiment == "ratio" and spec.ensemble.F in (2.0, 5.0)
    if name.startswith(("fig8", "fig9")):
        assert full.ensemble.N == 1024


def test_load_spec_missing():
    with pytest.raises(FileNotFoundError):
        load_spec("no_such_config")


def _small_spec(**kw):
    base = dict(
        name="small",
        ensemble=EnsembleSpec("gaussian", 16, 40),
        sparsity_grid=(2, 5),
        q_grid=(1.5, math.inf),
        methods=("ccp", "bpdn"),
        replications=3,
        master_seed=7,
    )
    base.update(kw)
    return ExperimentSpec(**base)


@pytest.fixture(scope="module")
def small_run():
    return run_phase_transition(_small_spec())


def test_phase_transition_rows(small_run):
    rows, summary = small_run
    assert len(rows) == 3 * 2 * 3
    keys = [r.key() for r in rows]
    assert keys == sorted(keys)
    for r in rows:
        assert r.success == (r.relative_error <= 1e-3)
    for s in summary:
        if s["k"] == 2:
            assert s["success_rate"] == 1.0
    assert summary_csv(summary) == summary_csv(summarize(rows))


def test_common_instances_across_methods(small_run):
    rows, _ = small_run
    seeds = {}
    for r in rows:
        seeds.setdefault((r.k, r.replication), set()).add(r.seed)
    assert all(len(s) == 1 for s in seeds.values())


def test_threads_do_not_change_output(small_run):
    rows, _ = small_run
    rows2, _ = run_phase_transition(_small_spec(), threads=3)
    assert rows_csv(rows) == rows_csv(rows2)


def test_replay_row_reproduces_error(small_run):
    rows, _ = small_run
    spec = _small_spec()
    for r in rows[::4]:
        again = replay_row(spec, r.method, r.q, r.k, r.seed)
        assert again.relative_error == r.relative_error


def test_failures_are_recorded(monkeypatch):
    real = bench.solve

    def flaky(problem, method, options):
        if method == "bpdn":
            raise RuntimeError("boom")
        return real(problem, method, options)

    monkeypatch.setattr(bench, "solve", flaky)
    rows, summary = run_phase_transition(_small_spec(q_grid=(1.5,), replications=1))
    bad = [r for r in rows if r.method == "bpdn"]
    assert bad and all(r.termination.startswith("error: RuntimeError") and not r.success for r in bad)
    assert all(r.success for r in rows if r.method == "ccp" and r.k == 2)


def test_bench_outputs(tmp_path):
    cfg = tmp_path / "s.cfg"
    cfg.write_text("name = s\nm = 12\nN = 30\nsparsity_grid = 2,3\nq_grid = 2\nmethods = ccp\nreplications = 2\n")
    spec = load_spec(str(cfg))
    run_bench(spec, str(tmp_path / "a"))
    run_bench(spec, str(tmp_path / "b"), threads=2)
    for name in ("rows.csv", "summary.csv", "meta.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    meta = json.loads((tmp_path / "a" / "meta.json").read_text())
    assert meta["master_seed"] == 0
    assert meta["rng"] == "philox4x64-10"
    assert meta["config"]["N"] == 30
    assert "numpy" in meta["versions"]
    header = (tmp_path / "a" / "rows.csv").read_text().splitlines()[0]
    assert "seed" in header and "wall_time" not in header


def test_agreement_small():
    cases = ((2.0, 4, 0.0, ("pm", "ccp")), (math.inf, 3, 0.0, ("pm", "ccp", "lp-inf")))
    res = run_agreement(0, cases=cases, m=24, n=48)
    assert len(res["rows"]) == 5 and len(res["pairs"]) == 4
    for row in res["rows"]:
        assert row["termination"] == "converged"
        assert row["wall_time"] > 0


def test_ratio_study_small(tmp_path):
    ens = EnsembleSpec("dct", 12, 30, F=2.0)
    rows = run_ratio_study(ens, [2, 3], 1.5, 2, master_seed=3, restarts=5)
    assert [(r["matrix"], r["k"]) for r in rows] == [(0, 2), (0, 3), (1, 2), (1, 3)]
    for r in rows:
        assert r["note"] == ""
        # the true signal is feasible, so the constrained value is at most its ratio
        assert r["constrained"] >= 1.0 - 1e-9
        assert r["gap"] == pytest.approx(r["constrained"] - r["kernel"])
    assert rows[0]["kernel"] == rows[1]["kernel"]


def test_run_bench_ratio(tmp_path):
    spec = parse_spec(
        "name = tiny_ratio\nexperiment = ratio\nkind = dct\nm = 12\nN = 30\nF = 2\n"
        "sparsity_grid = 2\nq_grid = 1.5\nreplications = 1\n"
    )
    paths = run_bench(spec, str(tmp_path))
    assert sorted(p.rsplit("/", 1)[-1] for p in paths) == ["meta.json", "rows.csv", "summary.csv"]
    lines = (tmp_path / "rows.csv").read_text().splitlines()
    assert lines[0] == "matrix,k,constrained,kernel,gap,note" and len(lines) == 2
