"""Reproducible experiment harness.

Three experiments are provided:

* :func:`run_toy_scan` -- sparsity and parametric objectives along the
  solution line of the 5x6 toy system;
* :func:`run_phase_transition` -- success rate against sparsity for every
  (method, q) pair on fresh random instances;
* :func:`run_agreement` -- the same instance solved by several algorithms,
  with pairwise solution differences.

Every instance is a pure function of a 63-bit seed derived from
``(master_seed, k, replication)``; the seed is written into each output row
so any row can be regenerated on its own with :func:`replay_row`. All
methods and q values see the same instance for a given ``(k, replication)``.
Files written by :func:`write_outputs` are byte-identical across runs and
thread counts; wall times go to a separate ``timings.csv``.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import platform
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from importlib import resources
from typing import Optional, Sequence

import numpy as np

from .ensembles import EnsembleKind, EnsembleSpec, make_matrix, noisy_measurements, sparse_signal, compressible_signal
from .model import (
    RNG_ALGORITHM,
    RecoveryProblem,
    derive_seed,
    format_q,
    parse_q,
    toy_problem,
    toy_solution,
)
from .analysis import kernel_ratio_search, ratio_comparison
from .solvers import METHODS, SolverOptions, f_value, solve
from .sparsity import q_ratio_sparsity, support_size

__all__ = [
    "BUILTIN_CONFIGS",
    "ExperimentSpec",
    "ResultRow",
    "agreement_instance",
    "instance",
    "load_spec",
    "parse_spec",
    "replay_row",
    "run_agreement",
    "power_law_sparsity_profile",
    "run_phase_transition",
    "run_ratio_study",
    "run_toy_scan",
    "summarize",
    "write_outputs",
]

Q_INDEPENDENT = {"bpdn": math.nan, "l1l2": 2.0, "lp-inf": math.inf}
EXPERIMENTS = ("phase_transition", "agreement", "toy", "ratio")


@dataclass(frozen=True)
class ExperimentSpec:
    """A sweep over sparsity, q and method on one matrix ensemble.

    ``success_threshold`` is the largest relative l2 error counted as a
    recovery. ``noise_sigma`` is the per-entry noise standard deviation; the
    noise bound handed to the solvers is the norm of the realised noise.
    ``full_replications``/``full_N`` replace ``replications``/``N`` when the
    harness runs at full size.
    """

    name: str
    ensemble: EnsembleSpec
    sparsity_grid: tuple
    q_grid: tuple = (1.5,)
    methods: tuple = ("ccp",)
    replications: int = 20
    success_threshold: float = 1e-3
    noise_sigma: float = 0.0
    master_seed: int = 0
    experiment: str = "phase_transition"
    full_replications: Optional[int] = None
    full_N: Optional[int] = None

    def __post_init__(self):
        if self.replications < 1:
            raise ValueError(f"replications must be >= 1, got {self.replications}")
        if not self.success_threshold > 0:
            raise ValueError(f"success_threshold must be > 0, got {self.success_threshold}")
        if self.noise_sigma < 0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")
        if self.experiment not in EXPERIMENTS:
            raise ValueError(f"unknown experiment {self.experiment!r}")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")
        for k in self.sparsity_grid:
            if not 1 <= int(k) <= self.ensemble.N:
                raise ValueError(f"sparsity {k} outside [1, {self.ensemble.N}]")
        for q in self.q_grid:
            if not q > 1:
                raise ValueError(f"q must exceed 1, got {q}")

    def at_full_size(self) -> "ExperimentSpec":
        ens = self.ensemble
        if self.full_N is not None:
            ens = replace(ens, N=int(self.full_N))
        reps = self.full_replications or self.replications
        return replace(self, ensemble=ens, replications=int(reps))

    def cells(self) -> list[tuple[str, float]]:
        """The (method, q) pairs of the sweep in canonical order."""
        out = []
        for method in sorted(self.methods):
            if method in Q_INDEPENDENT:
                out.append((method, Q_INDEPENDENT[method]))
            else:
                out.extend((method, q) for q in sorted(self.q_grid))
        return out

    def to_dict(self) -> dict:
        ens = self.ensemble
        return {
            "name": self.name,
            "experiment": self.experiment,
            "kind": ens.kind.value,
            "m": ens.m,
            "N": ens.N,
            "F": ens.F,
            "sparsity_grid": [int(k) for k in self.sparsity_grid],
            "q_grid": [format_q(q) for q in self.q_grid],
            "methods": list(self.methods),
            "replications": self.replications,
            "success_threshold": self.success_threshold,
            "noise_sigma": self.noise_sigma,
            "master_seed": self.master_seed,
        }


@dataclass
class ResultRow:
    method: str
    q: float
    k: int
    replication: int
    seed: int
    relative_error: float
    success: bool
    wall_time: float
    termination: str

    def key(self):
        q = -1.0 if math.isnan(self.q) else self.q
        return (self.method, q, self.k, self.replication)


# ---------------------------------------------------------------------------
# Configuration files


def _parse_list(text: str, conv) -> tuple:
    text = text.strip()
    if ":" in text and "," not in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) not in (2, 3):
            raise ValueError(f"bad range {text!r}; expected start:stop[:step]")
        start, stop = parts[0], parts[1]
        step = parts[2] if len(parts) == 3 else 1
        return tuple(range(start, stop + 1, step))
    return tuple(conv(p) for p in text.split(",") if p.strip())


_KEYS = {
    "name",
    "experiment",
    "kind",
    "m",
    "N",
    "F",
    "sparsity_grid",
    "q_grid",
    "methods",
    "replications",
    "success_threshold",
    "noise_sigma",
    "master_seed",
    "full_replications",
    "full_N",
}


def parse_spec(text: str) -> ExperimentSpec:
    """Parse a flat ``key = value`` configuration (``#`` starts a comment).

    Lists are comma separated; integer grids may be written ``start:stop:step``
    with an inclusive stop. Unknown keys are errors.
    """
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _KEYS:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        if key in values:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        values[key] = val
    experiment = values.get("experiment", "phase_transition")
    kind = EnsembleKind.parse(values.get("kind", "gaussian"))
    f = values.get("F")
    ens = EnsembleSpec(
        kind=kind,
        m=int(values.get("m", 64)),
        N=int(values.get("N", 256)),
        F=float(f) if f is not None else None,
        seed=0,
    )
    grid = values.get("sparsity_grid", "6:32:2" if experiment == "phase_transition" else "1")
    return ExperimentSpec(
        name=values.get("name", "experiment"),
        ensemble=ens,
        sparsity_grid=_parse_list(grid, int),
        q_grid=_parse_list(values.get("q_grid", "1.5"), parse_q),
        methods=_parse_list(values.get("methods", "ccp"), str.strip),
        replications=int(values.get("replications", 20)),
        success_threshold=float(values.get("success_threshold", 1e-3)),
        noise_sigma=float(values.get("noise_sigma", 0.0)),
        master_seed=int(values.get("master_seed", 0)),
        experiment=experiment,
        full_replications=int(values["full_replications"]) if "full_replications" in values else None,
        full_N=int(values["full_N"]) if "full_N" in values else None,
    )


BUILTIN_CONFIGS = ("fig6_f2", "fig6_f5", "fig7", "fig8", "fig9_f5", "fig9_f10", "agreement", "toy")


def load_spec(name_or_path: str) -> ExperimentSpec:
    """Load a configuration file, or a built-in one by name (see :data:`BUILTIN_CONFIGS`)."""
    if os.path.exists(name_or_path):
        with open(name_or_path, encoding="utf-8") as fh:
            return parse_spec(fh.read())
    if name_or_path in BUILTIN_CONFIGS:
        text = resources.files("qratio.configs").joinpath(f"{name_or_path}.cfg").read_text()
        return parse_spec(text)
    raise FileNotFoundError(
        f"{name_or_path}: no such file or built-in config ({', '.join(BUILTIN_CONFIGS)})"
    )


# ---------------------------------------------------------------------------
# Instances


def instance(ensemble: EnsembleSpec, k: int, seed: int, sigma: float = 0.0):
    """``(problem_data, truth)`` for one row; ``problem_data = (A, y, eta)``."""
    ens = replace(ensemble, seed=derive_seed(seed, 0))
    a = make_matrix(ens)
    truth = sparse_signal(ens.N, int(k), derive_seed(seed, 1))
    y, eta = noisy_measurements(a, truth.signal, sigma, derive_seed(seed, 2))
    return (a, y, eta), truth


def row_seed(master_seed: int, k: int, replication: int) -> int:
    return derive_seed(master_seed, int(k), int(replication))


def _relative_error(x_hat, x) -> float:
    return float(np.linalg.norm(x_hat - x) / np.linalg.norm(x))


def _solve_row(spec: ExperimentSpec, method, q, k, rep, seed, options) -> ResultRow:
    (a, y, eta), truth = instance(spec.ensemble, k, seed, spec.noise_sigma)
    problem = RecoveryProblem(a, y, eta, 2.0 if math.isnan(q) else q)
    try:
        report = solve(problem, method, options)
        err = _relative_error(report.solution, truth.signal)
        term = report.termination.value
        wall = report.wall_time
    except Exception as exc:  # a failed row is recorded, never fatal to the sweep
        err, term, wall = math.nan, f"error: {type(exc).__name__}: {exc}", 0.0
    ok = bool(err <= spec.success_threshold)
    return ResultRow(method, q, int(k), int(rep), int(seed), err, ok, wall, term)


def replay_row(spec: ExperimentSpec, method: str, q: float, k: int, seed: int, options=SolverOptions()) -> ResultRow:
    """Re-solve one row from its recorded seed."""
    return _solve_row(spec, method, q, k, -1, seed, options)


def run_phase_transition(
    spec: ExperimentSpec, options: SolverOptions = SolverOptions(), threads: int = 1
) -> tuple[list[ResultRow], list[dict]]:
    """Solve every (method, q, k, replication) cell and summarise success rates.

    Rows come back in canonical order (method, q, k, replication)
    whatever the thread count.
    """
    tasks = []
    for method, q in spec.cells():
        for k in sorted(int(k) for k in spec.sparsity_grid):
            for rep in range(spec.replications):
                tasks.append((method, q, k, rep, row_seed(spec.master_seed, k, rep)))

    def run(task):
        return _solve_row(spec, *task, options)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(run, tasks))
    else:
        rows = [run(t) for t in tasks]
    rows.sort(key=ResultRow.key)
    return rows, summarize(rows)


def summarize(rows: Sequence[ResultRow]) -> list[dict]:
    """Success rate per (method, q, k), recomputed from the rows."""
    cells: dict = {}
    for r in rows:
        cells.setdefault((r.method, -1.0 if math.isnan(r.q) else r.q, r.k), []).append(r)
    out = []
    for (method, _, k), group in sorted(cells.items()):
        n = len(group)
        wins = sum(r.success for r in group)
        out.append(
            {
                "method": method,
                "q": group[0].q,
                "k": k,
                "trials": n,
                "successes": wins,
                "success_rate": wins / n,
            }
        )
    return out


def success_rate(summary: Sequence[dict], method: str, q: float, k: int) -> float:
    for row in summary:
        same_q = (math.isnan(q) and math.isnan(row["q"])) or row["q"] == q
        if row["method"] == method and same_q and row["k"] == k:
            return row["success_rate"]
    raise KeyError((method, q, k))


# ---------------------------------------------------------------------------
# Algorithm agreement


AGREEMENT_CASES = (
    # (q, k, sigma, methods)
    (2.0, 30, 0.0, ("pm", "ccp")),
    (2.0, 15, 0.1, ("pm", "ccp")),
    (math.inf, 10, 0.0, ("pm", "ccp", "lp-inf")),
    (math.inf, 10, 0.01, ("pm", "ccp", "lp-inf")),
)


def agreement_instance(master_seed: int, k: int, sigma: float, m: int = 64, n: int = 256):
    """The instance used for one agreement case: replication 0 of the sweep seeds."""
    spec = EnsembleSpec(EnsembleKind.GAUSSIAN, m, n)
    return instance(spec, k, row_seed(master_seed, k, 0), sigma)


def run_agreement(
    master_seed: int = 0,
    cases=AGREEMENT_CASES,
    options: SolverOptions = SolverOptions(),
    m: int = 64,
    n: int = 256,
) -> dict:
    """Solve each case with each of its methods and compare the solutions.

    Returns ``{"rows": [...], "pairs": [...]}``: per-method relative error,
    termination and wall time, and per-pair relative differences
    ``||x_a - x_b|| / ||x_b||``.
    """
    rows, pairs = [], []
    for q, k, sigma, methods in cases:
        (a, y, eta), truth = agreement_instance(master_seed, k, sigma, m, n)
        problem = RecoveryProblem(a, y, eta, q)
        sols = {}
        for method in methods:
            rep = solve(problem, method, options)
            sols[method] = rep.solution
            rows.append(
                {
                    "q": q,
                    "k": k,
                    "sigma": sigma,
                    "method": method,
                    "relative_error": _relative_error(rep.solution, truth.signal),
                    "termination": rep.termination.value,
                    "wall_time": rep.wall_time,
                }
            )
        for i, ma in enumerate(methods):
            for mb in methods[i + 1 :]:
                xb = sols[mb]
                denom = float(np.linalg.norm(xb)) or 1.0
                pairs.append(
                    {
                        "q": q,
                        "k": k,
                        "sigma": sigma,
                        "pair": f"{ma}-{mb}",
                        "relative_difference": float(np.linalg.norm(sols[ma] - xb)) / denom,
                    }
                )
    return {"rows": rows, "pairs": pairs}


# ---------------------------------------------------------------------------
# Constrained versus kernel ratio


def run_ratio_study(
    ensemble: EnsembleSpec,
    sparsities: Sequence[int],
    q: float,
    matrices: int,
    master_seed: int = 0,
    restarts: int = 50,
    options: SolverOptions = SolverOptions(),
) -> list[dict]:
    """Compare ``min ||z||_1/||z||_q`` over ``{A z = A x}`` with the kernel infimum.

    Matrix ``r`` uses the seed ``derive_seed(master_seed, r)`` and its
    ``k``-sparse signal ``derive_seed(master_seed, r, k)``. The kernel value
    is computed once per matrix. Each row holds the matrix index, ``k``,
    both ratios and their difference; a row whose solve raised keeps NaN
    values and the error text.
    """
    rows = []
    for r in range(matrices):
        a = make_matrix(replace(ensemble, seed=derive_seed(master_seed, r)))
        kernel = kernel_ratio_search(a, q, restarts, derive_seed(master_seed, r, 0)).value
        for k in sorted(int(k) for k in sparsities):
            x = sparse_signal(ensemble.N, k, derive_seed(master_seed, r, k)).signal
            try:
                constrained, _ = ratio_comparison(a, x, q, kernel_inf=kernel, options=options)
                note = ""
            except Exception as exc:  # recorded, never fatal
                constrained, note = math.nan, f"error: {type(exc).__name__}: {exc}"
            rows.append(
                {
                    "matrix": r,
                    "k": k,
                    "constrained": constrained,
                    "kernel": kernel,
                    "gap": constrained - kernel,
                    "note": note,
                }
            )
    return rows


# ---------------------------------------------------------------------------
# Toy instance and compressible signal


TOY_Q = (0.5, 1.5, 2.0, math.inf)


def toy_grid() -> np.ndarray:
    """``t = -5, -4.99, ..., 15`` computed as ``i/100 - 5`` so integers are exact."""
    return np.arange(2001) / 100.0 - 5.0


def local_minimizers(t: np.ndarray, values: np.ndarray) -> list[float]:
    """Grid points strictly lower than both neighbours."""
    inner = (values[1:-1] < values[:-2]) & (values[1:-1] < values[2:])
    return [float(v) for v in t[1:-1][inner]]


def run_toy_scan(q_values=TOY_Q, with_dca: bool = True) -> dict:
    """Objective landscape along ``z(t) = (t, t, t, 20-2t, 40-4t, 2(t-9))``.

    Returns the sparsity table ``s_q(z(t))`` per q, its local minimisers,
    ``||z||_0`` at the candidate points, ``lam_bar = ||z*||_2/||z*||_1`` at
    the global minimiser ``z*`` of ``s_2`` on the grid, the parametric
    table ``lam ||z(t)||_1 - ||z(t)||_2`` for ``lam in {0.5, lam_bar, 1}``
    and ``F`` at those ``lam`` both exactly and at the DCA limit.
    """
    t = toy_grid()
    zs = np.array([toy_solution(v) for v in t])
    sparsity = {}
    minimizers = {}
    for q in q_values:
        vals = np.array([q_ratio_sparsity(z, q).value for z in zs])
        sparsity[q] = vals
        minimizers[q] = local_minimizers(t, vals)
    s2 = sparsity.get(2.0)
    if s2 is None:
        s2 = np.array([q_ratio_sparsity(z, 2.0).value for z in zs])
    t_star = float(t[int(np.argmin(s2))])
    z_star = toy_solution(t_star)
    lam_bar = float(np.linalg.norm(z_star) / np.sum(np.abs(z_star)))
    lams = (0.5, lam_bar, 1.0)
    l1 = np.abs(zs).sum(axis=1)
    l2 = np.linalg.norm(zs, axis=1)
    parametric = {lam: lam * l1 - l2 for lam in lams}
    problem = toy_problem(0.0, 2.0)
    f_exact = {lam: f_value(problem, lam, "exact") for lam in lams}
    f_dca = {lam: f_value(problem, lam, "dca") for lam in lams} if with_dca else {}
    support = {v: support_size(toy_solution(v)) for v in (0.0, 9.0, 10.0)}
    return {
        "t": t,
        "sparsity": sparsity,
        "minimizers": minimizers,
        "global_minimizer": t_star,
        "support_sizes": support,
        "lambda_bar": lam_bar,
        "lambdas": lams,
        "parametric": parametric,
        "f_exact": f_exact,
        "f_dca": f_dca,
    }


def power_law_sparsity_profile(n: int = 50, p: float = 2.0, q_values=(0.0, 1.0, 1.5, 2.0, math.inf)) -> dict:
    """The power-law signal ``i^-p`` and its q-ratio sparsities."""
    x = compressible_signal(n, p)
    return {"signal": x, "sparsity": {q: q_ratio_sparsity(x, q).value for q in q_values}}


# ---------------------------------------------------------------------------
# Output


def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            return ""
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    return str(v)


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_fmt(v) for v in r])
    return buf.getvalue()


def rows_csv(rows: Sequence[ResultRow]) -> str:
    return _csv(
        ["method", "q", "k", "replication", "seed", "relative_error", "success", "termination"],
        [(r.method, r.q, r.k, r.replication, r.seed, r.relative_error, r.success, r.termination) for r in rows],
    )


def timings_csv(rows: Sequence[ResultRow]) -> str:
    return _csv(
        ["method", "q", "k", "replication", "wall_time"],
        [(r.method, r.q, r.k, r.replication, r.wall_time) for r in rows],
    )


def summary_csv(summary: Sequence[dict]) -> str:
    keys = ["method", "q", "k", "trials", "successes", "success_rate"]
    return _csv(keys, [[s[k] for k in keys] for s in summary])


def toy_csvs(scan: dict) -> dict:
    qs = list(scan["sparsity"])
    sparsity = _csv(
        ["t"] + [f"s_{format_q(q)}" for q in qs],
        [[t] + [scan["sparsity"][q][i] for q in qs] for i, t in enumerate(scan["t"])],
    )
    lams = scan["lambdas"]
    parametric = _csv(
        ["t"] + [f"lambda_{format_q(lam)}" for lam in lams],
        [[t] + [scan["parametric"][lam][i] for lam in lams] for i, t in enumerate(scan["t"])],
    )
    fvals = _csv(
        ["lambda", "f_exact", "f_dca"],
        [[lam, scan["f_exact"][lam], scan["f_dca"].get(lam, math.nan)] for lam in lams],
    )
    minim = _csv(
        ["q", "local_minimizers"],
        [[q, " ".join(_fmt(v) for v in scan["minimizers"][q])] for q in qs],
    )
    return {
        "toy_sparsity.csv": sparsity,
        "toy_parametric.csv": parametric,
        "toy_f_values.csv": fvals,
        "toy_minimizers.csv": minim,
    }


def versions() -> dict:
    from importlib.metadata import version

    import scipy

    from . import __version__

    return {
        "qratio": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "highspy": version("highspy"),
    }


def meta(spec: Optional[ExperimentSpec], full: bool, extra: Optional[dict] = None) -> dict:
    out = {
        "config": spec.to_dict() if spec is not None else None,
        "full_size": bool(full),
        "master_seed": spec.master_seed if spec is not None else None,
        "rng": RNG_ALGORITHM,
        "seed_derivation": "numpy SeedSequence(master_seed, spawn_key=(k, replication)); "
        "matrix/signal/noise use spawn keys 0/1/2 of the row seed",
        "noise_model": "i.i.d. N(0, sigma^2) entries; eta = norm of the realised noise",
        "versions": versions(),
    }
    if extra:
        out.update(extra)
    return out


def write_outputs(out_dir: str, files: dict) -> list[str]:
    """Write ``{name: text}`` into ``out_dir``; returns the written paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = []
    for name, text in sorted(files.items()):
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        paths.append(path)
    return paths


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, default=_fmt) + "\n"


def run_bench(spec: ExperimentSpec, out_dir: str, *, full: bool = False, threads: int = 1,
              options: SolverOptions = SolverOptions()) -> list[str]:
    """Run the experiment named by ``spec.experiment`` and write its outputs."""
    if full:
        spec = spec.at_full_size()
    if spec.experiment == "toy":
        scan = run_toy_scan()
        files = toy_csvs(scan)
        files["meta.json"] = _json(meta(spec, full, {"lambda_bar": scan["lambda_bar"]}))
        return write_outputs(out_dir, files)
    if spec.experiment == "ratio":
        rows = run_ratio_study(
            spec.ensemble, spec.sparsity_grid, spec.q_grid[0], spec.replications, spec.master_seed, options=options
        )
        keys = ["matrix", "k", "constrained", "kernel", "gap", "note"]
        files = {
            "rows.csv": _csv(keys, [[r[k] for k in keys] for r in rows]),
            "summary.csv": _csv(
                ["rows", "below_kernel"],
                [[len(rows), sum(r["constrained"] <= r["kernel"] + 1e-4 for r in rows)]],
            ),
            "meta.json": _json(meta(spec, full)),
        }
        return write_outputs(out_dir, files)
    if spec.experiment == "agreement":
        ens = spec.ensemble
        res = run_agreement(spec.master_seed, options=options, m=ens.m, n=ens.N)
        files = {
            "rows.csv": _csv(
                ["q", "k", "sigma", "method", "relative_error", "termination"],
                [[r["q"], r["k"], r["sigma"], r["method"], r["relative_error"], r["termination"]] for r in res["rows"]],
            ),
            "timings.csv": _csv(
                ["q", "k", "sigma", "method", "wall_time"],
                [[r["q"], r["k"], r["sigma"], r["method"], r["wall_time"]] for r in res["rows"]],
            ),
            "summary.csv": _csv(
                ["q", "k", "sigma", "pair", "relative_difference"],
                [[p["q"], p["k"], p["sigma"], p["pair"], p["relative_difference"]] for p in res["pairs"]],
            ),
            "meta.json": _json(meta(spec, full)),
        }
        return write_outputs(out_dir, files)
    rows, summary = run_phase_transition(spec, options, threads)
    files = {
        "rows.csv": rows_csv(rows),
        "summary.csv": summary_csv(summary),
        "timings.csv": timings_csv(rows),
        "meta.json": _json(meta(spec, full)),
    }
    return write_outputs(out_dir, files)
