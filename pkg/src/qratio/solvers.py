"""Outer algorithms for l1/lq ratio minimisation and the convex baselines.

* :func:`pm_solve` -- parametric root finding on ``F(lam)`` (Dinkelbach
  update), each ``Q(lam)`` solved by the DCA of :func:`dca_solve_Q`.
* :func:`ccp_solve` -- convex-concave procedure on the normalised variable
  ``v = z/||z||_1``, ``t = 1/||z||_1``.
* :func:`lp_solve_linf` -- exact ``q = inf`` solver through a family of
  linear programs (second-order cone programs when ``eta > 0``).
* :func:`bpdn_solve` and :func:`l1_minus_l2_solve` -- baselines.

Every routine takes a :class:`~qratio.model.RecoveryProblem` and returns a
:class:`~qratio.model.SolveReport`; numerical knobs live in
:class:`SolverOptions`.
"""

from __future__ import annotations

import itertools
import math
import time
from dataclasses import asdict, dataclass, field, replace
from typing import Optional

import numpy as np

from .conic import ConicEngine, ConicStatus, ConicSubproblem, ConicTolerances
from .model import (
    RecoveryProblem,
    SolveReport,
    Termination,
    as_signal,
    format_q,
    l1_norm,
    lq_norm,
)

__all__ = [
    "CcpState",
    "METHODS",
    "ParametricState",
    "QSolution",
    "SolverOptions",
    "bpdn_solve",
    "ccp_solve",
    "dca_solve_Q",
    "f_value",
    "l1_minus_l2_solve",
    "lp_solve_linf",
    "lq_subgradient",
    "pm_solve",
    "ratio",
    "solve",
]


@dataclass(frozen=True)
class SolverOptions:
    """Numerical settings shared by the outer algorithms.

    ``cap_factor`` is the multiplier ``kappa`` in the l1 cap
    ``a = kappa * ||x_bpdn||_1``; CCP uses ``t >= 1/a`` and PM bounds each
    ``Q(lam)`` by ``||z||_1 <= a`` so that it stays bounded below.
    ``lambda_init`` is ``"zero"`` (start at ``lam = 0``) or ``"feasible"``
    (start at the ratio of the BPDN point). ``lp_formulation`` is
    ``"signed"`` (``2N`` programs, each maximising one signed coordinate) or
    ``"joint"`` (``N`` programs maximising ``v_i^+ + v_i^-`` on the
    augmented matrix). ``box`` adds ``|z_i| <= box`` to BPDN and to each
    DCA subproblem of the parametric method; it is off by default.
    """

    delta: float = 1e-5
    dca_max_iter: int = 100
    dca_tol: float = 1e-8
    pm_max_outer: int = 50
    lambda_init: str = "zero"
    ccp_max_iter: int = 100
    ccp_tol: float = 1e-8
    cap_factor: float = 100.0
    cap: Optional[float] = None
    lp_formulation: str = "signed"
    conic_method: str = "auto"
    conic: ConicTolerances = field(default_factory=ConicTolerances)
    polish: bool = True
    box: Optional[float] = None

    def __post_init__(self):
        if not self.delta > 0:
            raise ValueError(f"delta must be > 0, got {self.delta}")
        if not self.cap_factor >= 1:
            raise ValueError(f"cap factor must be >= 1, got {self.cap_factor}")
        if self.box is not None and not self.box > 0:
            raise ValueError(f"box must be > 0, got {self.box}")
        if self.cap is not None and not self.cap > 0:
            raise ValueError(f"cap must be > 0, got {self.cap}")
        if self.lambda_init not in ("zero", "feasible"):
            raise ValueError(f"unknown lambda_init {self.lambda_init!r}")
        if self.lp_formulation not in ("signed", "joint"):
            raise ValueError(f"unknown lp_formulation {self.lp_formulation!r}")
        if self.dca_max_iter < 1 or self.ccp_max_iter < 1 or self.pm_max_outer < 1:
            raise ValueError("iteration limits must be >= 1")

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class ParametricState:
    lam: float
    f_value: float
    iterate: np.ndarray
    delta: float
    history: list = field(default_factory=list)


@dataclass
class CcpState:
    v: np.ndarray
    t: float
    t0: float
    a: float
    objective_trace: list = field(default_factory=list)


@dataclass
class QSolution:
    """Result of one DCA run on ``Q(lam)``; unpacks as ``(point, f_value)``."""

    point: np.ndarray
    f_value: float
    iterations: int
    status: ConicStatus
    objective_trace: list
    cap_active: bool = False

    def __iter__(self):
        yield self.point
        yield self.f_value


# ---------------------------------------------------------------------------
# Small helpers


def ratio(z, q: float) -> float:
    """``||z||_1 / ||z||_q``; NaN at the zero vector."""
    nq = lq_norm(z, q)
    return l1_norm(z) / nq if nq > 0 else math.nan


def lq_subgradient(v, q: float) -> np.ndarray:
    """A (sub)gradient of ``||.||_q`` at ``v != 0``.

    Finite ``q``: ``||v||_q^(1-q) |v|^(q-1) sign(v)``, evaluated on
    ``v/||v||_inf`` so large ``q`` cannot overflow. ``q = inf``:
    ``sign(v_j) e_j`` with ``j`` the smallest index attaining the maximum.
    """
    v = as_signal(v)
    peak = float(np.max(np.abs(v)))
    if peak == 0:
        raise ValueError("subgradient of the lq norm is undefined at zero")
    g = np.zeros_like(v)
    if math.isinf(q):
        j = int(np.argmax(np.abs(v)))
        g[j] = np.sign(v[j])
        return g
    if not q > 1:
        raise ValueError(f"q must exceed 1, got {q}")
    u = np.abs(v) / peak
    nq = lq_norm(u, q)
    return (u / nq) ** (q - 1) * np.sign(v)


def _tolerances(options: SolverOptions) -> ConicTolerances:
    return options.conic


def _zero_report(problem, method, termination, t0, options, **extra) -> SolveReport:
    n = problem.shape[1]
    return SolveReport(
        method=method,
        q=problem.q,
        solution=np.zeros(n),
        objective_value=math.nan,
        residual_norm=float(np.linalg.norm(problem.measurements)),
        outer_iterations=0,
        inner_iterations=0,
        termination=termination,
        wall_time=time.perf_counter() - t0,
        notes=list(extra.pop("notes", [])),
        config=_config(options, problem, **extra),
    )


def _config(options, problem, **extra) -> dict:
    cfg = options.to_dict()
    cfg.update(
        q=format_q(problem.q),
        noise_bound=problem.noise_bound,
        shape=list(problem.shape),
    )
    cfg.update(extra)
    return cfg


def _degenerate(problem: RecoveryProblem) -> bool:
    return float(np.linalg.norm(problem.measurements)) <= problem.noise_bound


def _polish(problem: RecoveryProblem, x: np.ndarray) -> np.ndarray:
    """Pull ``x`` onto ``||A x - y|| <= eta`` with a minimum-norm correction.

    Only acts when a first-order inner solve left a violation; the
    correction has the size of that violation.
    """
    a, y, eta = problem.matrix, problem.measurements, problem.noise_bound
    r = a @ x - y
    nr = float(np.linalg.norm(r))
    if nr <= eta:
        return x
    target = r * (eta / nr) if nr > 0 else r
    dx, *_ = np.linalg.lstsq(a, target - r, rcond=None)
    return x + dx


def _finish(
    problem, method, x, t0, options, *, outer, inner, termination, history, notes, **cfg
) -> SolveReport:
    if options.polish and options.box is None and termination is not Termination.INFEASIBLE:
        x = _polish(problem, x)
    return SolveReport(
        method=method,
        q=problem.q,
        solution=x,
        objective_value=ratio(x, problem.q),
        residual_norm=problem.residual_norm(x),
        outer_iterations=outer,
        inner_iterations=inner,
        termination=termination,
        wall_time=time.perf_counter() - t0,
        history=history,
        notes=notes,
        config=_config(options, problem, **cfg),
    )


def _residual_engine(problem, options, *, l1_radius=None, scaled=False, t_min=None):
    bounds = {}
    if options.box is not None and not scaled:
        n = problem.shape[1]
        bounds = {"lower": np.full(n, -options.box), "upper": np.full(n, options.box)}
    sub = ConicSubproblem(
        l1_weight=1.0,
        matrix=problem.matrix,
        measurements=problem.measurements,
        noise_bound=problem.noise_bound,
        scaled=scaled,
        t_min=t_min,
        l1_radius=l1_radius,
        tolerances=_tolerances(options),
        **bounds,
    )
    return ConicEngine(sub, options.conic_method)


def _bpdn_point(problem, options):
    sol = _residual_engine(problem, options).solve(l1_weight=1.0)
    return sol


def _cap(problem, options, x_bpdn) -> float:
    if options.cap is not None:
        return float(options.cap)
    return options.cap_factor * l1_norm(x_bpdn)


# ---------------------------------------------------------------------------
# Baselines


def bpdn_solve(problem: RecoveryProblem, options: SolverOptions = SolverOptions()) -> SolveReport:
    """Basis pursuit denoising: ``min ||z||_1`` s.t. ``||A z - y||_2 <= eta``."""
    t0 = time.perf_counter()
    if _degenerate(problem):
        return _zero_report(problem, "bpdn", Termination.DEGENERATE_ZERO, t0, options)
    sol = _bpdn_point(problem, options)
    if sol.status is ConicStatus.INFEASIBLE:
        return _zero_report(problem, "bpdn", Termination.INFEASIBLE, t0, options)
    term = Termination.CONVERGED if sol.status is ConicStatus.OPTIMAL else Termination.MAX_ITERATIONS
    return _finish(
        problem,
        "bpdn",
        sol.point,
        t0,
        options,
        outer=1,
        inner=sol.iterations,
        termination=term,
        history={},
        notes=[],
    )


# ---------------------------------------------------------------------------
# DCA on Q(lam)


def dca_solve_Q(
    problem: RecoveryProblem,
    lam: float,
    options: SolverOptions = SolverOptions(),
    *,
    cap: Optional[float] = None,
    engine: Optional[ConicEngine] = None,
    x0=None,
) -> QSolution:
    """DCA for ``Q(lam): min lam ||z||_1 - ||z||_q`` over the feasible set.

    Starts from ``x0`` (default the zero vector). From ``x = 0`` the step
    minimises ``lam ||z||_1`` alone, which is the BPDN point for every
    ``lam >= 0`` (the ``lam -> 0+`` limit when ``lam = 0``). Otherwise the
    concave part is linearised at ``x`` and ``lam ||z||_1 - g^T z`` is
    minimised, ``g`` from :func:`lq_subgradient`. Stops when
    ``||x+ - x|| / max(||x||, 1) < dca_tol`` or after ``dca_max_iter``
    steps. ``cap`` adds ``||z||_1 <= cap``. Returns the last iterate and
    ``F = lam ||x||_1 - ||x||_q`` there.
    """
    if not lam >= 0:
        raise ValueError(f"lambda must be >= 0, got {lam}")
    q = problem.q
    if engine is None:
        engine = _residual_engine(problem, options, l1_radius=cap)
    n = problem.shape[1]
    x = np.zeros(n) if x0 is None else as_signal(x0).copy()
    trace = []
    last = None
    status = ConicStatus.OPTIMAL
    it = 0
    for it in range(1, options.dca_max_iter + 1):
        if not np.any(x):
            sol = engine.solve(linear=np.zeros(n), l1_weight=1.0, warm_start=last)
        else:
            g = lq_subgradient(x, q)
            sol = engine.solve(linear=g, l1_weight=lam, warm_start=last)
        if sol.status is ConicStatus.INFEASIBLE:
            return QSolution(x, math.nan, it, sol.status, trace)
        if sol.status is ConicStatus.UNBOUNDED:
            return QSolution(x, -math.inf, it, sol.status, trace)
        last = sol
        x_new = sol.point
        trace.append(lam * l1_norm(x_new) - lq_norm(x_new, q))
        step = float(np.linalg.norm(x_new - x)) / max(float(np.linalg.norm(x)), 1.0)
        x = x_new
        if sol.status is not ConicStatus.OPTIMAL:
            status = sol.status
        if step < options.dca_tol:
            break
    else:
        status = ConicStatus.MAX_ITER if status is ConicStatus.OPTIMAL else status
    f = lam * l1_norm(x) - lq_norm(x, q)
    cap_active = cap is not None and l1_norm(x) >= cap * (1 - 1e-6)
    return QSolution(x, f, it, status, trace, cap_active)


def _basic_solutions(problem: RecoveryProblem):
    """Points of ``{A z = y}`` with ``N - rank`` prescribed zero coordinates."""
    a, y = problem.matrix, problem.measurements
    n = a.shape[1]
    rank = np.linalg.matrix_rank(a)
    d = n - rank
    for zeros in itertools.combinations(range(n), d):
        keep = [j for j in range(n) if j not in zeros]
        sub = a[:, keep]
        if np.linalg.matrix_rank(sub) < rank or sub.shape[1] != rank:
            continue
        sol, *_ = np.linalg.lstsq(sub, y, rcond=None)
        if np.linalg.norm(sub @ sol - y) > 1e-9 * max(1.0, np.linalg.norm(y)):
            continue
        z = np.zeros(n)
        z[keep] = sol
        yield z


def _kernel_rays(a: np.ndarray):
    """Kernel vectors with ``d - 1`` prescribed zeros (extreme rays of orthant pieces)."""
    n = a.shape[1]
    rank = np.linalg.matrix_rank(a)
    d = n - rank
    for zeros in itertools.combinations(range(n), d - 1):
        keep = [j for j in range(n) if j not in zeros]
        sub = a[:, keep]
        _, s, vt = np.linalg.svd(sub)
        null = vt[np.sum(s > 1e-10 * max(s.max(), 1e-300)) :]
        if null.shape[0] != 1:
            continue
        h = np.zeros(n)
        h[keep] = null[0]
        yield h


def f_value(
    problem: RecoveryProblem,
    lam: float,
    method: str = "dca",
    options: SolverOptions = SolverOptions(),
    cap: Optional[float] = None,
) -> float:
    """``F(lam)``, the optimal value of ``Q(lam)``.

    ``method="dca"`` returns the value at the DCA limit point (an upper
    bound on ``F``). ``method="exact"`` enumerates basic solutions and is
    only available for noiseless problems with a small kernel: on each
    orthant ``lam ||z||_1 - ||z||_q`` is concave, so the minimum over the
    affine solution set is attained at a basic solution, or is ``-inf``
    when some kernel ray has ``||h||_q > lam ||h||_1``.
    """
    if method == "dca":
        return dca_solve_Q(problem, lam, options, cap=cap).f_value
    if method != "exact":
        raise ValueError(f"unknown method {method!r}")
    if problem.noise_bound != 0:
        raise ValueError("exact evaluation needs eta = 0")
    a, q = problem.matrix, problem.q
    d = a.shape[1] - np.linalg.matrix_rank(a)
    if math.comb(a.shape[1], d) > 200_000:
        raise ValueError("kernel too large for exact enumeration")
    if d > 0:
        for h in _kernel_rays(a):
            if lq_norm(h, q) > lam * l1_norm(h) * (1 + 1e-12):
                return -math.inf
    values = [lam * l1_norm(z) - lq_norm(z, q) for z in _basic_solutions(problem)]
    if not values:
        raise ValueError("the measurements are not in the range of the matrix")
    return float(min(values))


# ---------------------------------------------------------------------------
# Parametric method


def pm_solve(problem: RecoveryProblem, options: SolverOptions = SolverOptions()) -> SolveReport:
    """Parametric method: root of ``F`` by the update ``lam <- ||x||_q/||x||_1``.

    Each ``Q(lam)`` is solved by :func:`dca_solve_Q` from ``x = 0`` within
    the l1 cap ``a``. Stops once ``|F(lam)| <= delta``. The report history
    holds the ``(lam, F)`` sequence; a decrease of ``lam`` (the DCA limit
    was not a global minimiser of ``Q``) is recorded in ``notes``.
    """
    t0 = time.perf_counter()
    if _degenerate(problem):
        return _zero_report(problem, "pm", Termination.DEGENERATE_ZERO, t0, options)
    q = problem.q
    base = _bpdn_point(problem, options)
    if base.status is ConicStatus.INFEASIBLE:
        return _zero_report(problem, "pm", Termination.INFEASIBLE, t0, options)
    a = _cap(problem, options, base.point)
    engine = _residual_engine(problem, options, l1_radius=a)
    lam = 0.0 if options.lambda_init == "zero" else lq_norm(base.point, q) / l1_norm(base.point)
    state = ParametricState(lam=lam, f_value=math.nan, iterate=base.point, delta=options.delta)
    notes = []
    inner = 0
    best = base.point
    termination = Termination.MAX_ITERATIONS
    for outer in range(1, options.pm_max_outer + 1):
        res = dca_solve_Q(problem, lam, options, cap=a, engine=engine)
        inner += res.iterations
        if res.status is ConicStatus.INFEASIBLE:
            return _zero_report(problem, "pm", Termination.INFEASIBLE, t0, options, cap=a)
        x = res.point
        state.lam, state.f_value, state.iterate = lam, res.f_value, x
        state.history.append((lam, res.f_value))
        if res.cap_active and "l1 cap active" not in notes:
            notes.append("l1 cap active")
        if abs(res.f_value) <= options.delta:
            best = x
            termination = Termination.CONVERGED
            break
        lam_next = lq_norm(x, q) / l1_norm(x)
        if lam_next < lam:
            notes.append(f"non-monotone lambda at outer iteration {outer}")
            termination = Termination.CONVERGED
            break
        best = x
        lam = lam_next
    else:
        outer = options.pm_max_outer
    return _finish(
        problem,
        "pm",
        best,
        t0,
        options,
        outer=outer,
        inner=inner,
        termination=termination,
        history={
            "lambda": [h[0] for h in state.history],
            "f_value": [h[1] for h in state.history],
        },
        notes=notes,
        cap=a,
    )


# ---------------------------------------------------------------------------
# Convex-concave procedure


def ccp_solve(
    problem: RecoveryProblem,
    a: Optional[float] = None,
    options: SolverOptions = SolverOptions(),
) -> SolveReport:
    """Convex-concave procedure on ``max ||v||_q`` over the normalised set.

    The feasible set is ``{||t y - A v||_2 <= eta t, ||v||_1 <= 1, t >= 1/a}``
    and each step maximises the linearisation of ``||v||_q`` at the current
    ``v``. Starts from the BPDN point scaled to unit l1 norm. ``a``
    defaults to ``cap_factor * ||x_bpdn||_1``. Stops when the relative
    change of ``||v||_q`` falls below ``ccp_tol`` or after ``ccp_max_iter``
    steps. A step that lowers ``||v||_q`` (only possible through inner
    solver inexactness) is rejected and ends the run.
    """
    t_start = time.perf_counter()
    if _degenerate(problem):
        return _zero_report(problem, "ccp", Termination.DEGENERATE_ZERO, t_start, options)
    q = problem.q
    base = _bpdn_point(problem, options)
    if base.status is ConicStatus.INFEASIBLE:
        return _zero_report(problem, "ccp", Termination.INFEASIBLE, t_start, options)
    x0 = base.point
    if l1_norm(x0) == 0:
        return _zero_report(problem, "ccp", Termination.DEGENERATE_ZERO, t_start, options)
    if a is None:
        a = _cap(problem, options, x0)
    if not a > 0:
        raise ValueError(f"cap must be > 0, got {a}")
    t_min = 1.0 / a
    engine = _residual_engine(problem, options, l1_radius=1.0, scaled=True, t_min=t_min)
    v = x0 / l1_norm(x0)
    state = CcpState(v=v, t=1.0 / l1_norm(x0), t0=t_min, a=a, objective_trace=[lq_norm(v, q)])
    notes = []
    last = None
    termination = Termination.MAX_ITERATIONS
    k = 0
    for k in range(1, options.ccp_max_iter + 1):
        g = lq_subgradient(state.v, q)
        sol = engine.solve(linear=g, l1_weight=0.0, warm_start=last)
        if sol.status is ConicStatus.INFEASIBLE:
            return _zero_report(problem, "ccp", Termination.INFEASIBLE, t_start, options, a=a)
        last = sol
        prev = state.objective_trace[-1]
        cur = lq_norm(sol.point, q)
        if cur < prev:
            if prev - cur > 1e-12 * prev:
                notes.append(f"ascent step rejected at iteration {k}")
            termination = Termination.CONVERGED
            break
        state.v, state.t = sol.point, float(sol.t)
        state.objective_trace.append(cur)
        if abs(cur - prev) / max(prev, 1e-12) < options.ccp_tol:
            termination = Termination.CONVERGED
            break
    if state.t <= t_min * (1 + 1e-6):
        notes.append("l1 cap active")
    return _finish(
        problem,
        "ccp",
        state.v / state.t,
        t_start,
        options,
        outer=k,
        inner=k,
        termination=termination,
        history={"objective_trace": state.objective_trace},
        notes=notes,
        a=a,
    )


# ---------------------------------------------------------------------------
# q = inf through linear programs


def lp_solve_linf(problem: RecoveryProblem, options: SolverOptions = SolverOptions()) -> SolveReport:
    """Exact ``min ||z||_1/||z||_inf`` via one convex program per coordinate.

    On the normalised set of :func:`ccp_solve`, ``max ||v||_inf`` equals
    the largest of the ``2N`` values ``max s * v_i`` (``s = +-1``), each a
    linear program (a second-order cone program when ``eta > 0``). Among
    tied winners the smallest index ``i`` is kept and ``v/t`` returned.
    When ``eta > 0`` each cone program is first bounded by the linear
    program with the residual ball replaced by its enclosing box, and
    programs whose bound cannot beat the incumbent are skipped; their
    entries in ``history["values"]`` are NaN.
    With ``lp_formulation="joint"`` the ``N`` programs instead maximise
    ``v_i^+ + v_i^-`` over the augmented matrix ``(a_1..a_i, -a_i..a_N)``
    with both parts non-negative, and ``v_i`` is recombined after
    subtracting ``min(v_i^+, v_i^-)`` from both parts. That objective can
    grow both parts together, so this form is not exact; it is kept for
    comparison with the signed form.
    """
    t_start = time.perf_counter()
    if not math.isinf(problem.q):
        raise ValueError("lp_solve_linf needs q = inf")
    if _degenerate(problem):
        return _zero_report(problem, "lp-inf", Termination.DEGENERATE_ZERO, t_start, options)
    base = _bpdn_point(problem, options)
    if base.status is ConicStatus.INFEASIBLE:
        return _zero_report(problem, "lp-inf", Termination.INFEASIBLE, t_start, options)
    a = _cap(problem, options, base.point)
    if options.lp_formulation == "signed":
        best, count, iters, values = _linf_signed(problem, options, a)
    else:
        best, count, iters, values = _linf_joint(problem, options, a)
    if best is None:
        return _zero_report(problem, "lp-inf", Termination.INFEASIBLE, t_start, options, a=a)
    value, i, v, t, status = best
    termination = Termination.CONVERGED if status is ConicStatus.OPTIMAL else Termination.MAX_ITERATIONS
    notes = ["l1 cap active"] if t <= (1.0 / a) * (1 + 1e-6) else []
    return _finish(
        problem,
        "lp-inf",
        v / t,
        t_start,
        options,
        outer=count,
        inner=iters,
        termination=termination,
        history={"winner": i, "values": values},
        notes=notes,
        a=a,
    )


def _better(value, best, i) -> bool:
    if best is None:
        return True
    tie = 1e-12 * max(1.0, abs(best[0]))
    if value > best[0] + tie:
        return True
    return value >= best[0] - tie and i < best[1]


def _linf_signed(problem, options, a):
    # max ||v||_inf = max over (i, s) of max s * v_i, so no sign constraint
    # is needed and consecutive programs differ only in their cost vector
    n = problem.shape[1]
    engine = _residual_engine(problem, options, l1_radius=1.0, scaled=True, t_min=1.0 / a)
    order = [(sign, i) for sign in (1.0, -1.0) for i in range(n)]
    bounds = None
    if not engine.problem.is_linear:
        # the box relaxation bounds every cone program from above; visiting
        # programs by decreasing bound lets the rest be skipped once the
        # incumbent beats their bound
        relax = ConicEngine(replace(engine.problem, residual_box=True), "simplex")
        bounds = {}
        for sign, i in order:
            c = np.zeros(n)
            c[i] = sign
            sol = relax.solve(linear=c, l1_weight=0.0)
            bounds[sign, i] = -math.inf if sol.status is ConicStatus.INFEASIBLE else float(sign * sol.point[i])
        order.sort(key=lambda si: -bounds[si])
    best, iters, last = None, 0, None
    values = dict.fromkeys(((s, i) for s in (1.0, -1.0) for i in range(n)), math.nan)
    count = 0
    for sign, i in order:
        if bounds is not None and best is not None:
            if bounds[sign, i] < best[0] - 1e-12 * max(1.0, abs(best[0])):
                break
        c = np.zeros(n)
        c[i] = sign
        sol = engine.solve(linear=c, l1_weight=0.0, warm_start=last)
        count += 1
        iters += sol.iterations
        if sol.status in (ConicStatus.INFEASIBLE, ConicStatus.UNBOUNDED):
            continue
        last = sol
        value = float(sign * sol.point[i])
        values[sign, i] = value
        if _better(value, best, i):
            best = (value, i, sol.point.copy(), float(sol.t), sol.status)
    return best, count, iters, list(values.values())


def _linf_joint(problem, options, a):
    mat, y = problem.matrix, problem.measurements
    n = mat.shape[1]
    best, iters, values = None, 0, []
    for i in range(n):
        aug = np.hstack([mat[:, : i + 1], -mat[:, i : i + 1], mat[:, i + 1 :]])
        lower = np.full(n + 1, -np.inf)
        lower[i] = lower[i + 1] = 0.0
        c = np.zeros(n + 1)
        c[i] = c[i + 1] = 1.0
        sub = ConicSubproblem(
            l1_weight=0.0,
            linear=c,
            matrix=aug,
            measurements=y,
            noise_bound=problem.noise_bound,
            scaled=True,
            t_min=1.0 / a,
            l1_radius=1.0,
            lower=lower,
            tolerances=options.conic,
        )
        sol = ConicEngine(sub, options.conic_method).solve()
        iters += sol.iterations
        if sol.status in (ConicStatus.INFEASIBLE, ConicStatus.UNBOUNDED):
            values.append(math.nan)
            continue
        w = sol.point.copy()
        common = min(w[i], w[i + 1])
        w[i] -= common
        w[i + 1] -= common
        v = np.concatenate([w[:i], [w[i] - w[i + 1]], w[i + 2 :]])
        values.append(float(c @ sol.point))
        # the program value counts both parts, so candidates are ranked by
        # the recombined ||v||_inf/||v||_1 instead
        value = float(np.max(np.abs(v)) / np.sum(np.abs(v))) if np.any(v) else 0.0
        if _better(value, best, i):
            best = (value, i, v, float(sol.t), sol.status)
    return best, n, iters, values


# ---------------------------------------------------------------------------
# l1 - l2


def l1_minus_l2_solve(problem: RecoveryProblem, options: SolverOptions = SolverOptions()) -> SolveReport:
    """The l1 - l2 baseline: a single DCA run on ``Q(1)`` with ``q = 2``."""
    if problem.q != 2:
        raise ValueError(f"the l1 - l2 baseline is defined for q = 2 only, got {problem.q}")
    t0 = time.perf_counter()
    if _degenerate(problem):
        return _zero_report(problem, "l1l2", Termination.DEGENERATE_ZERO, t0, options)
    res = dca_solve_Q(problem, 1.0, options)
    if res.status is ConicStatus.INFEASIBLE:
        return _zero_report(problem, "l1l2", Termination.INFEASIBLE, t0, options)
    term = Termination.CONVERGED if res.status is ConicStatus.OPTIMAL else Termination.MAX_ITERATIONS
    return _finish(
        problem,
        "l1l2",
        res.point,
        t0,
        options,
        outer=1,
        inner=res.iterations,
        termination=term,
        history={"objective_trace": res.objective_trace},
        notes=[],
    )


METHODS = ("pm", "ccp", "lp-inf", "bpdn", "l1l2")


def solve(problem: RecoveryProblem, method: str, options: SolverOptions = SolverOptions(), **kw) -> SolveReport:
    """Dispatch on a method name from :data:`METHODS`."""
    if method == "pm":
        return pm_solve(problem, options)
    if method == "ccp":
        return ccp_solve(problem, kw.get("a"), options)
    if method == "lp-inf":
        return lp_solve_linf(problem, options)
    if method == "bpdn":
        return bpdn_solve(problem, options)
    if method == "l1l2":
        return l1_minus_l2_solve(problem, options)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")
