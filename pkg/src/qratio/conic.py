"""Convex subproblem engine shared by every outer algorithm.

A :class:`ConicSubproblem` minimises ``lam * ||v||_1 - c^T v`` over any
combination of

* a residual constraint ``||A v - y||_2 <= eta``, or its scaled form
  ``||t y - A v||_2 <= eta t`` over the joint variable ``(v, t)`` with
  ``t >= t_min``;
* an l1 ball ``||v||_1 <= r``;
* coordinate bounds ``lower <= v <= upper``.

Two backends implement it. Problems without a genuine cone (no residual,
or ``eta = 0`` where the residual is an affine equality) are linear
programs and go to the HiGHS dual simplex, which returns vertex solutions
and can be re-solved cheaply after cost or bound changes. Everything else
goes to a relaxed ADMM built from the exact projections in this module.
Either backend can be forced with ``method=``; the ADMM path accepts every
problem, which is how the two are cross-checked.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Optional

import highspy
import numpy as np
import scipy.linalg

__all__ = [
    "ConicEngine",
    "ConicSolution",
    "ConicStatus",
    "ConicSubproblem",
    "ConicTolerances",
    "constraint_violation",
    "project_l1_ball",
    "project_soc",
    "solve_lp",
    "solve_subproblem",
]


def project_l1_ball(z, r: float) -> np.ndarray:
    """Euclidean projection of ``z`` onto ``{v : ||v||_1 <= r}``.

    Soft-thresholds at the unique ``tau >= 0`` with
    ``sum(max(|z_i| - tau, 0)) = r``, found by a stable sort of the
    magnitudes (ties keep index order).
    """
    if not r > 0:
        raise ValueError(f"radius must be > 0, got {r}")
    z = np.asarray(z, dtype=float)
    mag = np.abs(z)
    if mag.sum() <= r:
        return z.copy()
    order = np.argsort(-mag, kind="stable")
    u = mag[order]
    css = np.cumsum(u)
    idx = np.arange(1, u.size + 1)
    active = u - (css - r) / idx > 0
    rho = int(np.nonzero(active)[0][-1])
    tau = (css[rho] - r) / (rho + 1)
    return np.sign(z) * np.maximum(mag - tau, 0.0)


def project_soc(u, s: float) -> tuple[np.ndarray, float]:
    """Euclidean projection of ``(u, s)`` onto ``{(u, s) : ||u||_2 <= s}``."""
    u = np.asarray(u, dtype=float)
    nu = float(np.linalg.norm(u))
    if nu <= s:
        return u.copy(), float(s)
    if nu <= -s:
        return np.zeros_like(u), 0.0
    alpha = 0.5 * (s + nu)
    return (alpha / nu) * u, alpha


# ---------------------------------------------------------------------------
# Problem and solution containers


@dataclass(frozen=True)
class ConicTolerances:
    feasibility: float = 1e-7
    objective: float = 1e-7
    max_iterations: int = 20000


class ConicStatus(str, enum.Enum):
    OPTIMAL = "optimal"
    MAX_ITER = "max_iter"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class ConicSubproblem:
    """``min lam ||v||_1 - c^T v`` subject to the constraints that are set.

    ``matrix`` and ``measurements`` together switch on the residual
    constraint; with ``scaled=True`` the variable is ``(v, t)``, the
    constraint is the second-order cone ``||t y - A v||_2 <= eta t`` and
    ``t_min`` bounds ``t`` from below. ``residual_box=True`` replaces the
    l2 residual ball by the enclosing box ``||.||_inf <= eta`` (``eta t``
    when scaled), a linear outer relaxation. ``size`` is only needed when
    no other field determines the length of ``v``.
    """

    l1_weight: float = 0.0
    linear: Optional[np.ndarray] = None
    matrix: Optional[np.ndarray] = None
    measurements: Optional[np.ndarray] = None
    noise_bound: float = 0.0
    scaled: bool = False
    t_min: Optional[float] = None
    l1_radius: Optional[float] = None
    lower: Optional[np.ndarray] = None
    upper: Optional[np.ndarray] = None
    size: Optional[int] = None
    tolerances: ConicTolerances = field(default_factory=ConicTolerances)
    residual_box: bool = False

    def __post_init__(self):
        n = self._infer_size()
        object.__setattr__(self, "size", n)
        if not self.l1_weight >= 0:
            raise ValueError(f"l1 weight must be >= 0, got {self.l1_weight}")
        lin = np.zeros(n) if self.linear is None else np.asarray(self.linear, float)
        if lin.shape != (n,):
            raise ValueError(f"linear term must have length {n}")
        object.__setattr__(self, "linear", lin)
        has_residual = self.matrix is not None
        if has_residual:
            a = np.asarray(self.matrix, float)
            if self.measurements is None:
                raise ValueError("matrix given without measurements")
            y = np.asarray(self.measurements, float)
            if a.ndim != 2 or a.shape != (y.shape[0], n):
                raise ValueError("matrix/measurement shapes are inconsistent")
            if not self.noise_bound >= 0:
                raise ValueError(f"noise bound must be >= 0, got {self.noise_bound}")
            object.__setattr__(self, "matrix", a)
            object.__setattr__(self, "measurements", y)
        if self.scaled:
            if not has_residual:
                raise ValueError("the scaled cone needs a matrix and measurements")
            if self.t_min is None or not self.t_min > 0:
                raise ValueError("the scaled cone needs t_min > 0")
        if self.l1_radius is not None and not self.l1_radius > 0:
            raise ValueError(f"l1 radius must be > 0, got {self.l1_radius}")
        lo = np.full(n, -np.inf) if self.lower is None else np.asarray(self.lower, float)
        hi = np.full(n, np.inf) if self.upper is None else np.asarray(self.upper, float)
        if lo.shape != (n,) or hi.shape != (n,) or np.any(lo > hi):
            raise ValueError("coordinate bounds are malformed")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        bounded = bool(np.any(np.isfinite(lo)) or np.any(np.isfinite(hi)))
        if not (has_residual or self.l1_radius is not None or bounded):
            raise ValueError("a subproblem needs at least one constraint")

    def _infer_size(self) -> int:
        for arr in (self.linear, self.lower, self.upper):
            if arr is not None:
                return int(np.asarray(arr).shape[0])
        if self.matrix is not None:
            return int(np.asarray(self.matrix).shape[1])
        if self.size is not None:
            return int(self.size)
        raise ValueError("cannot infer the variable size")

    @property
    def has_residual(self) -> bool:
        return self.matrix is not None

    @property
    def is_linear(self) -> bool:
        return not self.has_residual or self.noise_bound == 0.0 or self.residual_box

    def objective(self, v) -> float:
        return float(self.l1_weight * np.sum(np.abs(v)) - self.linear @ v)


@dataclass
class ConicSolution:
    point: np.ndarray
    t: Optional[float]
    objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    status: ConicStatus
    violation: float = 0.0
    method: str = ""
    _state: Optional[dict] = field(default=None, repr=False, compare=False)


def constraint_violation(p: ConicSubproblem, v, t=None) -> float:
    """Largest absolute violation of any constraint of ``p`` at ``(v, t)``."""
    v = np.asarray(v, float)
    worst = max(
        0.0,
        float(np.max(p.lower - v, initial=0.0)),
        float(np.max(v - p.upper, initial=0.0)),
    )
    if p.l1_radius is not None:
        worst = max(worst, float(np.sum(np.abs(v))) - p.l1_radius)
    if p.has_residual:
        norm = (lambda r: float(np.max(np.abs(r)))) if p.residual_box else (lambda r: float(np.linalg.norm(r)))
        if p.scaled:
            r = norm(t * p.measurements - p.matrix @ v)
            worst = max(worst, r - p.noise_bound * t, p.t_min - t)
        else:
            r = norm(p.matrix @ v - p.measurements)
            worst = max(worst, r - p.noise_bound)
    return worst


# ---------------------------------------------------------------------------
# Backends


class _SimplexBackend:
    """Split ``v = p - n`` and hand the LP to HiGHS; keeps the model for re-solves."""

    def __init__(self, p: ConicSubproblem):
        self.n = n = p.size
        self.scaled = p.scaled
        ncol = 2 * n + (1 if p.scaled else 0)
        rows, lo_rows, hi_rows = [], [], []
        if p.has_residual:
            a = p.matrix
            m = a.shape[0]
            block = np.hstack([a, -a])
            eta = p.noise_bound if p.residual_box else 0.0
            if p.scaled:
                # -eta t <= A v - t y <= eta t as two one-sided rows
                block = np.hstack([block, -p.measurements[:, None]])
                if eta > 0:
                    rows += [block - eta * _t_column(m, block.shape[1]), block + eta * _t_column(m, block.shape[1])]
                    lo_rows += [np.full(m, -highspy.kHighsInf), np.zeros(m)]
                    hi_rows += [np.zeros(m), np.full(m, highspy.kHighsInf)]
                else:
                    rows.append(block)
                    lo_rows.append(np.zeros(m))
                    hi_rows.append(np.zeros(m))
            else:
                rows.append(block)
                lo_rows.append(p.measurements - eta)
                hi_rows.append(p.measurements + eta)
        if p.l1_radius is not None:
            row = np.zeros((1, ncol))
            row[0, : 2 * n] = 1.0
            rows.append(row)
            lo_rows.append(np.array([-highspy.kHighsInf]))
            hi_rows.append(np.array([p.l1_radius]))
        mat = np.vstack(rows) if rows else np.zeros((0, ncol))

        lp = highspy.HighsLp()
        lp.num_col_ = ncol
        lp.num_row_ = mat.shape[0]
        lp.col_cost_ = np.zeros(ncol)
        lp.col_lower_ = np.zeros(ncol)
        lp.col_upper_ = np.full(ncol, highspy.kHighsInf)
        lp.row_lower_ = np.concatenate(lo_rows) if rows else np.zeros(0)
        lp.row_upper_ = np.concatenate(hi_rows) if rows else np.zeros(0)
        csc = _to_csc(mat)
        lp.a_matrix_.format_ = highspy.MatrixFormat.kColwise
        lp.a_matrix_.start_ = csc[0]
        lp.a_matrix_.index_ = csc[1]
        lp.a_matrix_.value_ = csc[2]
        h = highspy.Highs()
        h.setOptionValue("output_flag", False)
        h.setOptionValue("presolve", "off")
        h.setOptionValue("primal_feasibility_tolerance", 1e-9)
        h.setOptionValue("dual_feasibility_tolerance", 1e-9)
        h.setOptionValue("random_seed", 0)
        # re-solves mostly change costs only, where primal simplex restarts best
        h.setOptionValue("simplex_strategy", 4)
        h.passModel(lp)
        self.highs = h
        self._bounds = None
        self.cols = np.arange(ncol, dtype=np.int32)

    def solve(self, p: ConicSubproblem) -> ConicSolution:
        n = self.n
        lam, c = p.l1_weight, p.linear
        cost = np.concatenate([lam - c, lam + c, [0.0] if self.scaled else []])
        lo = np.concatenate(
            [np.maximum(p.lower, 0.0), np.maximum(-p.upper, 0.0)]
        )
        hi = np.concatenate(
            [np.maximum(p.upper, 0.0), np.maximum(-p.lower, 0.0)]
        )
        hi = np.where(np.isinf(hi), highspy.kHighsInf, hi)
        if self.scaled:
            lo = np.append(lo, p.t_min)
            hi = np.append(hi, highspy.kHighsInf)
        h = self.highs
        h.changeColsCost(len(cost), self.cols, cost)
        if self._bounds is None or not (
            np.array_equal(lo, self._bounds[0]) and np.array_equal(hi, self._bounds[1])
        ):
            h.changeColsBounds(len(lo), self.cols, lo, hi)
            self._bounds = (lo, hi)
        h.run()
        status = h.getModelStatus()
        info = h.getInfo()
        iters = int(info.simplex_iteration_count)
        if status == highspy.HighsModelStatus.kUnboundedOrInfeasible:
            status = self._disambiguate()
        if status == highspy.HighsModelStatus.kInfeasible:
            return _empty(p, ConicStatus.INFEASIBLE, iters, "simplex")
        if status == highspy.HighsModelStatus.kUnbounded:
            return _empty(p, ConicStatus.UNBOUNDED, iters, "simplex")
        x = np.asarray(h.getSolution().col_value, dtype=float)
        v = x[:n] - x[n : 2 * n]
        t = float(x[-1]) if self.scaled else None
        if status == highspy.HighsModelStatus.kOptimal:
            st = ConicStatus.OPTIMAL
        elif status in (
            highspy.HighsModelStatus.kIterationLimit,
            highspy.HighsModelStatus.kTimeLimit,
        ):
            st = ConicStatus.MAX_ITER
        else:
            raise RuntimeError(f"HiGHS failed with status {h.modelStatusToString(status)}")
        viol = constraint_violation(p, v, t)
        if st is ConicStatus.OPTIMAL and viol > p.tolerances.feasibility:
            st = ConicStatus.MAX_ITER
        return ConicSolution(
            point=v,
            t=t,
            objective=p.objective(v),
            primal_residual=viol,
            dual_residual=float(max(info.max_dual_infeasibility, 0.0)),
            iterations=iters,
            status=st,
            violation=viol,
            method="simplex",
        )

    def _disambiguate(self):
        h = self.highs
        cost = np.zeros(len(self.cols))
        saved = np.asarray(h.getLp().col_cost_, dtype=float)
        h.changeColsCost(len(cost), self.cols, cost)
        h.run()
        feasible = h.getModelStatus() == highspy.HighsModelStatus.kOptimal
        h.changeColsCost(len(saved), self.cols, saved)
        return (
            highspy.HighsModelStatus.kUnbounded
            if feasible
            else highspy.HighsModelStatus.kInfeasible
        )


def _t_column(m: int, ncol: int) -> np.ndarray:
    col = np.zeros((m, ncol))
    col[:, -1] = 1.0
    return col


def _to_csc(mat: np.ndarray):
    mask = mat != 0
    counts = mask.sum(axis=0)
    start = np.concatenate([[0], np.cumsum(counts)]).astype(np.int32)
    rows_idx, cols_idx = np.nonzero(mask.T)
    # nonzero on the transpose walks column by column
    index = cols_idx.astype(np.int32)
    value = mat.T[rows_idx, cols_idx]
    return start, index, value


def _empty(p: ConicSubproblem, status: ConicStatus, iters: int, method: str):
    return ConicSolution(
        point=np.full(p.size, np.nan),
        t=None,
        objective=math.nan if status is ConicStatus.INFEASIBLE else -math.inf,
        primal_residual=math.inf,
        dual_residual=math.inf,
        iterations=iters,
        status=status,
        violation=math.inf,
        method=method,
    )


class _NormalSolver:
    """Solves ``(D + K^T K) w = r`` for diagonal ``D`` via a cached factorisation."""

    def __init__(self, d: np.ndarray, k: Optional[np.ndarray]):
        self.d = d
        self.k = k
        if k is None:
            return
        p, n = k.shape
        if p < n:
            # Woodbury: (D + K^T K)^-1 = D^-1 - D^-1 K^T (I + K D^-1 K^T)^-1 K D^-1
            kd = k / d
            self.small = scipy.linalg.cho_factor(np.eye(p) + kd @ k.T)
            self.kd = kd
            self.dense = None
        else:
            self.dense = scipy.linalg.cho_factor(np.diag(d) + k.T @ k)

    def __call__(self, r: np.ndarray) -> np.ndarray:
        if self.k is None:
            return r / self.d
        if self.dense is not None:
            return scipy.linalg.cho_solve(self.dense, r)
        rd = r / self.d
        return rd - self.kd.T @ scipy.linalg.cho_solve(self.small, self.k @ rd)


class _AdmmBackend:
    """Relaxed ADMM over the splitting ``w -> (w, v, K w)``.

    Blocks: the separable l1/linear/bound term on ``w``; the l1 ball on the
    ``v`` part; the residual ball or cone on ``K w``. An ``eta = 0``
    residual is an affine equality and is imposed exactly inside the
    ``w`` update through a cached Schur complement instead.
    """

    alpha = 1.6
    adapt_every = 25

    def __init__(self, p: ConicSubproblem):
        self.n = p.size
        self.nw = p.size + (1 if p.scaled else 0)
        self.scaled = p.scaled
        self.has_ball = p.l1_radius is not None
        self.cone = p.has_residual and p.noise_bound > 0
        self.equality = p.has_residual and p.noise_bound == 0
        n, nw = self.n, self.nw
        d = np.ones(nw)
        if self.has_ball:
            d[:n] += 1.0
        self.k = None
        if p.has_residual:
            a, y = p.matrix, p.measurements
            if p.scaled:
                k = np.hstack([a, -y[:, None]])
                if self.cone:
                    k = np.vstack([k, np.zeros((1, nw))])
                    k[-1, -1] = p.noise_bound
            else:
                k = a
            self.k = k
        if self.cone:
            self.solver = _NormalSolver(d, self.k)
        else:
            self.solver = _NormalSolver(d, None)
        if self.equality:
            e = self.k
            self.e_rhs = np.zeros(e.shape[0]) if p.scaled else p.measurements
            schur = (e / d) @ e.T
            evals, evecs = np.linalg.eigh(schur)
            keep = evals > 1e-12 * max(evals.max(), 1e-300)
            self.schur_pinv = (evecs[:, keep] / evals[keep]) @ evecs[:, keep].T
            self.e = e
            self.d = d

    # -- helpers ---------------------------------------------------------
    def _apply(self, w):
        out = [w]
        if self.has_ball:
            out.append(w[: self.n])
        if self.cone:
            out.append(self.k @ w)
        return out

    def _adjoint(self, parts):
        r = parts[0].copy()
        i = 1
        if self.has_ball:
            r[: self.n] += parts[i]
            i += 1
        if self.cone:
            r += self.k.T @ parts[i]
        return r

    def _w_update(self, rhs):
        if not self.equality:
            return self.solver(rhs)
        e, d = self.e, self.d
        mu = self.schur_pinv @ (e @ (rhs / d) - self.e_rhs)
        return (rhs - e.T @ mu) / d

    def _prox(self, p, parts, rho):
        n = self.n
        out = []
        a = parts[0]
        v = a[:n] + p.linear / rho
        thr = p.l1_weight / rho
        v = np.sign(v) * np.maximum(np.abs(v) - thr, 0.0)
        v = np.clip(v, p.lower, p.upper)
        if self.scaled:
            v = np.append(v, max(a[n], p.t_min))
        out.append(v)
        i = 1
        if self.has_ball:
            out.append(project_l1_ball(parts[i], p.l1_radius))
            i += 1
        if self.cone:
            b = parts[i]
            if self.scaled:
                u, s = project_soc(b[:-1], b[-1])
                out.append(np.append(u, s))
            else:
                y = p.measurements
                r = b - y
                nr = np.linalg.norm(r)
                if nr > p.noise_bound:
                    r *= p.noise_bound / nr
                out.append(y + r)
        return out

    def _infeasible_upfront(self, p) -> bool:
        if not p.has_residual:
            return False
        a, y = p.matrix, p.measurements
        sol, *_ = np.linalg.lstsq(a, y, rcond=None)
        gap = float(np.linalg.norm(a @ sol - y))
        scale = max(1.0, float(np.linalg.norm(y)))
        return gap > p.noise_bound + 1e-9 * scale

    # -- main loop -------------------------------------------------------
    def solve(self, p: ConicSubproblem, warm_start=None) -> ConicSolution:
        tol = p.tolerances
        if self._infeasible_upfront(p):
            return _empty(p, ConicStatus.INFEASIBLE, 0, "admm")
        state = getattr(warm_start, "_state", None)
        if state is not None and state.get("engine") is self:
            w = state["w"].copy()
            zs = [z.copy() for z in state["z"]]
            us = [u.copy() for u in state["u"]]
            rho = state["rho"]
        else:
            w = np.zeros(self.nw)
            if warm_start is not None:
                ws = np.asarray(getattr(warm_start, "point", warm_start), float)
                w[: self.n] = ws[: self.n]
                t0 = getattr(warm_start, "t", None)
                if self.scaled:
                    w[-1] = t0 if t0 is not None else (ws[-1] if ws.size > self.n else p.t_min)
            elif self.scaled:
                w[-1] = p.t_min
            zs = self._apply(w)
            us = [np.zeros_like(z) for z in zs]
            rho = 1.0
        eps_abs = 0.1 * tol.feasibility
        eps_rel = tol.objective
        n_dual = math.sqrt(self.nw)
        n_pri = math.sqrt(sum(z.size for z in zs))
        status = ConicStatus.MAX_ITER
        r_pri = r_dual = math.inf
        it = 0
        scale0 = 1.0 + float(np.linalg.norm(p.linear)) + float(
            np.linalg.norm(p.measurements) if p.has_residual else 0.0
        )
        grad_scale = max(
            float(np.linalg.norm(p.linear)), p.l1_weight * math.sqrt(self.n), 1e-12
        )
        for it in range(1, tol.max_iterations + 1):
            w = self._w_update(self._adjoint([z - u for z, u in zip(zs, us)]))
            mw = self._apply(w)
            relaxed = [self.alpha * m + (1 - self.alpha) * z for m, z in zip(mw, zs)]
            z_old = zs
            zs = self._prox(p, [r + u for r, u in zip(relaxed, us)], rho)
            us = [u + r - z for u, r, z in zip(us, relaxed, zs)]

            check = it % 5 == 0 or it == tol.max_iterations
            if not check:
                continue
            r_pri = math.sqrt(sum(float(np.sum((m - z) ** 2)) for m, z in zip(mw, zs)))
            dz = self._adjoint([z - zo for z, zo in zip(zs, z_old)])
            r_dual = rho * float(np.linalg.norm(dz))
            norm_m = math.sqrt(sum(float(np.sum(m * m)) for m in mw))
            norm_z = math.sqrt(sum(float(np.sum(z * z)) for z in zs))
            norm_u = max(rho * float(np.linalg.norm(self._adjoint(us))), grad_scale)
            eps_pri = n_pri * eps_abs + eps_rel * max(norm_m, norm_z)
            eps_dual = n_dual * eps_abs + eps_rel * norm_u
            if r_pri <= eps_pri and r_dual <= eps_dual:
                v, t = self._point(zs)
                if constraint_violation(p, v, t) <= tol.feasibility:
                    status = ConicStatus.OPTIMAL
                    break
            if not np.isfinite(norm_z) or norm_z > 1e12 * scale0:
                status = ConicStatus.UNBOUNDED
                break
            if it % self.adapt_every == 0:
                pri = r_pri / max(norm_m, norm_z, 1e-30)
                dual = r_dual / norm_u
                ratio = math.sqrt(pri / max(dual, 1e-30))
                if ratio > 5 or ratio < 0.2:
                    new_rho = float(np.clip(rho * ratio, 1e-6, 1e6))
                    us = [u * (rho / new_rho) for u in us]
                    rho = new_rho
        if status is ConicStatus.UNBOUNDED:
            return _empty(p, ConicStatus.UNBOUNDED, it, "admm")
        v, t = self._point(zs)
        viol = constraint_violation(p, v, t)
        return ConicSolution(
            point=v,
            t=t,
            objective=p.objective(v),
            primal_residual=r_pri,
            dual_residual=r_dual,
            iterations=it,
            status=status,
            violation=viol,
            method="admm",
            _state={"engine": self, "w": w, "z": zs, "u": us, "rho": rho},
        )

    def _point(self, zs):
        z = zs[0]
        if self.scaled:
            return z[: self.n].copy(), float(z[-1])
        return z.copy(), None


class ConicEngine:
    """A subproblem structure that can be re-solved with new costs or bounds.

    The constraint data (matrix, measurements, noise bound, radius, ``t_min``)
    is fixed at construction; :meth:`solve` accepts a new linear term, l1
    weight and coordinate bounds. Simplex re-solves start from the previous
    basis and ADMM re-solves from the previous iterate when ``warm_start``
    is a solution produced by the same engine.
    """

    def __init__(self, problem: ConicSubproblem, method: str = "auto"):
        if method == "auto":
            method = "simplex" if problem.is_linear else "admm"
        if method == "simplex" and not problem.is_linear:
            raise ValueError("the simplex backend needs eta = 0 or no residual")
        if method not in ("simplex", "admm"):
            raise ValueError(f"unknown method {method!r}")
        if method == "admm" and problem.residual_box:
            raise ValueError("the residual box relaxation is linear; use the simplex backend")
        self.problem = problem
        self.method = method
        self._backend = _SimplexBackend(problem) if method == "simplex" else _AdmmBackend(problem)

    def solve(
        self,
        linear=None,
        l1_weight: Optional[float] = None,
        lower=None,
        upper=None,
        warm_start=None,
    ) -> ConicSolution:
        changes = {}
        if linear is not None:
            changes["linear"] = np.asarray(linear, float)
        if l1_weight is not None:
            changes["l1_weight"] = float(l1_weight)
        if lower is not None:
            changes["lower"] = np.asarray(lower, float)
        if upper is not None:
            changes["upper"] = np.asarray(upper, float)
        p = replace(self.problem, **changes) if changes else self.problem
        if self.method == "simplex":
            return self._backend.solve(p)
        return self._backend.solve(p, warm_start)


def solve_subproblem(
    p: ConicSubproblem, warm_start=None, method: str = "auto"
) -> ConicSolution:
    """Solve one convex subproblem to the tolerances it carries."""
    return ConicEngine(p, method).solve(warm_start=warm_start)


def solve_lp(c, *, method: str = "auto", warm_start=None, **constraints) -> ConicSolution:
    """Maximise ``c^T v`` over the constraint menu of :class:`ConicSubproblem`.

    The returned ``objective`` is the maximised value ``c^T v``; an
    unbounded problem comes back with status ``UNBOUNDED`` and objective
    ``+inf``.
    """
    c = np.asarray(c, float)
    p = ConicSubproblem(l1_weight=0.0, linear=c, **constraints)
    sol = solve_subproblem(p, warm_start=warm_start, method=method)
    if sol.status is ConicStatus.UNBOUNDED:
        sol.objective = math.inf
    elif sol.status is not ConicStatus.INFEASIBLE:
        sol.objective = float(c @ sol.point)
    return sol
