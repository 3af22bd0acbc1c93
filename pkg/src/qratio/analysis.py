"""Recovery certificates for a given measurement matrix.

* Kernel ratio ``inf ||h||_1/||h||_q`` over ``ker(A) \\ {0}``: exact for
  ``q = inf`` through linear programs, a multi-start convex-concave search
  (an upper estimate of the infimum) for finite ``q``.
* The sparsity threshold below which every k-sparse signal is the unique
  noiseless ratio minimiser.
* A multi-start projected search for the q-ratio constrained minimal
  singular value ``rho_{q,s}(A)`` (an upper estimate of the minimum).
* Error-bound components for exactly sparse and compressible signals, and
  the comparison of the constrained ratio infimum with the kernel ratio.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .conic import ConicEngine, ConicStatus, ConicSubproblem
from .model import RecoveryProblem, as_matrix, as_signal, derive_seed, format_q, l1_norm, lq_norm, make_rng
from .solvers import SolverOptions, lq_subgradient, pm_solve, ratio
from .sparsity import best_k_term_error, q_ratio_sparsity

__all__ = [
    "CertificateReport",
    "KernelRatio",
    "SufficientCondition",
    "cmsv_estimate",
    "cmsv_search",
    "kernel_basis",
    "kernel_ratio_inf_ccp",
    "kernel_ratio_inf_linf",
    "kernel_ratio_search",
    "level_exponent",
    "ratio_comparison",
    "sufficient_condition_check",
    "theorem_bounds",
]

RANK_RTOL = 1e-10


def level_exponent(q: float) -> float:
    """``q/(q-1)``, the exponent turning a norm ratio into a sparsity level."""
    return 1.0 if math.isinf(q) else q / (q - 1.0)


def _root(q: float) -> float:
    """``1 - 1/q``."""
    return 1.0 if math.isinf(q) else 1.0 - 1.0 / q


@dataclass
class KernelRatio:
    value: float
    witness: Optional[np.ndarray]
    exact: bool
    starts: int = 0


@dataclass
class SufficientCondition:
    threshold: float
    holds: bool
    kernel_ratio: float
    exact: bool
    l1_threshold: float


@dataclass
class CertificateReport:
    """Certificate quantities; ``approximate`` names the estimated fields."""

    q: float
    kernel_ratio_inf: Optional[float] = None
    sufficient_k: Optional[float] = None
    cmsv_estimate: Optional[float] = None
    cmsv_level: Optional[float] = None
    theorem1_bound_q: Optional[float] = None
    theorem1_bound_1: Optional[float] = None
    theorem2_components: Optional[tuple] = None
    theorem2_bound_q: Optional[float] = None
    theorem2_bound_1: Optional[float] = None
    C_q: Optional[float] = None
    error_q: Optional[float] = None
    error_1: Optional[float] = None
    cone_lhs: Optional[float] = None
    cone_rhs: Optional[float] = None
    approximate: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = asdict(self)
        out["q"] = format_q(self.q)
        for key, val in out.items():
            if isinstance(val, float) and math.isinf(val):
                out[key] = "inf"
            elif isinstance(val, tuple):
                out[key] = list(val)
        return out


# ---------------------------------------------------------------------------
# Kernel


def _factor(a: np.ndarray):
    a = as_matrix(a)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    tol = RANK_RTOL * (s[0] if s.size else 0.0)
    rank = int(np.sum(s > tol)) if s.size and s[0] > 0 else 0
    return vt[:rank], vt[rank:]


def kernel_basis(a) -> np.ndarray:
    """Orthonormal basis of ``ker(A)`` as the columns of an ``N x d`` array.

    Rank is decided by singular values above ``1e-10 * ||A||_2``.
    """
    return _factor(a)[1].T


def _kernel_engine(rows: np.ndarray, n: int) -> ConicEngine:
    sub = ConicSubproblem(
        l1_weight=0.0,
        linear=np.zeros(n),
        matrix=rows if rows.shape[0] else np.zeros((1, n)),
        measurements=np.zeros(max(rows.shape[0], 1)),
        noise_bound=0.0,
        l1_radius=1.0,
    )
    return ConicEngine(sub, "simplex")


def _linf_kernel(a) -> KernelRatio:
    a = as_matrix(a)
    n = a.shape[1]
    rows, null = _factor(a)
    if null.shape[0] == 0:
        return KernelRatio(math.inf, None, True)
    engine = _kernel_engine(rows, n)
    best, witness = -math.inf, None
    # ker(A) is symmetric, so max h_i covers both signs of coordinate i
    for i in range(n):
        c = np.zeros(n)
        c[i] = 1.0
        sol = engine.solve(linear=c)
        if sol.status is not ConicStatus.OPTIMAL:
            raise RuntimeError(f"kernel program {i} ended with status {sol.status.value}")
        val = float(sol.point[i])
        if val > best + 1e-12 * max(1.0, best):
            best, witness = val, sol.point.copy()
    return KernelRatio(l1_norm(witness) / float(np.max(np.abs(witness))), witness, True, n)


def kernel_ratio_inf_linf(a) -> float:
    """Exact ``inf ||h||_1/||h||_inf`` over ``ker(A) \\ {0}``; ``inf`` for a trivial kernel.

    For each coordinate ``i`` a linear program maximises ``h_i`` over
    ``{A h = 0, ||h||_1 <= 1}``; this is ``min ||h||_1`` subject to
    ``h_i = 1`` after rescaling, and by symmetry of the kernel it also
    covers ``h_i = -1``. The infimum is ``1 / max_i h_i``.
    """
    return _linf_kernel(a).value


def _ccp_kernel_run(engine, h, q, max_iter, tol):
    cur = lq_norm(h, q) / l1_norm(h)
    h = h / l1_norm(h)
    for _ in range(max_iter):
        sol = engine.solve(linear=lq_subgradient(h, q))
        if sol.status is not ConicStatus.OPTIMAL:
            break
        nxt = lq_norm(sol.point, q)
        if nxt < cur:
            break
        done = abs(nxt - cur) / max(cur, 1e-12) < tol
        h, cur = sol.point, nxt
        if done:
            break
    return h


def kernel_ratio_search(
    a,
    q: float,
    restarts: int = 50,
    seed: int = 0,
    *,
    linf_start: bool = True,
    max_iter: int = 100,
    tol: float = 1e-8,
    threads: int = 1,
) -> KernelRatio:
    """Multi-start convex-concave search for ``inf ||h||_1/||h||_q`` on the kernel.

    Each start maximises ``||h||_q`` over ``{A h = 0, ||h||_1 <= 1}`` by
    repeatedly maximising its linearisation. Starts are Gaussian vectors
    in the kernel (start ``j`` uses the seed ``derive_seed(seed, j)``) plus,
    with ``linf_start``, the exact ``q = inf`` witness. The best value found
    is an upper estimate of the infimum.
    """
    a = as_matrix(a)
    n = a.shape[1]
    if math.isinf(q):
        return _linf_kernel(a)
    if not q > 1:
        raise ValueError(f"q must exceed 1, got {q}")
    rows, null = _factor(a)
    if null.shape[0] == 0:
        return KernelRatio(math.inf, None, False)
    starts = []
    for j in range(restarts):
        xi = make_rng(derive_seed(seed, j)).standard_normal(null.shape[0])
        starts.append(null.T @ xi)
    if linf_start:
        starts.append(_linf_kernel(a).witness)

    if threads > 1:
        def run(h0):
            return _ccp_kernel_run(_kernel_engine(rows, n), h0, q, max_iter, tol)

        with ThreadPoolExecutor(threads) as pool:
            finals = list(pool.map(run, starts))
    else:
        # one engine for all starts: each program restarts from the last basis
        engine = _kernel_engine(rows, n)
        finals = [_ccp_kernel_run(engine, h, q, max_iter, tol) for h in starts]
    values = [ratio(h, q) for h in finals]
    j = int(np.argmin(values))
    return KernelRatio(float(values[j]), finals[j], False, len(starts))


def kernel_ratio_inf_ccp(a, q: float, restarts: int = 50, seed: int = 0, **kw) -> float:
    """Best ``||h||_1/||h||_q`` found on the kernel; an upper estimate of the infimum."""
    if math.isinf(q):
        raise ValueError("use kernel_ratio_inf_linf for q = inf")
    return kernel_ratio_search(a, q, restarts, seed, **kw).value


def sufficient_condition_check(a, q: float, k: float, **kw) -> SufficientCondition:
    """Sparsity threshold ``inf 3^(q/(1-q)) s_q(h)`` over the kernel and whether ``k`` is below it.

    With ``r = inf ||h||_1/||h||_q`` the threshold is ``(r/3)^(q/(q-1))``,
    i.e. ``r/3`` for ``q = inf`` where it is exact. For finite ``q`` the
    kernel ratio is an upper estimate, so the threshold is too. The
    l1-minimisation counterpart ``(r/2)^(q/(q-1))`` is reported alongside.
    """
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    kr = kernel_ratio_search(a, q, **kw)
    e = level_exponent(q)
    if math.isinf(kr.value):
        return SufficientCondition(math.inf, True, math.inf, kr.exact, math.inf)
    threshold = (kr.value / 3.0) ** e
    l1_threshold = (kr.value / 2.0) ** e
    return SufficientCondition(threshold, bool(k < threshold), kr.value, kr.exact, l1_threshold)


# ---------------------------------------------------------------------------
# Constrained minimal singular value


def _row_ratios(rows: np.ndarray, q: float) -> np.ndarray:
    mags = np.abs(rows)
    peak = mags.max(axis=1)
    safe = np.where(peak > 0, peak, 1.0)[:, None]
    if math.isinf(q):
        nq = peak
    else:
        nq = peak * np.sum((mags / safe) ** q, axis=1) ** (1.0 / q)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(nq > 0, mags.sum(axis=1) / np.where(nq > 0, nq, 1.0), np.inf)


def _threshold_to_level(w: np.ndarray, q: float, bound: float) -> np.ndarray:
    """Soft-threshold ``w`` until ``||w||_1/||w||_q <= bound``; returns a unit-lq vector.

    The threshold is located by four rounds of a 32-point grid search
    between the last failing and first passing value.
    """
    w = w / lq_norm(w, q)
    if l1_norm(w) <= bound:
        return w
    mag = np.abs(w)
    sgn = np.sign(w)
    lo, hi = 0.0, float(mag.max())
    # any tau just below max|w| leaves only the largest entries, ratio ~ 1 <= bound
    best = np.where(mag >= hi, w, 0.0)
    for _ in range(4):
        taus = np.linspace(lo, hi, 33)[1:]
        cands = sgn * np.maximum(mag[None, :] - taus[:, None], 0.0)
        ok = _row_ratios(cands, q) <= bound
        j = int(np.argmax(ok)) if ok.any() else len(taus) - 1
        if ok[j] and np.any(cands[j]):
            best = cands[j]
            hi = float(taus[j])
            lo = float(taus[j - 1]) if j > 0 else lo
        else:
            break
    return best / lq_norm(best, q)


def _cmsv_value(a, z, q):
    return float(np.linalg.norm(a @ z)) / lq_norm(z, q)


def _cmsv_run(a, z, q, bound, max_iter):
    ata = a.T @ a
    f = _cmsv_value(a, z, q)
    step = 1.0
    for _ in range(max_iter):
        az = a @ z
        naz = float(np.linalg.norm(az))
        if naz == 0:
            return z, 0.0
        grad = ata @ z / naz - naz * lq_subgradient(z, q)
        improved = False
        while step > 1e-12:
            cand = _threshold_to_level(z - step * grad, q, bound)
            fc = _cmsv_value(a, cand, q)
            if fc < f - 1e-15 * max(f, 1.0):
                improved = True
                break
            step *= 0.5
        if not improved:
            break
        rel = (f - fc) / max(f, 1e-300)
        z, f = cand, fc
        step *= 2.0
        if rel < 1e-12:
            break
    return z, f


@dataclass
class CmsvEstimate:
    value: float
    witness: np.ndarray
    level: float
    starts: int


def cmsv_search(
    a,
    q: float,
    s: float,
    restarts: int = 100,
    seed: int = 0,
    *,
    max_iter: int = 300,
    threads: int = 1,
) -> CmsvEstimate:
    """Multi-start projected search for ``min ||A z||_2/||z||_q`` over ``s_q(z) <= s``.

    Starts are the coordinate axes' best column (always feasible) and
    ``restarts`` random ``floor(s)``-sparse vectors. Each run takes
    backtracking gradient steps on the ratio and returns to the constraint
    set by normalising to ``||z||_q = 1`` and soft-thresholding until
    ``||z||_1 <= s^(1-1/q)``. The value is an upper estimate of the minimum.
    """
    a = as_matrix(a)
    n = a.shape[1]
    if not 1 <= s <= n:
        raise ValueError(f"level s must lie in [1, {n}], got {s}")
    if not q > 1:
        raise ValueError(f"q must exceed 1, got {q}")
    bound = s ** _root(q)
    k = max(1, int(math.floor(s)))
    cols = np.linalg.norm(a, axis=0)
    j = int(np.argmin(cols))
    axis = np.zeros(n)
    axis[j] = 1.0
    starts = [axis]
    for r in range(restarts):
        rng = make_rng(derive_seed(seed, r))
        z = np.zeros(n)
        support = rng.choice(n, size=k, replace=False)
        z[support] = rng.standard_normal(k)
        starts.append(_threshold_to_level(z, q, bound))

    def run(z0):
        return _cmsv_run(a, z0, q, bound, max_iter)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(run, starts))
    else:
        results = [run(z) for z in starts]
    best = int(np.argmin([f for _, f in results]))
    z, f = results[best]
    return CmsvEstimate(float(f), z, float(s), len(starts))


def cmsv_estimate(a, q: float, s: float, restarts: int = 100, seed: int = 0, **kw) -> float:
    """Estimated ``rho_{q,s}(A)``; see :func:`cmsv_search`."""
    return cmsv_search(a, q, s, restarts, seed, **kw).value


# ---------------------------------------------------------------------------
# Error bounds


def theorem_bounds(x_true, x_hat, problem: RecoveryProblem, cmsv: float, k: int) -> CertificateReport:
    """Recovery error of ``x_hat`` against the CMSV-based bounds.

    With ``h = x_hat - x`` and ``rho`` the supplied CMSV value:

    * exactly sparse: ``||h||_q <= 2 eta/rho`` and
      ``||h||_1 <= 6 k^(1-1/q) eta/rho`` at level ``3^(q/(q-1)) k``;
    * compressible: ``||h||_q <= 2 eta/rho + k^(1/q-1) sigma_k(x)`` and
      ``||h||_1 <= (4k^(1-1/q) + 2 s_q(x)^(1-1/q)) eta/rho
      + (4 + (s_q(x)/k)^(1-1/q)) sigma_k(x)`` at level
      ``C_q = (4k^(1-1/q) + s_q(x)^(1-1/q))^(q/(q-1))``.

    ``cone_lhs``/``cone_rhs`` are ``||h_{S^c}||_1`` and
    ``||h_S||_1 + 2 sigma_k(x) + s_q(x)^(1-1/q) ||h||_q`` with ``S`` the
    ``k`` largest entries of ``x``; a global minimiser satisfies
    ``lhs <= rhs``. Nothing is judged here: ``rho`` is itself an estimate.
    """
    x = as_signal(x_true, "x_true")
    xh = as_signal(x_hat, "x_hat")
    q = problem.q
    if not cmsv > 0:
        raise ValueError(f"cmsv must be > 0, got {cmsv}")
    if not 1 <= k <= x.size:
        raise ValueError(f"k must lie in [1, {x.size}], got {k}")
    eta = problem.noise_bound
    r = _root(q)
    h = xh - x
    sigma = best_k_term_error(x, k)
    sq = q_ratio_sparsity(x, q).value if np.any(x) else 0.0
    sqr = sq**r
    kr = float(k) ** r
    order = np.argsort(-np.abs(x), kind="stable")
    on = np.zeros(x.size, dtype=bool)
    on[order[:k]] = True
    hq = lq_norm(h, q)
    c_q = (4 * kr + sqr) ** level_exponent(q)
    meas = 2 * eta / cmsv
    defect = sigma / kr
    return CertificateReport(
        q=q,
        cmsv_estimate=float(cmsv),
        cmsv_level=(3.0 ** level_exponent(q)) * k,
        theorem1_bound_q=meas,
        theorem1_bound_1=6 * kr * eta / cmsv,
        theorem2_components=(meas, defect),
        theorem2_bound_q=meas + defect,
        theorem2_bound_1=(4 * kr + 2 * sqr) * eta / cmsv + (4 + (sq / k) ** r) * sigma,
        C_q=c_q,
        error_q=hq,
        error_1=l1_norm(h),
        cone_lhs=l1_norm(h[~on]),
        cone_rhs=l1_norm(h[on]) + 2 * sigma + sqr * hq,
        approximate=["cmsv_estimate"],
    )


def ratio_comparison(
    a,
    x,
    q: float,
    *,
    kernel_inf: Optional[float] = None,
    options: SolverOptions = SolverOptions(),
    restarts: int = 50,
    seed: int = 0,
) -> tuple[float, float]:
    """``(min ||z||_1/||z||_q s.t. A z = A x, inf over ker(A) of the same ratio)``.

    The constrained value comes from :func:`~qratio.solvers.pm_solve` with
    ``eta = 0``; the kernel value from :func:`kernel_ratio_search` unless
    supplied. For ``x = 0`` the feasible set is the kernel itself and the
    kernel value is returned for both.
    """
    a = as_matrix(a)
    signal = getattr(x, "signal", x)
    signal = as_signal(signal, "x")
    if kernel_inf is None:
        kernel_inf = kernel_ratio_search(a, q, restarts, seed).value
    if not np.any(signal):
        return float(kernel_inf), float(kernel_inf)
    problem = RecoveryProblem(a, a @ signal, 0.0, q)
    report = pm_solve(problem, options)
    if not report.ok:
        raise RuntimeError(f"constrained ratio solve ended with {report.termination.value}")
    return float(report.objective_value), float(kernel_inf)
