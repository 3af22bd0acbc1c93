"""Core numeric types, problem/report containers and dense primitives.

Vectors are plain one-dimensional ``float64`` arrays and matrices are
two-dimensional ``float64`` arrays; :func:`as_signal` and :func:`as_matrix`
validate and normalise inputs at API boundaries. The ratio parameter ``q``
is a float with ``math.inf`` standing for the max-norm; every q-dependent
formula in the package branches on it explicitly.
"""

from __future__ import annotations

import enum
import io
import math
import os
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

__all__ = [
    "RNG_ALGORITHM",
    "RecoveryProblem",
    "SolveReport",
    "Termination",
    "as_matrix",
    "as_signal",
    "derive_seed",
    "format_q",
    "l1_norm",
    "lq_norm",
    "make_rng",
    "matvec",
    "parse_q",
    "read_matrix",
    "read_vector",
    "write_matrix",
    "write_vector",
]

RNG_ALGORITHM = "philox4x64-10"


def as_signal(z, name: str = "vector") -> np.ndarray:
    """Return ``z`` as a finite, non-empty 1-d float array."""
    arr = np.asarray(z, dtype=float)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Return ``a`` as a finite 2-d float array with at least one entry."""
    arr = np.asarray(a, dtype=float)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be two-dimensional, got shape {arr.shape}")
    if arr.shape[0] < 1 or arr.shape[1] < 1:
        raise ValueError(f"{name} must be at least 1x1, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def parse_q(value) -> float:
    """Parse a ratio parameter; accepts numbers and the strings ``inf``/``∞``."""
    if isinstance(value, str):
        text = value.strip().lower()
        if text in {"inf", "infinity", "∞", "+inf"}:
            return math.inf
        value = float(text)
    q = float(value)
    if math.isnan(q):
        raise ValueError("q must not be NaN")
    return q


def format_q(q: float) -> str:
    """Inverse of :func:`parse_q`: ``inf`` for the max-norm, else ``repr``."""
    if math.isinf(q):
        return "inf"
    return repr(float(q))


# ---------------------------------------------------------------------------
# Norms and products


def l1_norm(z) -> float:
    return float(np.sum(np.abs(z)))


def lq_norm(z, q: float) -> float:
    """The l_q (quasi-)norm ``(sum |z_i|^q)^(1/q)``; ``max |z_i|`` for ``q=inf``.

    The sum is evaluated on ``z / max|z|`` so large ``q`` cannot overflow.
    Values ``0 < q < 1`` give the usual quasi-norm, used when evaluating
    sparsity levels below one.
    """
    z = np.abs(np.asarray(z, dtype=float))
    if q <= 0:
        raise ValueError(f"lq_norm needs q > 0, got {q}")
    peak = float(z.max()) if z.size else 0.0
    if peak == 0.0:
        return 0.0
    if math.isinf(q):
        return peak
    if q == 1:
        return float(z.sum())
    if q == 2:
        return float(np.linalg.norm(z))
    return peak * float(np.sum((z / peak) ** q)) ** (1.0 / q)


def matvec(a, z) -> np.ndarray:
    """Dense product ``A @ z`` with a dimension check."""
    a = np.asarray(a, dtype=float)
    z = np.asarray(z, dtype=float)
    if a.ndim != 2 or z.ndim != 1 or a.shape[1] != z.shape[0]:
        raise ValueError(
            f"dimension mismatch: matrix {a.shape} times vector {z.shape}"
        )
    return a @ z


# ---------------------------------------------------------------------------
# Random numbers


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator used everywhere a random draw is needed."""
    return np.random.Generator(np.random.Philox(int(seed)))


def derive_seed(master: int, *keys: int) -> int:
    """Deterministic 63-bit child seed of ``master`` for the integer path ``keys``."""
    seq = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    return int(seq.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


# ---------------------------------------------------------------------------
# Containers


@dataclass(frozen=True)
class RecoveryProblem:
    """A noisy sparse recovery instance ``||A z - y||_2 <= eta`` with ratio ``q``.

    Feasibility of the instance is not checked here; solvers report
    ``Termination.INFEASIBLE`` when no admissible point exists.
    """

    matrix: np.ndarray
    measurements: np.ndarray
    noise_bound: float = 0.0
    q: float = 2.0

    def __post_init__(self):
        a = as_matrix(self.matrix, "matrix")
        y = as_signal(self.measurements, "measurements")
        if a.shape[0] != y.shape[0]:
            raise ValueError(
                f"matrix has {a.shape[0]} rows but measurements have length {y.shape[0]}"
            )
        eta = float(self.noise_bound)
        if not math.isfinite(eta) or eta < 0:
            raise ValueError(f"noise_bound must be finite and >= 0, got {eta}")
        q = parse_q(self.q)
        if not q > 1:
            raise ValueError(f"q must satisfy 1 < q <= inf, got {q}")
        a.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "matrix", a)
        object.__setattr__(self, "measurements", y)
        object.__setattr__(self, "noise_bound", eta)
        object.__setattr__(self, "q", q)

    @property
    def shape(self) -> tuple[int, int]:
        return self.matrix.shape

    def residual_norm(self, z) -> float:
        return float(np.linalg.norm(self.matrix @ z - self.measurements))

    def with_q(self, q) -> "RecoveryProblem":
        return RecoveryProblem(self.matrix, self.measurements, self.noise_bound, q)


class Termination(str, enum.Enum):
    CONVERGED = "converged"
    MAX_ITERATIONS = "max_iterations"
    INFEASIBLE = "infeasible"
    DEGENERATE_ZERO = "degenerate_zero"


@dataclass
class SolveReport:
    """Outcome of one recovery solve.

    ``objective_value`` is ``||x||_1 / ||x||_q`` of ``solution`` (NaN for the
    zero vector). ``history`` holds method-specific traces such as the
    lambda sequence of the parametric method or the CCP objective trace, and
    ``notes`` collects non-fatal conditions (an active l1 cap, a
    non-monotone lambda sequence, ...).
    """

    method: str
    q: float
    solution: np.ndarray
    objective_value: float
    residual_norm: float
    outer_iterations: int
    inner_iterations: int
    termination: Termination
    wall_time: float
    history: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    config: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.termination in (Termination.CONVERGED, Termination.MAX_ITERATIONS)

    def to_dict(self) -> dict:
        return {
            "method": self.method,
            "q": format_q(self.q),
            "solution": [float(v) for v in self.solution],
            "objective_value": _json_float(self.objective_value),
            "residual_norm": _json_float(self.residual_norm),
            "outer_iterations": int(self.outer_iterations),
            "inner_iterations": int(self.inner_iterations),
            "termination": self.termination.value,
            "wall_time": float(self.wall_time),
            "history": _jsonable(self.history),
            "notes": list(self.notes),
            "config": _jsonable(self.config),
        }


def _json_float(v):
    v = float(v)
    if math.isnan(v):
        return None
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _json_float(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    return obj


# ---------------------------------------------------------------------------
# Text format: "m N" header then m rows; vectors "N" then one row.


def _fmt(v: float) -> str:
    return repr(float(v))


def write_matrix(path, a) -> None:
    a = as_matrix(a)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{a.shape[0]} {a.shape[1]}\n")
        for row in a:
            fh.write(" ".join(_fmt(v) for v in row))
            fh.write("\n")


def write_vector(path, z) -> None:
    z = as_signal(z)
    with open(path, "w", encoding="ascii") as fh:
        fh.write(f"{z.shape[0]}\n")
        fh.write(" ".join(_fmt(v) for v in z))
        fh.write("\n")


def _numbers(lines: Iterable[str]) -> list[str]:
    out = []
    for line in lines:
        out.extend(line.split())
    return out


def read_matrix(path) -> np.ndarray:
    with _open(path) as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: matrix header must be 'm N'")
        m, n = int(header[0]), int(header[1])
        values = _numbers(fh)
    if len(values) != m * n:
        raise ValueError(f"{path}: expected {m * n} entries, found {len(values)}")
    return as_matrix(np.array(values, dtype=float).reshape(m, n))


def read_vector(path) -> np.ndarray:
    with _open(path) as fh:
        header = fh.readline().split()
        if len(header) != 1:
            raise ValueError(f"{path}: vector header must be 'N'")
        n = int(header[0])
        values = _numbers(fh)
    if len(values) != n:
        raise ValueError(f"{path}: expected {n} entries, found {len(values)}")
    return as_signal(np.array(values, dtype=float))


def _open(path):
    if isinstance(path, io.IOBase):
        return path
    if not os.path.exists(path):
        raise FileNotFoundError(f"{path}: no such file")
    return open(path, encoding="ascii")


def toy_problem(noise_bound: float = 0.0, q: float = 2.0) -> RecoveryProblem:
    """The 5x6 instance whose solution set is ``z(t) = (t,t,t,20-2t,40-4t,2(t-9))``."""
    return RecoveryProblem(TOY_MATRIX.copy(), TOY_MEASUREMENTS.copy(), noise_bound, q)


def toy_solution(t: float) -> np.ndarray:
    return np.array([t, t, t, 20 - 2 * t, 40 - 4 * t, 2 * (t - 9)], dtype=float)


TOY_MATRIX = np.array(
    [
        [1, -1, 0, 0, 0, 0],
        [1, 0, -1, 0, 0, 0],
        [0, 1, 1, 1, 0, 0],
        [2, 2, 0, 0, 1, 0],
        [1, 1, 0, 0, 0, -1],
    ],
    dtype=float,
)
TOY_MEASUREMENTS = np.array([0, 0, 20, 40, 18], dtype=float)

__all__ += ["TOY_MATRIX", "TOY_MEASUREMENTS", "toy_problem", "toy_solution"]
