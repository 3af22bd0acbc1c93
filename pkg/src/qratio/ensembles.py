"""Measurement matrices and ground-truth signals for the experiments."""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .model import make_rng

__all__ = [
    "EnsembleKind",
    "EnsembleSpec",
    "GroundTruth",
    "compressible_signal",
    "dct_matrix",
    "gaussian_matrix",
    "make_matrix",
    "mutual_coherence",
    "noisy_measurements",
    "sparse_signal",
]


class EnsembleKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    OVERSAMPLED_DCT = "oversampled_dct"

    @classmethod
    def parse(cls, text: str) -> "EnsembleKind":
        if isinstance(text, cls):
            return text
        aliases = {"dct": cls.OVERSAMPLED_DCT, "gauss": cls.GAUSSIAN}
        key = str(text).strip().lower()
        return aliases.get(key) or cls(key)


@dataclass(frozen=True)
class EnsembleSpec:
    kind: EnsembleKind
    m: int
    N: int
    F: Optional[float] = None
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", EnsembleKind.parse(self.kind))
        if self.m < 1 or self.N < 1:
            raise ValueError(f"need m, N >= 1, got m={self.m}, N={self.N}")
        if self.kind is EnsembleKind.OVERSAMPLED_DCT:
            if self.F is None or not self.F > 0:
                raise ValueError("oversampled DCT needs a factor F > 0")
        if self.m > self.N:
            warnings.warn(
                f"m={self.m} exceeds N={self.N}; not a compressed-sensing regime",
                stacklevel=2,
            )


@dataclass(frozen=True)
class GroundTruth:
    signal: np.ndarray
    support: np.ndarray
    sparsity: int


def gaussian_matrix(spec: EnsembleSpec) -> np.ndarray:
    """``G / sqrt(m)`` with i.i.d. standard normal ``G``."""
    if spec.kind is not EnsembleKind.GAUSSIAN:
        raise ValueError(f"expected a gaussian spec, got {spec.kind.value}")
    rng = make_rng(spec.seed)
    return rng.standard_normal((spec.m, spec.N)) / np.sqrt(spec.m)


def dct_matrix(spec: EnsembleSpec) -> np.ndarray:
    """Oversampled cosine matrix, column ``j`` is ``cos(2 pi w (j-1) / F) / sqrt(m)``.

    ``w`` is a single uniform draw on ``[0, 1]^m`` and the cosine acts
    entrywise, so larger ``F`` makes neighbouring columns more alike.
    """
    if spec.kind is not EnsembleKind.OVERSAMPLED_DCT:
        raise ValueError(f"expected an oversampled_dct spec, got {spec.kind.value}")
    rng = make_rng(spec.seed)
    w = rng.uniform(0.0, 1.0, size=spec.m)
    cols = np.arange(spec.N, dtype=float)
    return np.cos(2.0 * np.pi * np.outer(w, cols) / spec.F) / np.sqrt(spec.m)


def make_matrix(spec: EnsembleSpec) -> np.ndarray:
    if spec.kind is EnsembleKind.GAUSSIAN:
        return gaussian_matrix(spec)
    return dct_matrix(spec)


def sparse_signal(N: int, k: int, seed: int) -> GroundTruth:
    """k-sparse vector with uniformly random support and standard normal values."""
    if not 1 <= k <= N:
        raise ValueError(f"k must lie in [1, N={N}], got {k}")
    rng = make_rng(seed)
    support = np.sort(rng.choice(N, size=k, replace=False))
    x = np.zeros(N)
    x[support] = rng.standard_normal(k)
    # a normal draw of exactly 0.0 would shrink the support; it has probability 0
    return GroundTruth(signal=x, support=support, sparsity=int(k))


def compressible_signal(N: int, p: float) -> np.ndarray:
    """Power-law decay ``x_i = i^(-p)`` for ``i = 1..N``."""
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if not p > 0:
        raise ValueError(f"decay exponent must be > 0, got {p}")
    return np.arange(1, N + 1, dtype=float) ** (-float(p))


def noisy_measurements(a, x, sigma: float, seed: int) -> tuple[np.ndarray, float]:
    """``y = A x + eps`` with ``eps ~ N(0, sigma^2 I)``.

    Returns ``(y, eta)`` where ``eta = ||eps||_2`` of the realised draw, so
    the true signal is always feasible.
    """
    y = np.asarray(a) @ np.asarray(x)
    if sigma == 0:
        return y, 0.0
    eps = sigma * make_rng(seed).standard_normal(y.shape[0])
    return y + eps, float(np.linalg.norm(eps))


def mutual_coherence(a) -> float:
    """Largest absolute inner product between distinct normalised columns."""
    a = np.asarray(a, dtype=float)
    norms = np.linalg.norm(a, axis=0)
    u = a / np.where(norms > 0, norms, 1.0)
    gram = np.abs(u.T @ u)
    np.fill_diagonal(gram, 0.0)
    return float(gram.max())
