"""The q-ratio sparsity measure and the level-set predicates built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .model import as_signal, l1_norm

__all__ = [
    "SUPPORT_RTOL",
    "SparsityValue",
    "best_k_term_error",
    "level_set_member",
    "q_ratio_sparsity",
    "support_size",
]

# Entries below this fraction of max|z| count as zero in ||z||_0.
SUPPORT_RTOL = 1e-12


@dataclass(frozen=True)
class SparsityValue:
    q: float
    value: float
    normalized_profile: np.ndarray
    entropy: float


def support_size(z, rtol: float = SUPPORT_RTOL) -> int:
    z = np.abs(np.asarray(z, dtype=float))
    peak = z.max() if z.size else 0.0
    if peak == 0:
        return 0
    return int(np.count_nonzero(z > rtol * peak))


def q_ratio_sparsity(z, q: float) -> SparsityValue:
    """Effective sparsity ``s_q(z) = exp(H_q(pi(z)))`` of a non-zero vector.

    For ``q`` outside ``{0, 1, inf}`` this is ``(||z||_1/||z||_q)^(q/(q-1))``,
    evaluated in the log domain so that ``q`` close to 1 does not overflow.
    ``q = 0`` counts the support, ``q = 1`` is the exponential of the Shannon
    entropy of ``pi_i = |z_i|/||z||_1`` (with ``0 ln 0 = 0``) and ``q = inf``
    is ``||z||_1/||z||_inf``.

    Raises
    ------
    ValueError
        If ``z`` is the zero vector or ``q`` is negative.
    """
    z = as_signal(z)
    if q < 0 or math.isnan(q):
        raise ValueError(f"q must lie in [0, inf], got {q}")
    l1 = l1_norm(z)
    if l1 == 0:
        raise ValueError("sparsity undefined at zero")
    profile = np.abs(z) / l1

    if q == 0:
        value = float(support_size(z))
        entropy = math.log(value)
    elif q == 1:
        nz = profile[profile > 0]
        entropy = float(-np.sum(nz * np.log(nz)))
        value = math.exp(entropy)
    elif math.isinf(q):
        value = l1 / float(np.max(np.abs(z)))
        entropy = math.log(value)
    else:
        # (sum w)^(q/(q-1)) / (sum w^q)^(1/(q-1)) with w = |z|/max|z|; the
        # power form is exact on flat vectors, the log form guards q near 1
        w = np.abs(z) / float(np.max(np.abs(z)))
        s1, sq = float(np.sum(w)), float(np.sum(w**q))
        e = q / (q - 1.0)
        if e * math.log(s1) < 700.0:
            value = s1**e / sq ** (1.0 / (q - 1.0))
            entropy = math.log(value)
        else:
            entropy = e * math.log(s1) - math.log(sq) / (q - 1.0)
            value = math.exp(entropy)
    profile.setflags(write=False)
    return SparsityValue(q=q, value=value, normalized_profile=profile, entropy=entropy)


def level_set_member(z, q: float, k: float) -> bool:
    """True iff ``z`` lies in ``{s_q <= k}``."""
    return q_ratio_sparsity(z, q).value <= k


def best_k_term_error(x, k: int) -> float:
    """l1 distance from ``x`` to its best k-term approximation."""
    x = as_signal(x)
    n = x.shape[0]
    if not 0 <= k <= n:
        raise ValueError(f"k must lie in [0, {n}], got {k}")
    mags = np.sort(np.abs(x), kind="stable")
    return float(np.sum(mags[: n - k]))
