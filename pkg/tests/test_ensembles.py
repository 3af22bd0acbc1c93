import math

import numpy as np
import pytest

from qratio.ensembles import (
    EnsembleKind,
    EnsembleSpec,
    compressible_signal,
    dct_matrix,
    gaussian_matrix,
    make_matrix,
    mutual_coherence,
    noisy_measurements,
    sparse_signal,
)
from qratio.model import make_rng
from qratio.sparsity import q_ratio_sparsity, support_size


def test_gaussian_is_deterministic():
    spec = EnsembleSpec("gaussian", 64, 256, seed=9)
    a, b = gaussian_matrix(spec), gaussian_matrix(spec)
    assert a.tobytes() == b.tobytes()
    assert not np.array_equal(a, gaussian_matrix(EnsembleSpec("gaussian", 64, 256, seed=10)))


def test_gaussian_column_norms_near_one():
    a = gaussian_matrix(EnsembleSpec("gaussian", 64, 256, seed=1))
    assert abs(np.linalg.norm(a, axis=0).mean() - 1) < 0.1


def test_dct_first_column_constant():
    a = dct_matrix(EnsembleSpec("dct", 20, 40, F=5, seed=3))
    np.testing.assert_array_equal(a[:, 0], np.full(20, 1 / math.sqrt(20)))


def test_dct_scalar_reevaluation():
    spec = EnsembleSpec(EnsembleKind.OVERSAMPLED_DCT, 16, 50, F=10, seed=4)
    a = dct_matrix(spec)
    w = make_rng(4).uniform(0.0, 1.0, size=16)
    rng = make_rng(99)
    for _ in range(50):
        i, j = int(rng.integers(16)), int(rng.integers(50))
        assert a[i, j] == pytest.approx(math.cos(2 * math.pi * w[i] * j / 10) / 4.0, abs=1e-14)


def test_dct_coherence_grows_with_factor():
    lo = mutual_coherence(make_matrix(EnsembleSpec("dct", 64, 256, F=1, seed=0)))
    hi = mutual_coherence(make_matrix(EnsembleSpec("dct", 64, 256, F=10, seed=0)))
    assert hi > lo
    assert hi > 0.99


def test_dct_needs_factor():
    with pytest.raises(ValueError):
        EnsembleSpec("dct", 4, 8)


def test_kind_parse():
    assert EnsembleKind.parse("DCT") is EnsembleKind.OVERSAMPLED_DCT
    assert EnsembleKind.parse(EnsembleKind.GAUSSIAN) is EnsembleKind.GAUSSIAN
    with pytest.raises(ValueError):
        EnsembleKind.parse("bernoulli")


def test_sparse_signal():
    g = sparse_signal(256, 10, 5)
    assert support_size(g.signal) == 10
    np.testing.assert_array_equal(np.flatnonzero(g.signal), g.support)
    assert sparse_signal(256, 10, 5).signal.tobytes() == g.signal.tobytes()
    assert support_size(sparse_signal(12, 12, 1).signal) == 12
    with pytest.raises(ValueError):
        sparse_signal(5, 6, 0)


def test_compressible_signal():
    x = compressible_signal(50, 2)
    assert q_ratio_sparsity(x, math.inf).value == pytest.approx(1.6251, abs=5e-4)
    assert q_ratio_sparsity(x, 0).value == 50
    np.testing.assert_array_equal(compressible_signal(1, 3.0), [1.0])


def test_noise_bound_is_realised_norm():
    a = gaussian_matrix(EnsembleSpec("gaussian", 30, 60, seed=2))
    x = sparse_signal(60, 4, 3).signal
    y, eta = noisy_measurements(a, x, 0.1, 7)
    assert np.linalg.norm(a @ x - y) == pytest.approx(eta, rel=1e-14)
    y0, eta0 = noisy_measurements(a, x, 0.0, 7)
    assert eta0 == 0.0
    np.testing.assert_array_equal(y0, a @ x)


def test_coherence_of_orthonormal_columns():
    assert mutual_coherence(np.eye(4)) == 0.0
