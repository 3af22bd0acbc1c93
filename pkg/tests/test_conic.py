import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qratio.conic import (
    ConicEngine,
    ConicStatus,
    ConicSubproblem,
    constraint_violation,
    project_l1_ball,
    project_soc,
    solve_lp,
    solve_subproblem,
)
from qratio.model import make_rng

cp = pytest.importorskip("cvxpy")


def test_l1_projection_examples():
    np.testing.assert_allclose(project_l1_ball([3, 0], 1), [1, 0])
    np.testing.assert_allclose(project_l1_ball([1, 1], 1), [0.5, 0.5])
    np.testing.assert_allclose(project_l1_ball([2, 1], 1), [1, 0])
    np.testing.assert_allclose(project_l1_ball([0.2, -0.3], 1), [0.2, -0.3])


def test_soc_projection_examples():
    u, s = project_soc([0.3, 0.4], 1)
    np.testing.assert_allclose(u, [0.3, 0.4])
    assert s == 1
    u, s = project_soc([1, 0], -2)
    np.testing.assert_allclose(u, [0, 0])
    assert s == 0
    u, s = project_soc([3, 4], 0)
    np.testing.assert_allclose(u, [1.5, 2])
    assert s == pytest.approx(2.5)


@settings(max_examples=200, deadline=None)
@given(
    st.lists(st.floats(-100, 100, allow_nan=False), min_size=1, max_size=10),
    st.floats(0.01, 50),
)
def test_l1_projection_is_feasible_and_optimal(z, r):
    z = np.array(z)
    p = project_l1_ball(z, r)
    assert np.sum(np.abs(p)) <= r * (1 + 1e-12) + 1e-12
    # variational inequality: (z - p)^T (w - p) <= 0 for ball vertices w
    for i in range(z.size):
        for sgn in (1.0, -1.0):
            w = np.zeros_like(z)
            w[i] = sgn * r
            assert (z - p) @ (w - p) <= 1e-8 * max(1.0, np.abs(z).sum()) ** 2


def test_bpdn_ball_example():
    p = ConicSubproblem(l1_weight=1.0, matrix=np.eye(2), measurements=np.array([5.0, 0.0]), noise_bound=1.0)
    sol = solve_subproblem(p)
    assert sol.status is ConicStatus.OPTIMAL
    np.testing.assert_allclose(sol.point, [4, 0], atol=1e-6)


def test_zero_measurements_equality():
    a = make_rng(1).standard_normal((3, 5))
    sol = solve_subproblem(ConicSubproblem(l1_weight=1.0, matrix=a, measurements=np.zeros(3)))
    np.testing.assert_allclose(sol.point, 0, atol=1e-12)
    assert sol.method == "simplex"


@pytest.mark.parametrize("method", ["simplex", "admm"])
def test_l1_ball_lp(method):
    sol = solve_lp(np.array([2.0, -1.0]), l1_radius=1.0, method=method)
    np.testing.assert_allclose(sol.point, [1, 0], atol=1e-6)
    assert sol.objective == pytest.approx(2, abs=1e-6)
    assert solve_lp(np.array([1.0, 0.0, 0.0]), l1_radius=1.0, method=method).objective == pytest.approx(1, abs=1e-6)
    sol = solve_lp(np.ones(2), l1_radius=1.0, lower=np.zeros(2), method=method)
    assert sol.objective == pytest.approx(1, abs=1e-6)


def test_unbounded_is_distinct_from_infeasible():
    a = np.array([[1.0, -1.0]])
    sol = solve_lp(np.array([1.0, 1.0]), matrix=a, measurements=np.array([0.0]))
    assert sol.status is ConicStatus.UNBOUNDED
    assert sol.objective == math.inf
    bad = solve_lp(np.array([1.0, 0.0]), matrix=np.array([[1.0, 0.0], [1.0, 0.0]]), measurements=np.array([1.0, 2.0]))
    assert bad.status is ConicStatus.INFEASIBLE


def test_admm_reports_infeasible_ball():
    a = np.array([[1.0, 0.0], [1.0, 0.0]])
    p = ConicSubproblem(l1_weight=1.0, matrix=a, measurements=np.array([1.0, 3.0]), noise_bound=0.5)
    assert solve_subproblem(p).status is ConicStatus.INFEASIBLE


def test_malformed_subproblems_rejected():
    with pytest.raises(ValueError):
        ConicSubproblem(l1_weight=1.0, size=3)
    with pytest.raises(ValueError):
        ConicSubproblem(l1_weight=-1.0, l1_radius=1.0, size=2)
    with pytest.raises(ValueError):
        ConicSubproblem(l1_weight=1.0, matrix=np.eye(2), measurements=np.ones(2), scaled=True)
    with pytest.raises(ValueError):
        ConicEngine(ConicSubproblem(l1_weight=1.0, matrix=np.eye(2), measurements=np.ones(2), noise_bound=0.1), "simplex")


def _cvx_value(a, y, eta, lam, c, radius, scaled, t_min):
    n = a.shape[1]
    v = cp.Variable(n)
    cons = []
    if scaled:
        t = cp.Variable()
        cons += [cp.norm(t * y - a @ v, 2) <= eta * t, t >= t_min]
    else:
        cons += [cp.norm(a @ v - y, 2) <= eta]
    if radius is not None:
        cons.append(cp.norm(v, 1) <= radius)
    prob = cp.Problem(cp.Minimize(lam * cp.norm(v, 1) - c @ v), cons)
    prob.solve(solver=cp.CLARABEL)
    return prob.value


@pytest.mark.parametrize("case", range(24))
def test_random_subproblems_match_interior_point_oracle(case):
    rng = make_rng(1000 + case)
    m = int(rng.integers(2, 7))
    n = int(rng.integers(m + 1, 9))
    a = rng.standard_normal((m, n))
    y = a @ rng.standard_normal(n)
    kind = case % 4
    eta = 0.0 if kind == 0 else float(rng.uniform(0.05, 0.5)) * np.linalg.norm(y)
    scaled = kind == 3
    lam = 1.0
    c = rng.standard_normal(n) * (0.0 if kind == 1 else 0.5)
    radius = None
    t_min = None
    if scaled:
        radius, lam, t_min = 1.0, 0.0, 0.05
    elif kind == 2:
        radius = 2.0 * np.abs(np.linalg.lstsq(a, y, rcond=None)[0]).sum()
    p = ConicSubproblem(
        l1_weight=lam, linear=c, matrix=a, measurements=y, noise_bound=eta,
        scaled=scaled, t_min=t_min, l1_radius=radius,
    )
    sol = solve_subproblem(p)
    assert sol.status is ConicStatus.OPTIMAL
    ref = _cvx_value(a, y, eta, lam, c, radius, scaled, t_min)
    assert p.objective(sol.point) == pytest.approx(ref, abs=1e-5 * max(1.0, abs(ref)))
    assert constraint_violation(p, sol.point, sol.t) <= 1e-6 * max(1.0, np.linalg.norm(y))


def test_admm_and_simplex_agree_on_lp():
    rng = make_rng(4)
    a = rng.standard_normal((5, 12))
    y = a @ (rng.standard_normal(12) * (rng.random(12) < 0.3))
    p = ConicSubproblem(l1_weight=1.0, linear=0.3 * rng.standard_normal(12), matrix=a, measurements=y)
    s1 = solve_subproblem(p, method="simplex")
    s2 = solve_subproblem(p, method="admm")
    assert p.objective(s2.point) == pytest.approx(p.objective(s1.point), abs=1e-5)


def test_determinism_and_residual_decrease():
    rng = make_rng(8)
    a = rng.standard_normal((6, 10))
    y = a @ rng.standard_normal(10)
    p = ConicSubproblem(l1_weight=1.0, matrix=a, measurements=y, noise_bound=0.3)
    s1, s2 = solve_subproblem(p), solve_subproblem(p)
    np.testing.assert_array_equal(s1.point, s2.point)
    assert s1.primal_residual < 1e-6 * max(1.0, np.linalg.norm(y))


def test_warm_start_does_not_double_iterations():
    rng = make_rng(12)
    a = rng.standard_normal((8, 20))
    y = a @ rng.standard_normal(20)
    engine = ConicEngine(
        ConicSubproblem(l1_weight=1.0, matrix=a, measurements=y, noise_bound=0.2, l1_radius=50.0), "admm"
    )
    base = 0.2 * rng.standard_normal(20)
    prev = None
    for j in range(6):
        c = base * (1 + 0.01 * j)
        cold = engine.solve(linear=c)
        warm = engine.solve(linear=c, warm_start=prev) if prev is not None else cold
        assert warm.iterations <= 2 * cold.iterations + 25
        prev = warm


def test_residual_box_relaxation_bounds_the_cone():
    rng = make_rng(21)
    a = rng.standard_normal((6, 12))
    y = rng.standard_normal(6)
    base = dict(matrix=a, measurements=y, noise_bound=0.3, scaled=True, t_min=0.01, l1_radius=1.0)
    cone = ConicEngine(ConicSubproblem(**base))
    box = ConicEngine(ConicSubproblem(residual_box=True, **base))
    assert box.method == "simplex"
    for i in range(12):
        c = np.zeros(12)
        c[i] = 1.0
        hi, lo = box.solve(linear=c), cone.solve(linear=c)
        assert hi.point[i] >= lo.point[i] - 1e-6
        r = hi.t * y - a @ hi.point
        assert np.max(np.abs(r)) <= 0.3 * hi.t + 1e-8


def test_residual_box_rejected_by_admm():
    p = ConicSubproblem(matrix=np.eye(2), measurements=np.ones(2), noise_bound=0.1, residual_box=True)
    with pytest.raises(ValueError):
        ConicEngine(p, "admm")
