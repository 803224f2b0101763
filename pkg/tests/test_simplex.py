import numpy as np
import pytest
from scipy.optimize import linprog as highs

from sphpoly.simplex import LPStatus, linprog


def test_textbook_example():
    # max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18  ->  (2, 6), value 36
    res = linprog([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18])
    assert res.status is LPStatus.OPTIMAL
    np.testing.assert_allclose(res.x, [2, 6], atol=1e-12)
    assert abs(res.fun + 36) < 1e-12


def test_equality_and_negative_rhs():
    # min x + y, x + y = 2, x - y <= -1
    res = linprog([1, 1], [[1, -1]], [-1], [[1, 1]], [2])
    assert res.status is LPStatus.OPTIMAL
    assert abs(res.fun - 2) < 1e-12
    assert res.x[0] - res.x[1] <= -1 + 1e-12


def test_infeasible():
    res = linprog([1, 0], [[1, 1]], [1], [[1, 1]], [3])
    assert res.status is LPStatus.INFEASIBLE


def test_unbounded():
    res = linprog([-1, 0], [[0, 1]], [1])
    assert res.status is LPStatus.UNBOUNDED


def test_redundant_equalities():
    res = linprog([1, 2, 3], A_eq=[[1, 1, 1], [2, 2, 2]], b_eq=[1, 2])
    assert res.status is LPStatus.OPTIMAL
    assert abs(res.fun - 1) < 1e-12


def test_iteration_limit():
    res = linprog([-3, -5], [[1, 0], [0, 2], [3, 2]], [4, 12, 18], max_iter=1)
    assert res.status is LPStatus.ITERATION_LIMIT


@pytest.mark.parametrize("seed", range(40))
def test_matches_highs(seed):
    rng = np.random.default_rng(seed)
    n, m_ub, m_eq = rng.integers(2, 9), rng.integers(1, 8), rng.integers(0, 3)
    c = rng.normal(size=n)
    A_ub = rng.normal(size=(m_ub, n))
    b_ub = rng.uniform(-1, 3, m_ub)
    A_eq = rng.normal(size=(m_eq, n)) if m_eq else None
    b_eq = rng.normal(size=m_eq) if m_eq else None
    # box the variables so optimal programs are common
    A_ub = np.vstack([A_ub, np.eye(n)])
    b_ub = np.concatenate([b_ub, np.full(n, 5.0)])
    ref = highs(c, A_ub, b_ub, A_eq, b_eq, bounds=(0, None), method="highs")
    res = linprog(c, A_ub, b_ub, A_eq, b_eq)
    if ref.status == 0:
        assert res.status is LPStatus.OPTIMAL
        assert abs(res.fun - ref.fun) < 1e-8 * max(1.0, abs(ref.fun))
        assert np.all(A_ub @ res.x <= b_ub + 1e-9)
        assert np.all(res.x >= -1e-12)
    else:
        assert ref.status == 2
        assert res.status is LPStatus.INFEASIBLE
