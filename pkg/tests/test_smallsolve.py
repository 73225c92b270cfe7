import numpy as np
import pytest
from scipy.optimize import linprog

from latpack import kernels
from latpack.smallsolve import (Inconsistent, LPProblem, lp_feasible, lp_feasible_strict,
                                solve_affine)


def test_solve_affine_unique(rng):
    A = rng.normal(size=(3, 3))
    x = rng.normal(size=3)
    sol = solve_affine(A, A @ x)
    assert sol.rank == 3 and sol.dim == 0
    assert np.allclose(sol.base, x)


def test_solve_affine_underdetermined(rng):
    A = rng.normal(size=(2, 5))
    b = rng.normal(size=2)
    sol = solve_affine(A, b)
    assert sol.rank == 2 and sol.dim == 3
    assert np.allclose(sol.directions @ sol.directions.T, np.eye(3))
    for t in rng.normal(size=(4, 3)):
        assert np.allclose(A @ sol.point(t), b)


def test_solve_affine_rank_deficient_consistent():
    A = np.array([[1.0, 2, 3], [2, 4, 6], [1, 0, 1]])
    sol = solve_affine(A, np.array([1.0, 2, 0]))
    assert sol.rank == 2 and sol.dim == 1


def test_solve_affine_inconsistent():
    with pytest.raises(Inconsistent):
        solve_affine(np.array([[1.0, 1], [2, 2]]), np.array([1.0, 3]))


def test_zero_matrix():
    assert solve_affine(np.zeros((2, 3)), np.zeros(2)).dim == 3
    with pytest.raises(Inconsistent):
        solve_affine(np.zeros((2, 3)), np.array([0.0, 1]))


def test_simplex_matches_scipy(rng):
    for _ in range(100):
        m, n = rng.integers(2, 8), rng.integers(1, 5)
        A = rng.normal(size=(m, n))
        b = rng.normal(size=m) + 0.5
        c = rng.normal(size=n)
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n, method="highs")
        st, y, obj = kernels.simplex_max(A, b, c, 1e-12)
        if ref.status == 2:
            assert st == kernels.LP_INFEASIBLE
        elif ref.status == 3:
            assert st == kernels.LP_UNBOUNDED
        else:
            assert st == kernels.LP_OPTIMAL
            assert obj == pytest.approx(-ref.fun, abs=1e-8)
            assert np.all(A @ y <= b + 1e-8) and np.all(y >= -1e-12)


def test_lp_feasible_box():
    A = np.vstack([np.eye(2), -np.eye(2)])
    p = LPProblem(A, np.ones(4))
    pt = lp_feasible(p)
    assert pt is not None and pt.slack == pytest.approx(1.0)
    assert lp_feasible(LPProblem(A, np.array([1.0, 1, -2, 1]))) is None


def test_lp_with_equalities():
    # x + y = 1 inside the unit box: feasible; x + y = 3: not
    A = np.vstack([np.eye(2), -np.eye(2)])
    b = np.array([1.0, 1, 0, 0])
    assert lp_feasible(LPProblem(A, b, np.array([[1.0, 1]]), np.array([1.0]))) is not None
    assert lp_feasible(LPProblem(A, b, np.array([[1.0, 1]]), np.array([3.0]))) is None


def test_touching_is_feasible_but_not_strict():
    # x <= 0 and -x <= 0 meet in a single point
    A = np.array([[1.0], [-1.0]])
    p = LPProblem(A, np.zeros(2))
    pt = lp_feasible(p)
    assert pt is not None and abs(pt.slack) < 1e-9
    assert lp_feasible_strict(p, [0]) is None
    assert lp_feasible_strict(LPProblem(A, np.array([1.0, 0])), [0]) is not None
