"""Small dense linear systems and LP feasibility with max-min slack."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels

EPS_LIN = 1e-10
EPS_LP = 1e-9
EPS_STRICT = 1e-7
PIVOT_TOL = 1e-11
_SIMPLEX_TOL = 1e-12


class Inconsistent(ValueError):
    """The right-hand side is outside the column span."""


@dataclass(frozen=True)
class AffineSolutionSet:
    base: np.ndarray        # (n,)
    directions: np.ndarray  # (r, n), orthonormal rows
    rank: int

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        return self.base + t @ self.directions


@dataclass
class LPProblem:
    """Inequalities ``A_ub x <= b_ub`` and optional equalities ``A_eq x = b_eq``."""
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray | None = None
    b_eq: np.ndarray | None = None

    @property
    def nvars(self) -> int:
        if self.A_ub.size:
            return self.A_ub.shape[1]
        return self.A_eq.shape[1]


@dataclass(frozen=True)
class FeasiblePoint:
    x: np.ndarray
    slack: float  # max-min normalized slack reached by the LP (capped at 1)


def solve_affine(A, b) -> AffineSolutionSet:
    """Solution set of A x = b as base + span(directions).

    Raises Inconsistent when the residual test fails.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    b = np.asarray(b, dtype=float).reshape(-1)
    m, n = A.shape
    amax = float(np.abs(A).max()) if A.size else 0.0
    if amax == 0.0:
        if np.any(np.abs(b) > 0.0):
            raise Inconsistent("zero matrix with nonzero right-hand side")
        return AffineSolutionSet(np.zeros(n), np.eye(n), 0)
    x, N, rank = kernels.affine_solution(A, b, PIVOT_TOL * amax)
    tol = EPS_LIN * amax * max(1.0, float(np.abs(x).max(initial=0.0)))
    if np.abs(A @ x - b).max(initial=0.0) > tol:
        raise Inconsistent(f"residual above {tol:.3g}")
    if N.shape[1]:
        Q, _ = np.linalg.qr(N)
        x = x - Q @ (Q.T @ x)
        D = Q.T.copy()
    else:
        D = np.zeros((0, n))
    return AffineSolutionSet(x, D, int(rank))


def _reduce(p: LPProblem):
    """Eliminate equalities; returns (sol, G, h) over the free parameters, or None."""
    n = p.nvars
    if p.A_eq is not None and len(p.A_eq):
        try:
            sol = solve_affine(p.A_eq, p.b_eq)
        except Inconsistent:
            return None
    else:
        sol = AffineSolutionSet(np.zeros(n), np.eye(n), 0)
    A = np.asarray(p.A_ub, dtype=float).reshape(-1, n)
    b = np.asarray(p.b_ub, dtype=float).reshape(-1)
    norms = np.linalg.norm(A, axis=1)
    norms[norms == 0.0] = 1.0
    G = (A @ sol.directions.T) / norms[:, None]
    h = (b - A @ sol.base) / norms
    return sol, G, h


def _solve_slack(sol, G, h, w):
    # rows that no longer depend on the parameters are checked directly
    live = np.linalg.norm(G, axis=1) > 1e-12
    const_slack = h[~live]
    const_w = w[~live]
    if G.shape[1] == 0 or not live.any():
        if np.any(const_slack[const_w == 0] < 0):
            return None
        t = float(const_slack[const_w > 0].min(initial=1.0))
        return sol.base.copy(), min(t, 1.0)
    if np.any(const_slack[const_w == 0] < 0):
        return None
    st, lam, t = kernels.maxmin_slack(
        np.ascontiguousarray(G[live]), h[live].copy(), w[live].copy(), 1.0, _SIMPLEX_TOL)
    if st == kernels.LP_INFEASIBLE:
        return None
    if st != kernels.LP_OPTIMAL:
        raise RuntimeError(f"simplex failed with status {st}")
    t = min(t, float(const_slack[const_w > 0].min(initial=1.0)))
    return sol.point(lam), t


def lp_feasible(p: LPProblem, eps: float = EPS_LP) -> FeasiblePoint | None:
    """A point meeting all constraints within ``eps`` (normalized slack), or None."""
    red = _reduce(p)
    if red is None:
        return None
    sol, G, h = red
    if G.shape[0] == 0:
        return FeasiblePoint(sol.base.copy(), 1.0)
    res = _solve_slack(sol, G, h, np.ones(len(h)))
    if res is None or res[1] < -eps:
        return None
    return FeasiblePoint(res[0], res[1])


def lp_feasible_strict(p: LPProblem, strict, eps: float = EPS_LP,
                       eps_strict: float = EPS_STRICT) -> FeasiblePoint | None:
    """Like lp_feasible, but rows listed in ``strict`` need slack >= eps_strict.

    The returned slack is the minimum over the strict rows.
    """
    strict = np.asarray(list(strict), dtype=np.int64)
    if strict.size == 0:
        return lp_feasible(p, eps)
    red = _reduce(p)
    if red is None:
        return None
    sol, G, h = red
    w = np.zeros(len(h))
    w[strict] = 1.0
    h = np.where(w > 0, h, h + eps)
    res = _solve_slack(sol, G, h, w)
    if res is None or res[1] < eps_strict:
        return None
    return FeasiblePoint(res[0], res[1])
