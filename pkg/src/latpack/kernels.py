"""Hot numeric kernels: pivoted elimination and a two-phase Bland simplex.

Everything here sticks to the numba-compatible subset of numpy so the same
source runs compiled or interpreted (see ``_jit``).
"""
import numpy as np

from ._jit import njit

LP_OPTIMAL = 0
LP_INFEASIBLE = 1
LP_UNBOUNDED = 2
LP_ITERLIMIT = 3


@njit
def rref(A, b, piv_tol):
    """Full-pivoting Gauss-Jordan on [A | b].

    Returns (M, pivcols, rank) where the first ``rank`` rows of M are in
    reduced form with unit pivots in columns ``pivcols[:rank]``.
    """
    m, n = A.shape
    M = np.empty((m, n + 1))
    M[:, :n] = A
    M[:, n] = b
    pivcols = np.full(m, -1, dtype=np.int64)
    used = np.zeros(n, dtype=np.bool_)
    rank = 0
    for r in range(m):
        best = 0.0
        bi = -1
        bj = -1
        for i in range(r, m):
            for j in range(n):
                if not used[j]:
                    v = abs(M[i, j])
                    if v > best:
                        best = v
                        bi = i
                        bj = j
        if bi < 0 or best <= piv_tol:
            break
        if bi != r:
            for j in range(n + 1):
                tmp = M[r, j]
                M[r, j] = M[bi, j]
                M[bi, j] = tmp
        p = M[r, bj]
        for j in range(n + 1):
            M[r, j] /= p
        M[r, bj] = 1.0
        for i in range(m):
            if i != r:
                f = M[i, bj]
                if f != 0.0:
                    for j in range(n + 1):
                        M[i, j] -= f * M[r, j]
                    M[i, bj] = 0.0
        used[bj] = True
        pivcols[r] = bj
        rank += 1
    return M, pivcols, rank


@njit
def affine_solution(A, b, piv_tol):
    """Particular solution and null-space basis (columns) of A x = b.

    Free variables are set to zero in the particular solution. The caller is
    responsible for the residual (consistency) test.
    """
    m, n = A.shape
    M, pivcols, rank = rref(A, b, piv_tol)
    x = np.zeros(n)
    is_piv = np.zeros(n, dtype=np.bool_)
    for r in range(rank):
        x[pivcols[r]] = M[r, n]
        is_piv[pivcols[r]] = True
    N = np.zeros((n, n - rank))
    k = 0
    for f in range(n):
        if is_piv[f]:
            continue
        N[f, k] = 1.0
        for r in range(rank):
            N[pivcols[r], k] = -M[r, f]
        k += 1
    return x, N, rank


@njit
def _pivot(T, basis, r, c):
    m = T.shape[0]
    ncol = T.shape[1]
    p = T[r, c]
    for j in range(ncol):
        T[r, j] /= p
    T[r, c] = 1.0
    for i in range(m):
        if i != r:
            f = T[i, c]
            if f != 0.0:
                for j in range(ncol):
                    T[i, j] -= f * T[r, j]
                T[i, c] = 0.0
    basis[r] = c


@njit
def _bland(T, basis, cost, allowed, tol, max_iter):
    """Maximize cost over the tableau; only columns < allowed may enter."""
    m = T.shape[0]
    rhs = T.shape[1] - 1
    for _ in range(max_iter):
        enter = -1
        for j in range(allowed):
            rc = cost[j]
            for i in range(m):
                rc -= cost[basis[i]] * T[i, j]
            if rc > tol:
                enter = j
                break
        if enter < 0:
            return LP_OPTIMAL
        leave = -1
        best = 0.0
        for i in range(m):
            a = T[i, enter]
            if a > tol:
                ratio = T[i, rhs] / a
                if leave < 0 or ratio < best - tol or (
                    ratio <= best + tol and basis[i] < basis[leave]
                ):
                    leave = i
                    best = ratio
        if leave < 0:
            return LP_UNBOUNDED
        _pivot(T, basis, leave, enter)
    return LP_ITERLIMIT


@njit
def simplex_max(A, b, c, tol):
    """max c.y  s.t.  A y <= b, y >= 0, by two-phase simplex with Bland's rule.

    Returns (status, y, objective).
    """
    m, n = A.shape
    na = 0
    for i in range(m):
        if b[i] < 0.0:
            na += 1
    ncol = n + m + na
    T = np.zeros((m, ncol + 1))
    basis = np.empty(m, dtype=np.int64)
    k = 0
    for i in range(m):
        s = 1.0 if b[i] >= 0.0 else -1.0
        for j in range(n):
            T[i, j] = s * A[i, j]
        T[i, n + i] = s
        T[i, ncol] = s * b[i]
        if s > 0.0:
            basis[i] = n + i
        else:
            T[i, n + m + k] = 1.0
            basis[i] = n + m + k
            k += 1
    max_iter = 50 * (m + ncol) + 100
    y = np.zeros(n)
    if na > 0:
        cost1 = np.zeros(ncol)
        for j in range(n + m, ncol):
            cost1[j] = -1.0
        st = _bland(T, basis, cost1, ncol, tol, max_iter)
        if st == LP_ITERLIMIT:
            return LP_ITERLIMIT, y, 0.0
        infeas = 0.0
        bscale = 1.0
        for i in range(m):
            if basis[i] >= n + m:
                infeas += T[i, ncol]
            bscale = max(bscale, abs(b[i]))
        if infeas > 1e-9 * bscale:
            return LP_INFEASIBLE, y, 0.0
        # drive zero-level artificials out of the basis where possible
        for i in range(m):
            if basis[i] >= n + m:
                for j in range(n + m):
                    if abs(T[i, j]) > 1e-9:
                        _pivot(T, basis, i, j)
                        break
    cost = np.zeros(ncol)
    for j in range(n):
        cost[j] = c[j]
    st = _bland(T, basis, cost, n + m, tol, max_iter)
    for i in range(m):
        if basis[i] < n:
            y[basis[i]] = T[i, ncol]
    obj = 0.0
    for j in range(n):
        obj += c[j] * y[j]
    return st, y, obj


@njit
def maxmin_slack(G, h, w, cap, tol):
    """max t  s.t.  G x + w t <= h,  t <= cap,  with x and t free.

    Rows with w = 0 are hard constraints; rows with w > 0 share the slack t.
    Returns (status, x, t).
    """
    m, r = G.shape
    nv = 2 * r + 2
    A = np.zeros((m + 1, nv))
    b = np.zeros(m + 1)
    for i in range(m):
        for j in range(r):
            A[i, j] = G[i, j]
            A[i, r + j] = -G[i, j]
        A[i, 2 * r] = w[i]
        A[i, 2 * r + 1] = -w[i]
        b[i] = h[i]
    A[m, 2 * r] = 1.0
    A[m, 2 * r + 1] = -1.0
    b[m] = cap
    c = np.zeros(nv)
    c[2 * r] = 1.0
    c[2 * r + 1] = -1.0
    st, y, obj = simplex_max(A, b, c, tol)
    x = np.empty(r)
    for j in range(r):
        x[j] = y[j] - y[r + j]
    return st, x, y[2 * r] - y[2 * r + 1]
