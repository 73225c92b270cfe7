"""Search for a critical lattice of P - P and the densest lattice packing of P.

The pipeline per case: enumerate facet selections compatible with the
triple set, drop those whose test set cannot sit on the facets (S0), solve
the linear conditions for a family of bases, find the critical affine
subspaces of the determinant on that family and certify one admissible
basis per subspace.
"""
from __future__ import annotations

import itertools
import os
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .poly import Poly
from .polysolve import AffineSubspace, gradient_critical_subspaces
from .polytope import (Location, Polytope, classify_point, difference_body, facet_boxes,
                       linear_symmetries)
from .smallsolve import EPS_LP, EPS_STRICT, Inconsistent, LPProblem, lp_feasible, solve_affine

CASES = ("I", "II", "III", "IV")
CASE_KIND = {"I": 1, "II": 2, "III": 3, "IV": 3}
DET_ZERO = 1e-12    # |det| below this (unit-circumradius scale) is not a basis
TIE_REL = 1e-9      # relative determinant tolerance for ties
LAMBDA_TOL = 1e-9   # strict sign threshold in the case IV system

_U2 = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 0)]
_TEST_SETS = {
    1: [(1, 0, 0), (0, 1, 0), (0, 0, 1), (0, 1, -1), (-1, 0, 1), (1, -1, 0)],
    2: _U2,
    3: _U2 + [(1, 1, 1)],
}
# points that must avoid int(P0) on top of the test set (kind 3 has none)
_EXCLUSIONS = {1: [(-1, 1, 1), (1, -1, 1), (1, 1, -1)], 2: [(1, 1, 1)], 3: []}


class SeedNotFound(RuntimeError):
    pass


class RankDeficient(Exception):
    """The linear system of a selection has rank below the number of test vectors."""


class NotApplicable(Exception):
    """No supporting hyperplane of the case IV shape exists for a selection."""


class NoLatticeFound(RuntimeError):
    pass


def test_set_vectors(kind: int) -> list[tuple[int, int, int]]:
    if kind not in _TEST_SETS:
        raise ValueError(f"test set kind must be 1, 2 or 3, got {kind}")
    return list(_TEST_SETS[kind])


def sigma_of(kind: int) -> int:
    return -1 if kind == 1 else 1


def relation_triples(kind: int) -> dict[int, list[tuple[int, int]]]:
    """For each slot s >= 3 (0-based) the pairs (i, j) with u_i + sigma u_j = u_s."""
    U = [np.array(u) for u in test_set_vectors(kind)]
    sig = sigma_of(kind)
    out: dict[int, list[tuple[int, int]]] = {}
    for s in range(3, len(U)):
        pairs = []
        for i in range(s):
            for j in range(s):
                if i == j or (sig == 1 and j < i):
                    continue
                if np.array_equal(U[i] + sig * U[j], U[s]):
                    pairs.append((i, j))
        assert pairs, f"slot {s} of kind {kind} has no relation"
        out[s] = pairs
    return out


# -- triple set ----------------------------------------------------------------
def _row(c, a) -> np.ndarray:
    return np.kron(np.asarray(c, dtype=float), a)


def triple_lp(P0: Polytope, i: int, j: int, k: int, sigma: int = 1) -> bool:
    """(F_i + sigma F_j) meets F_k, decided on the facet descriptions of the three."""
    N, b = P0.normals, P0.offsets
    eq = [(_row((1, 0), N[i]), b[i]), (_row((0, 1), N[j]), b[j]),
          (_row((1, sigma), N[k]), b[k])]
    ub = [(_row((1, 0), N[m]), b[m]) for m in P0.neighbors[i]]
    ub += [(_row((0, 1), N[m]), b[m]) for m in P0.neighbors[j]]
    ub += [(_row((1, sigma), N[m]), b[m]) for m in P0.neighbors[k]]
    prob = LPProblem(np.array([r for r, _ in ub]), np.array([v for _, v in ub]),
                     np.array([r for r, _ in eq]), np.array([v for _, v in eq]))
    return lp_feasible(prob) is not None


@dataclass
class TripleSet:
    """The facet triples with (F_i + sigma F_j) meeting F_k.

    Only the sigma = +1 table is stored: since -F_j is the antipodal facet,
    the sigma = -1 view maps j to its antipode.
    """
    n: int
    antipode: np.ndarray
    plus: dict = field(default_factory=dict)       # (i, j) -> sorted tuple of k
    g_plus: list = field(default_factory=list)     # i -> frozenset of j
    sigma: int = 1
    lp_count: int = 0

    def with_sigma(self, sigma: int) -> "TripleSet":
        return TripleSet(self.n, self.antipode, self.plus, self.g_plus, sigma, self.lp_count)

    def _j(self, j: int) -> int:
        return j if self.sigma == 1 else int(self.antipode[j])

    def G(self, i: int) -> frozenset:
        if self.sigma == 1:
            return self.g_plus[i]
        return frozenset(int(self.antipode[j]) for j in self.g_plus[i])

    def third(self, i: int, j: int) -> tuple:
        return self.plus.get((i, self._j(j)), ())

    def contains(self, i: int, j: int, k: int) -> bool:
        return k in self.third(i, j)

    @property
    def triples(self) -> set:
        return {(i, j, k) for i in range(self.n) for j in self.G(i) for k in self.third(i, j)}


class _TripleOracle:
    """Box-filtered, memoised membership tests for sigma = +1."""

    def __init__(self, P0: Polytope):
        self.P0 = P0
        lo, hi = facet_boxes(P0)
        pad = 10 * P0.tol
        self.lo, self.hi = lo - pad, hi + pad
        self.memo: dict = {}
        self.lp_count = 0

    def thirds(self, i: int, j: int) -> tuple:
        key = (min(i, j), max(i, j))
        if key not in self.memo:
            slo, shi = self.lo[i] + self.lo[j], self.hi[i] + self.hi[j]
            cand = np.flatnonzero(np.all(slo <= self.hi, axis=1) & np.all(self.lo <= shi, axis=1))
            ks = []
            for k in cand:
                self.lp_count += 1
                if triple_lp(self.P0, key[0], key[1], int(k)):
                    ks.append(int(k))
            self.memo[key] = tuple(ks)
        return self.memo[key]


def find_seed_facet(P0: Polytope, i: int, sigma: int = 1, oracle: _TripleOracle | None = None) -> int:
    """A facet j with (F_i + sigma F_j) meeting the boundary.

    The facets crossed by a plane through 0 and the centroid of F_i are tried
    first, in angular order around that plane; all facets are the fallback.
    """
    oracle = oracle or _TripleOracle(P0)
    flip = (lambda j: j) if sigma == 1 else (lambda j: int(P0.antipode[j]))
    v = P0.facet_centroid(i)
    axis = np.eye(3)[int(np.argmin(np.abs(v)))]
    nrm = np.cross(v, axis)
    nrm /= np.linalg.norm(nrm)
    side = P0.vertices @ nrm
    tol = P0.tol
    crossed = [j for j, ring in enumerate(P0.facets)
               if side[list(ring)].min() <= tol and side[list(ring)].max() >= -tol]
    e1 = v / np.linalg.norm(v)
    e2 = np.cross(nrm, e1)
    ang = {j: np.arctan2(P0.facet_centroid(j) @ e2, P0.facet_centroid(j) @ e1) % (2 * np.pi)
           for j in crossed}
    order = sorted(crossed, key=lambda j: (ang[j], j))
    for j in order + [j for j in range(P0.n_facets) if j not in ang]:
        if oracle.thirds(i, flip(j)):
            return j
    raise SeedNotFound(f"no facet pairs with facet {i}")


def build_triple_set(P0: Polytope, sigma: int = 1) -> TripleSet:
    """G(F_i) by breadth-first growth over edge neighbors from a seed facet."""
    if not P0.symmetric:
        raise ValueError("triple sets need a centrally symmetric body")
    oracle = _TripleOracle(P0)
    n = P0.n_facets
    plus: dict = {}
    g_plus = []
    for i in range(n):
        seed = find_seed_facet(P0, i, 1, oracle)
        found: set[int] = set()
        seen = {seed}
        queue = deque([seed])
        while queue:
            j = queue.popleft()
            ks = oracle.thirds(i, j)
            if not ks:
                continue
            found.add(j)
            plus[(i, j)] = ks
            for m in P0.neighbors[j]:
                if m not in seen:
                    seen.add(m)
                    queue.append(m)
        g_plus.append(frozenset(found))
    ts = TripleSet(n, P0.antipode.copy(), plus, g_plus, 1, oracle.lp_count)
    return ts.with_sigma(sigma)


def brute_triple_set(P0: Polytope, sigma: int = 1) -> TripleSet:
    """All n^3 triples by direct LP; the reference for build_triple_set."""
    n = P0.n_facets
    plus: dict = {}
    g_plus = [set() for _ in range(n)]
    for i in range(n):
        for j in range(n):
            ks = tuple(k for k in range(n) if triple_lp(P0, i, j, k))
            if ks:
                plus[(i, j)] = ks
                g_plus[i].add(j)
    return TripleSet(n, P0.antipode.copy(), plus, [frozenset(g) for g in g_plus],
                     1, n ** 3).with_sigma(sigma)


# -- selections ----------------------------------------------------------------
def representatives(P0: Polytope) -> list[int]:
    """One facet per antipodal pair (W and -W span the same lattice)."""
    return [i for i in range(P0.n_facets) if i <= int(P0.antipode[i])]


def basis_symmetries(case: str) -> list[tuple[tuple, tuple]]:
    """Relabelings of a selection induced by W -> eps * W * P_pi.

    Each entry is (slot_map, flip): the new selection has at slot s the facet
    of slot slot_map[s], replaced by its antipode where flip[s] is set. Case IV
    distinguishes slots 3 and 6, so only the swap of b1 and b2 survives there.
    """
    kind = CASE_KIND[case]
    U = [np.array(u) for u in test_set_vectors(kind)]
    perms = [p for p in itertools.permutations(range(3)) if case != "IV" or p[2] == 2]
    out = []
    for perm in perms:
        Pm = np.eye(3, dtype=int)[:, list(perm)]
        for eps in (1, -1):
            smap, flip = [], []
            for c in U:
                img = Pm @ c
                for t, d in enumerate(U):
                    if np.array_equal(img, d) or np.array_equal(img, -d):
                        delta = 1 if np.array_equal(img, d) else -1
                        smap.append(t)
                        flip.append(eps * delta == -1)
                        break
                else:
                    raise AssertionError("test set not closed under permutation")
            out.append((tuple(smap), tuple(flip)))
    return out


def is_canonical(sel, syms, antipode) -> bool:
    """sel is the lexicographically smallest selection of its basis-symmetry orbit."""
    sel = tuple(sel)
    for smap, flip in syms:
        img = tuple(int(antipode[sel[t]]) if f else sel[t] for t, f in zip(smap, flip))
        if img < sel:
            return False
    return True


class SelectionGroup:
    """Relabelings of selections by basis symmetries combined with linear maps fixing P0.

    W and A W eps P_pi give the same |det| and the same admissibility when
    A P0 = P0, so only the lexicographically smallest selection of each orbit
    needs to be examined. ``canonical_prefix`` also decides partial
    selections whenever the compared slots are already filled.
    """

    def __init__(self, P0: Polytope, case: str, use_polytope: bool = True):
        syms = basis_symmetries(case)
        pms = [s.facet_perm for s in linear_symmetries(P0)] if use_polytope \
            else [np.arange(P0.n_facets)]
        seen = set()
        src, flip, perm = [], [], []
        for pm in pms:
            for smap, fl in syms:
                key = (tuple(pm.tolist()), smap, fl)
                if key in seen:
                    continue
                seen.add(key)
                src.append(smap)
                flip.append(fl)
                perm.append(pm)
        self.src = np.array(src, dtype=np.int64)
        self.flip = np.array(flip, dtype=bool)
        self.perm = np.array(perm, dtype=np.int64)
        self.antipode = np.asarray(P0.antipode, dtype=np.int64)

    def __len__(self) -> int:
        return len(self.src)

    def canonical_prefix(self, sel) -> bool:
        """False when some element provably maps every completion of sel below it."""
        d = len(sel)
        s = np.asarray(sel, dtype=np.int64)
        src = self.src[:, :d]
        known = src < d
        vals = s[np.where(known, src, 0)]
        vals = np.where(self.flip[:, :d], self.antipode[vals], vals)
        img = np.take_along_axis(self.perm, vals, axis=1)
        diff = (img != s) | ~known
        first = np.argmax(diff, axis=1)
        rows = np.arange(len(img))
        bad = diff[rows, first] & known[rows, first] & (img[rows, first] < s[first])
        return not bool(bad.any())


def enumerate_selections(case: str, ts: TripleSet, P0: Polytope, first=None,
                         canonical: bool = False):
    """Selections (l_1, ..., l_k) whose relation triples all lie in ts, in lexicographic order.

    ``first`` restricts l_1 (defaults to one facet per antipodal pair). With
    ``canonical`` only one selection per symmetry orbit is emitted (see
    SelectionGroup).
    """
    if canonical:
        group = SelectionGroup(P0, case)
        yield from _selection_tree(case, ts, P0, first, group.canonical_prefix)
        return
    yield from _selection_tree(case, ts, P0, first)


def _selection_tree(case: str, ts: TripleSet, P0: Polytope, first=None, prune=None,
                    counts: "Counts | None" = None):
    """Depth-first selection enumeration; ``prune(partial)`` may cut a subtree.

    ``counts.pruned_by_G`` collects the branches (partial selection, next
    facet) that the triple set rejects.
    """
    kind = CASE_KIND[case]
    if ts.sigma != sigma_of(kind):
        raise ValueError("triple set built for the other sign")
    k = len(test_set_vectors(kind))
    rel = relation_triples(kind)
    firsts = representatives(P0) if first is None else sorted(first)
    sel: list[int] = []

    def cands():
        d = len(sel)
        if d == 0:
            return firsts
        if d == 1:
            return sorted(ts.G(sel[0]))
        if d == 2:
            return sorted(ts.G(sel[0]) & ts.G(sel[1]))
        out = None
        for i, j in rel[d]:
            t = set(ts.third(sel[i], sel[j]))
            out = t if out is None else out & t
        return sorted(out)

    def rec():
        if len(sel) == k:
            yield tuple(sel)
            return
        cs = cands()
        if counts is not None and sel:
            counts.pruned_by_G += P0.n_facets - len(cs)
        for l in cs:
            sel.append(l)
            if prune is None or not prune(sel):
                yield from rec()
            sel.pop()

    yield from rec()


def _slot_constraints(P0: Polytope, sel, kind: int, slot6_all: bool = False):
    """Inequality rows over vec(W) keeping each u_s inside its facet."""
    U = test_set_vectors(kind)
    rows, rhs = [], []
    for s, (c, l) in enumerate(zip(U, sel)):
        facets = range(P0.n_facets) if (slot6_all and s == 5) else P0.neighbors[l]
        for m in facets:
            rows.append(_row(c, P0.normals[m]))
            rhs.append(P0.offsets[m])
    return np.array(rows), np.array(rhs)


def _plane_rows(P0: Polytope, sel, kind: int):
    U = test_set_vectors(kind)
    A = np.array([_row(c, P0.normals[l]) for c, l in zip(U, sel)])
    b = np.array([P0.offsets[l] for l in sel])
    return A, b


def selection_lp(P0: Polytope, sel, case: str) -> LPProblem:
    kind = CASE_KIND[case]
    A_eq, b_eq = _plane_rows(P0, sel, kind)
    A_ub, b_ub = _slot_constraints(P0, sel, kind)
    return LPProblem(A_ub, b_ub, A_eq, b_eq)


def selection_feasible(P0: Polytope, sel, case: str) -> bool:
    """Step S0: some W puts every test vector u_s on its facet F_{l_s}."""
    return lp_feasible(selection_lp(P0, sel, case)) is not None


# -- families --------------------------------------------------------------------
def _mat(vec: np.ndarray) -> np.ndarray:
    # vec(W) stacks the columns w1, w2, w3
    return np.asarray(vec, dtype=float).reshape(3, 3).T


def _vec(W: np.ndarray) -> np.ndarray:
    return np.asarray(W, dtype=float).T.reshape(9)


@dataclass(frozen=True)
class ParamFamily:
    """W(lam) = C + sum_j lam_j M[j]."""
    C: np.ndarray
    M: np.ndarray  # (r, 3, 3)
    selection: tuple
    case: str
    planes: tuple = ()  # (normal, offset) per slot; case IV may replace slot 6

    @property
    def r(self) -> int:
        return len(self.M)

    def at(self, lam) -> np.ndarray:
        lam = np.asarray(lam, dtype=float).reshape(-1)
        return self.C + np.tensordot(lam, self.M, axes=1) if self.r else self.C.copy()


@dataclass(frozen=True)
class AdjustedSelection:
    selection: tuple
    normal: np.ndarray   # unit normal of the replacement plane for slot 6
    offset: float
    lambdas: np.ndarray  # (lam1, lam2, lam3) with lam6 = 1


def case4_adjust(P0: Polytope, sel) -> AdjustedSelection:
    """Replace H_6 by the supporting plane with normal lam1 v1 + lam2 v2."""
    if len(sel) != 7:
        raise ValueError("case IV selections have 7 facets")
    v1, v2, v3, v6 = (P0.normals[sel[s]] for s in (0, 1, 2, 5))
    V = np.column_stack([v1, v2, v3])
    if abs(np.linalg.det(V)) <= LAMBDA_TOL:
        raise NotApplicable("v1, v2, v3 are linearly dependent")
    lam = np.linalg.solve(V, v6)
    if lam[0] <= LAMBDA_TOL or lam[1] <= LAMBDA_TOL:
        raise NotApplicable("lambda_1 and lambda_2 must be positive")
    n = lam[0] * v1 + lam[1] * v2
    n /= np.linalg.norm(n)
    h = float(np.max(P0.vertices @ n))
    # the plane has to touch F_{l6}, where u6 sits
    if float(np.max(P0.facet_vertices(sel[5]) @ n)) < h - 10 * P0.tol:
        raise NotApplicable("replacement plane misses facet 6")
    return AdjustedSelection(tuple(sel), n, h, lam)


def parameterize_selection(P0: Polytope, sel, case: str,
                           adjusted: AdjustedSelection | None = None) -> ParamFamily:
    kind = CASE_KIND[case]
    U = test_set_vectors(kind)
    planes = [(P0.normals[l], float(P0.offsets[l])) for l in sel]
    if adjusted is not None:
        planes[5] = (adjusted.normal, adjusted.offset)
    A = np.array([_row(c, a) for c, (a, _) in zip(U, planes)])
    b = np.array([h for _, h in planes])
    try:
        sol = solve_affine(A, b)
    except Inconsistent as exc:
        raise RankDeficient(str(exc)) from exc
    if sol.rank < len(sel):
        raise RankDeficient(f"rank {sol.rank} < {len(sel)}")
    M = np.array([_mat(d) for d in sol.directions]).reshape(-1, 3, 3)
    return ParamFamily(_mat(sol.base), M, tuple(sel), case, tuple(planes))


def det_polynomial(fam: ParamFamily) -> Poly:
    """det(C + sum lam_j M_j) expanded in r = fam.r variables."""
    r = fam.r
    if r == 0:
        raise ValueError("zero-parameter family has a constant determinant")
    E = [[Poly.linear(fam.C[a, b], fam.M[:, a, b]) for b in range(3)] for a in range(3)]
    p = (E[0][0] * (E[1][1] * E[2][2] - E[1][2] * E[2][1])
         - E[0][1] * (E[1][0] * E[2][2] - E[1][2] * E[2][0])
         + E[0][2] * (E[1][0] * E[2][1] - E[1][1] * E[2][0]))
    # cancellation leaves round-off sized coefficients that would fake extra terms
    return p.trimmed(1e-13)


def critical_subspaces(fam: ParamFamily) -> list[ParamFamily]:
    """Sub-families on which grad det vanishes; every local minimum lies in one."""
    if fam.r == 0:
        return [fam]
    p = det_polynomial(fam)
    out = []
    for S in gradient_critical_subspaces(p):
        C = fam.at(S.point)
        M = np.tensordot(S.directions, fam.M, axes=1).reshape(-1, 3, 3)
        out.append(ParamFamily(C, M, fam.selection, fam.case, fam.planes))
    return out


# -- admissibility -------------------------------------------------------------
def check_admissible(P0: Polytope, W, case: str, tol: float | None = None) -> bool:
    """Minkowski's sufficient criterion for the test set of the case."""
    kind = CASE_KIND[case]
    W = np.asarray(W, dtype=float)
    kind_check = 1 if kind == 1 else 2
    for c in test_set_vectors(kind_check):
        if classify_point(P0, W @ np.array(c, dtype=float), tol) is not Location.BOUNDARY:
            return False
    for c in _EXCLUSIONS[kind_check]:
        if classify_point(P0, W @ np.array(c, dtype=float), tol) is Location.INTERIOR:
            return False
    return True


def exclusion_margin(P0: Polytope, W, case: str) -> float:
    """Smallest max_m(a_m.x - b_m) over the exclusion points (inf if there are none)."""
    kind = 1 if CASE_KIND[case] == 1 else 2
    W = np.asarray(W, dtype=float)
    vals = [float(np.max(P0.normals @ (W @ np.array(c, dtype=float)) - P0.offsets))
            for c in _EXCLUSIONS[kind]]
    return min(vals, default=np.inf)


def verify_admissible_bruteforce(P0: Polytope, W, tol: float | None = None) -> bool:
    """No nonzero lattice point W m inside int(P0); m runs over a box covering the circumball."""
    W = np.asarray(W, dtype=float)
    if abs(np.linalg.det(W)) <= 1e-14 * max(np.abs(W).max(), 1e-300) ** 3:
        raise ValueError("singular basis")
    if tol is None:
        tol = P0.tol
    R = P0.circumradius
    bound = np.floor(R * np.linalg.norm(np.linalg.inv(W), axis=1) + 1e-9).astype(int)
    axes = [np.arange(-k, k + 1) for k in bound]
    m = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    m = m[np.any(m != 0, axis=1)]
    for chunk in range(0, len(m), 200000):
        Z = m[chunk:chunk + 200000] @ W.T
        worst = np.max(Z @ P0.normals.T - P0.offsets, axis=1)
        if np.any(worst < -tol):
            return False
    return True


def _subspace_lp(P0: Polytope, fam: ParamFamily, extra=()):
    kind = CASE_KIND[fam.case]
    A, b = _slot_constraints(P0, fam.selection, kind, slot6_all=fam.case == "IV")
    rows = list(A)
    rhs = list(b)
    for row, val in extra:
        rows.append(row)
        rhs.append(val)
    A = np.array(rows)
    b = np.array(rhs)
    G = np.array([A @ _vec(M) for M in fam.M]).T.reshape(len(A), fam.r)
    h = b - A @ _vec(fam.C)
    return LPProblem(G, h)


def admissible_in_subspace(P0: Polytope, fam: ParamFamily, exhaustive: bool = False):
    """A basis W in the family meeting the admissibility criterion, or None.

    Returns (W, slack). For cases I and II a point violating the exclusions is
    dropped: the same lattice turns up again under case III. With
    ``exhaustive`` the per-facet exclusion LPs are scanned instead.
    """
    case = fam.case
    if fam.r == 0:
        W = fam.C
        A, b = _slot_constraints(P0, fam.selection, CASE_KIND[case], slot6_all=case == "IV")
        slack = float(np.min(b - A @ _vec(W))) if len(A) else 1.0
        if slack < -EPS_LP * 10 or not check_admissible(P0, W, case):
            return None
        return W, slack
    fp = lp_feasible(_subspace_lp(P0, fam))
    if fp is None:
        return None
    W = fam.at(fp.x)
    if check_admissible(P0, W, case):
        return W, fp.slack
    if not exhaustive or CASE_KIND[case] == 3:
        return None
    return _exclusion_scan(P0, fam)


def _exclusion_scan(P0: Polytope, fam: ParamFamily):
    kind = CASE_KIND[fam.case]
    excl = _EXCLUSIONS[kind]
    n = P0.n_facets
    for idx in itertools.product(range(n), repeat=len(excl)):
        extra = [(-_row(c, P0.normals[m]), -P0.offsets[m]) for c, m in zip(excl, idx)]
        fp = lp_feasible(_subspace_lp(P0, fam, extra))
        if fp is None:
            continue
        W = fam.at(fp.x)
        if check_admissible(P0, W, fam.case):
            return W, fp.slack
    return None


# -- driver --------------------------------------------------------------------
@dataclass
class Counts:
    selections_enumerated: int = 0
    pruned_by_G: int = 0
    symmetric_skipped: int = 0
    pruned_by_S0: int = 0
    rank_skipped: int = 0
    case4_skipped: int = 0
    subspaces_checked: int = 0

    def add(self, other: "Counts") -> None:
        for k in self.__dataclass_fields__:
            setattr(self, k, getattr(self, k) + getattr(other, k))

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass
class Candidate:
    det: float
    W: np.ndarray
    case: str
    selection: tuple
    slack: float


@dataclass
class PackingResult:
    density: float
    critical_determinant: float
    basis: np.ndarray            # columns are the lattice basis vectors
    case: str
    selection: tuple
    contact_points: np.ndarray   # test-set vectors of the basis, on bd(P0)
    marginal: bool
    counts: Counts
    cases_searched: tuple
    verified: bool
    P0: Polytope
    runtime_s: float = 0.0

    @property
    def lattice_det(self) -> float:
        return abs(float(np.linalg.det(self.basis)))


def _better(c: Candidate, best: Candidate | None) -> bool:
    return best is None or c.det < best.det * (1 - TIE_REL)


def _search_case(P0: Polytope, ts: TripleSet, case: str, firsts, exhaustive: bool,
                 bound: float = np.inf, symmetry: bool = True):
    """Best candidate of one case over the given l_1 values, plus counts.

    Only canonical selections (see SelectionGroup) are examined; critical
    subspaces whose determinant already reaches the incumbent (or ``bound``)
    are skipped, since ties go to the earlier candidate anyway.
    """
    counts = Counts()
    best: Candidate | None = None
    group = SelectionGroup(P0, case, use_polytope=symmetry)

    def limit() -> float:
        return min(bound, best.det if best else np.inf) * (1 - TIE_REL)

    def prune(sel) -> bool:
        if group.canonical_prefix(sel):
            return False
        counts.symmetric_skipped += 1
        return True

    for sel in _selection_tree(case, ts, P0, firsts, prune, counts):
        counts.selections_enumerated += 1
        adjusted = None
        if case == "IV":
            try:
                adjusted = case4_adjust(P0, sel)
            except NotApplicable:
                counts.case4_skipped += 1
                continue
            if np.dot(adjusted.normal, P0.normals[sel[5]]) >= 1 - 1e-12:
                # same plane as H_6: the family is the case III one
                counts.case4_skipped += 1
                continue
        if not selection_feasible(P0, sel, case):
            counts.pruned_by_S0 += 1
            continue
        try:
            fam = parameterize_selection(P0, sel, case, adjusted)
        except RankDeficient:
            counts.rank_skipped += 1
            continue
        for sub in critical_subspaces(fam):
            counts.subspaces_checked += 1
            d = abs(float(np.linalg.det(sub.C)))
            if d <= DET_ZERO or d >= limit():
                continue
            got = admissible_in_subspace(P0, sub, exhaustive)
            if got is None:
                continue
            W, slack = got
            cand = Candidate(abs(float(np.linalg.det(W))), W, case, sel, slack)
            if _better(cand, best):
                best = cand
    return best, counts


def _worker(args):
    return _search_case(*args)


def _normalized_P0(P: Polytope):
    P0 = difference_body(P)
    s = 1.0 / P0.circumradius
    return P0, P0.scaled(s), s


def densest_packing(P: Polytope, cases=CASES, threads: int = 1, exhaustive: bool = False,
                    verify: bool = True, progress=None, symmetry: bool = True) -> PackingResult:
    """Densest lattice packing of P via a critical lattice of P - P.

    ``progress(case, counts)`` is called after each case. With ``symmetry``
    off only the basis relabelings of the test set are factored out, not the
    linear symmetries of P - P.
    """
    t0 = time.perf_counter()
    cases = tuple(c for c in CASES if c in set(cases))
    if not cases:
        raise ValueError("no cases selected")
    P0, Q, s = _normalized_P0(P)
    ts_plus = build_triple_set(Q, 1)
    reps = representatives(Q)
    total = Counts()
    best: Candidate | None = None
    pool = ProcessPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for case in cases:
            kind = CASE_KIND[case]
            ts = ts_plus.with_sigma(sigma_of(kind))
            counts = Counts()
            if pool is None:
                found, counts = _search_case(Q, ts, case, reps, exhaustive,
                                             best.det if best else np.inf, symmetry)
                found = [found]
            else:
                jobs = [(Q, ts, case, [l1], exhaustive, np.inf, symmetry) for l1 in reps]
                found = []
                for cand, cnt in pool.map(_worker, jobs):
                    found.append(cand)
                    counts.add(cnt)
            for cand in found:
                if cand is not None and _better(cand, best):
                    best = cand
            total.add(counts)
            if progress is not None:
                progress(case, counts)
    finally:
        if pool is not None:
            pool.shutdown()
    if best is None:
        raise NoLatticeFound(f"no admissible lattice found in cases {cases}")
    W = best.W / s
    det = abs(float(np.linalg.det(W)))
    kind = CASE_KIND[best.case]
    contacts = np.array([W @ np.array(c, dtype=float) for c in test_set_vectors(kind)])
    marginal = abs(exclusion_margin(Q, best.W, best.case)) <= 10 * EPS_STRICT
    verified = verify_admissible_bruteforce(Q, best.W) if verify else False
    return PackingResult(
        density=P.volume() / det, critical_determinant=det, basis=W, case=best.case,
        selection=best.selection, contact_points=contacts, marginal=bool(marginal),
        counts=total, cases_searched=cases, verified=verified, P0=P0,
        runtime_s=time.perf_counter() - t0)


def default_threads() -> int:
    return len(os.sched_getaffinity(0)) if hasattr(os, "sched_getaffinity") else (os.cpu_count() or 1)
