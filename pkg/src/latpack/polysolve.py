"""Isolated affine subspaces of small polynomial systems.

The entry point is ``gradient_critical_subspaces``: for a polynomial of total
degree at most 3 it returns finitely many affine subspaces, each contained in
the zero set of the gradient, that together cover every connected component
of that zero set which is itself an affine subspace. Supersets are fine; the
caller only needs every local minimum of the determinant to sit inside one of
them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .poly import (EPS_POLY, LinearPoly, NotAFactor, Poly, ZeroPolynomial, as_linear,
                   common_linear_factors, divide_by_linear, divide_out, linear_factors,
                   real_roots, resultant, sylvester_gap, try_divide)

log = logging.getLogger(__name__)

RES_ZERO = 1e-10   # Sylvester conditioning gap under which a resultant counts as zero
RES_NEAR = 1e-6    # up to here both branches are explored
ROOT_TOL = 1e-8    # loose multiple-root detection inside the solver
FIBER_TOL = 1e-6   # loose common-root test; candidates are re-verified later
MAX_DEPTH = 24
INDEP_TOL = 1e-9   # linear dependence threshold for normalized coefficient vectors
FAR = 1e8          # fiber coordinates beyond this come from a vanishing leading coefficient


class DegreeTooHigh(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """point + span(directions); directions are orthonormal rows."""
    point: np.ndarray
    directions: np.ndarray

    @property
    def dim(self) -> int:
        return self.directions.shape[0]

    @property
    def ambient(self) -> int:
        return len(self.point)

    @classmethod
    def make(cls, point, directions=None) -> "AffineSubspace":
        point = np.asarray(point, dtype=float).reshape(-1)
        n = len(point)
        if directions is None or len(directions) == 0:
            return cls(point, np.zeros((0, n)))
        D = np.asarray(directions, dtype=float).reshape(-1, n)
        U, s, Vt = np.linalg.svd(D, full_matrices=False)
        D = Vt[s > 1e-10 * max(s.max(initial=0.0), 1e-300)]
        # move the base point to the foot of the perpendicular from the origin
        point = point - (point @ D.T) @ D
        return cls(point, D)

    @classmethod
    def whole(cls, n: int) -> "AffineSubspace":
        return cls(np.zeros(n), np.eye(n))

    @classmethod
    def hyperplane(cls, l: LinearPoly) -> "AffineSubspace":
        g = l.grad
        nn = g @ g
        point = -l.const * g / nn
        _, _, Vt = np.linalg.svd(g[None, :])
        return cls.make(point, Vt[1:])

    def at(self, t) -> np.ndarray:
        return self.point + np.asarray(t, dtype=float) @ self.directions

    def distance(self, x) -> float:
        d = np.asarray(x, dtype=float) - self.point
        return float(np.linalg.norm(d - (d @ self.directions.T) @ self.directions))

    def contains(self, other: "AffineSubspace", tol: float = 1e-7) -> bool:
        if other.dim > self.dim or self.distance(other.point) > tol:
            return False
        for d in other.directions:
            if np.linalg.norm(d - (d @ self.directions.T) @ self.directions) > tol:
                return False
        return True

    def compose(self, sub: "AffineSubspace") -> "AffineSubspace":
        """Map a subspace of this one's parameter space into ambient coordinates."""
        return AffineSubspace.make(self.at(sub.point), sub.directions @ self.directions)

    def extend(self, n: int, coords) -> "AffineSubspace":
        """Embed via coordinates ``coords`` of R^n; the other coordinates are free."""
        P = np.zeros(n)
        P[list(coords)] = self.point
        D = np.zeros((self.dim, n))
        D[:, list(coords)] = self.directions
        free = [np.eye(n)[a] for a in range(n) if a not in coords]
        return AffineSubspace.make(P, np.vstack([D] + free) if free else D)

    def restrict(self, p: Poly) -> Poly:
        return p.compose_affine(self.point, self.directions)

    def __repr__(self) -> str:
        p = np.array2string(self.point, precision=6, suppress_small=True)
        return f"AffineSubspace(dim={self.dim}, point={p})"


def _dedupe(subs: list[AffineSubspace], tol: float = 1e-7) -> list[AffineSubspace]:
    out: list[AffineSubspace] = []
    for s in sorted(subs, key=lambda s: -s.dim):
        if any(o.contains(s, tol) for o in out):
            continue
        out.append(s)
    return out


def _prep(polys: list[Poly]) -> list[Poly]:
    out = []
    for p in polys:
        p = p.trimmed(EPS_POLY)
        if not p.is_zero():
            out.append(p.normalized())
    return out


def _res_class(r: Poly, f: Poly, g: Poly, v: int) -> tuple[bool, bool]:
    """(zero, near zero) verdict for r = res(f, g, x_v)."""
    if r.is_zero():
        return True, True
    if f.deg_in(v) <= 0 or g.deg_in(v) <= 0:
        return False, False
    gap = sylvester_gap(f, g, v)
    return gap <= RES_ZERO, gap <= RES_NEAR


def _common_roots_1d(polys: list[Poly]) -> list[float]:
    """Common real roots of univariate polynomials (loose residual test)."""
    nz = _prep(polys)
    if not nz:
        return []
    nz.sort(key=lambda p: p.degree())
    if nz[0].degree() <= 0:
        return []
    out = []
    for r in real_roots(nz[0], tol=ROOT_TOL):
        if all(abs(q(r)) <= FIBER_TOL * max(q.abs_eval(r), 1.0) for q in nz[1:]):
            out.append(float(r))
    return out


# -- conics and bivariate components ----------------------------------------
def conic_components(q: Poly) -> list[AffineSubspace]:
    """Points and lines contained in the real zero set of a conic."""
    q = q.trimmed(EPS_POLY)
    if q.is_zero():
        raise ZeroPolynomial("zero conic")
    if q.nvars != 2:
        raise ValueError("conic_components needs a bivariate polynomial")
    d = q.degree()
    if d > 2:
        raise DegreeTooHigh(f"degree {d} conic")
    if d == 0:
        return []
    if d == 1:
        return [AffineSubspace.hyperplane(as_linear(q))]
    lins, rem = linear_factors(q)
    if lins:
        out = []
        for l in lins:
            if not any(l.same_as(o) for o in out):
                out.append(l)
        return [AffineSubspace.hyperplane(l) for l in out]
    # irreducible over the reals: only a point-ellipse has an affine component
    c = q.normalized().c
    get = lambda i, j: c[i, j] if i < c.shape[0] and j < c.shape[1] else 0.0
    a, b, cc = get(2, 0), get(1, 1), get(0, 2)
    dd, e = get(1, 0), get(0, 1)
    H = np.array([[2 * a, b], [b, 2 * cc]])
    if abs(np.linalg.det(H)) <= 1e-12 * max(np.abs(H).max(), 1.0) ** 2:
        return []
    p = np.linalg.solve(H, [-dd, -e])
    if abs(q(*p)) <= 1e-9 * max(q.abs_eval(*p), 1.0):
        return [AffineSubspace.make(p)]
    return []


class _System:
    """A list of polynomials in sparse monomial form, for repeated evaluation."""

    def __init__(self, polys: list[Poly]):
        n = polys[0].nvars
        exps: dict[tuple, int] = {}
        rows = []
        for p in polys:
            c = np.atleast_1d(p.c) if n else p.c.reshape(1)
            row = {}
            for idx in zip(*np.nonzero(c)):
                e = tuple(int(i) for i in idx)
                row[exps.setdefault(e, len(exps))] = float(c[idx])
            rows.append(row)
        self.E = np.array(list(exps) or [(0,) * n], dtype=float).reshape(-1, n)
        self.C = np.zeros((len(polys), len(self.E)))
        for i, row in enumerate(rows):
            for k, v in row.items():
                self.C[i, k] = v
        self.absC = np.abs(self.C)
        # derivative monomials: d/dx_j x^e = e_j x^(e - 1_j)
        self.dE = [np.maximum(self.E - np.eye(n)[j], 0.0) for j in range(n)]
        self.dC = [self.C * self.E[:, j] for j in range(n)]

    def values(self, x):
        m = np.prod(np.power(x, self.E), axis=1)
        return self.C @ m, self.absC @ np.abs(m)

    def jacobian(self, x):
        return np.stack([dc @ np.prod(np.power(x, de), axis=1)
                         for dc, de in zip(self.dC, self.dE)], axis=1)

    def rel_residual(self, x) -> float:
        v, a = self.values(x)
        return float(np.max(np.abs(v) / np.maximum(a, 1.0), initial=0.0))


def _refine(x: np.ndarray, sys: _System, iters: int = 40, directions=None):
    """Gauss-Newton on the stacked residuals; returns (point, relative residual).

    With ``directions`` the steps are kept orthogonal to them.
    """
    x = np.asarray(x, dtype=float).copy()
    best, bestr = x.copy(), sys.rel_residual(x)
    stall = 0
    for _ in range(iters):
        if bestr == 0.0:
            break
        r, _ = sys.values(x)
        step = np.linalg.lstsq(sys.jacobian(x), r, rcond=1e-12)[0]
        if directions is not None and len(directions):
            step = step - (step @ directions.T) @ directions
        x = x - step
        if not np.all(np.isfinite(x)):
            break
        rn = sys.rel_residual(x)
        if rn < bestr:
            best, bestr, stall = x.copy(), rn, 0
        else:
            stall += 1
            if stall >= 3:
                break
        if np.linalg.norm(step) <= 1e-15 * max(1.0, np.linalg.norm(x)):
            break
    return best, bestr


def _dedupe_points(cands, tol: float = 1e-12):
    kept: list[np.ndarray] = []
    for x in cands:
        x = np.asarray(x, dtype=float)
        if not any(np.linalg.norm(x - k) <= tol * max(1.0, np.linalg.norm(x)) for k in kept):
            kept.append(x)
    return kept


def _points_from_candidates(cands, system: list[Poly]) -> list[AffineSubspace]:
    out = []
    if not cands:
        return out
    sys = _System(system)
    for x in _dedupe_points(cands):
        y, r = _refine(x, sys)
        if r <= FIBER_TOL:
            out.append(AffineSubspace.make(y))
    return out


def _fiber_points(f: Poly, g: Poly | None, v: int, yvals,
                  system: list[Poly] | None = None) -> list[AffineSubspace]:
    """Common zeros of f (and g) on the lines {x_w = y}, w != v (bivariate).

    Fiber roots are only candidates; each is refined against ``system``
    (default: f and g) before its residual is tested.
    """
    if system is None:
        system = [f] if g is None else [f, g]
    out = []
    cands = []
    w = 1 - v
    dirv = np.eye(2)[v][None, :]
    for y in yvals:
        if not np.isfinite(y) or abs(y) > FAR:
            continue
        if abs(y) < 1e-15:
            y = 0.0  # denormal roots would overflow the normalization below
        base = np.zeros(2)
        base[w] = y
        fs = [f.compose_affine(base, dirv)]
        if g is not None:
            fs.append(g.compose_affine(base, dirv))
        live = [q for q in _prep(fs) if q.degree() >= 1]
        if not _prep(fs):
            out.append(AffineSubspace.make(base, dirv))
            continue
        for q in live:
            for x in real_roots(q, tol=ROOT_TOL):
                pt = base.copy()
                pt[v] = x
                cands.append(pt)
    return out + _points_from_candidates(cands, system)


def _choose_var(f: Poly, g: Poly | None = None) -> int:
    if g is None:
        return 0 if f.deg_in(0) >= f.deg_in(1) else 1
    both = [v for v in range(2) if f.deg_in(v) > 0 and g.deg_in(v) > 0]
    if not both:
        both = [0, 1]
    return min(both, key=lambda v: (g.deg_in(v) + f.deg_in(v), v))


def bivariate_isolated(f: Poly) -> list[AffineSubspace]:
    """Superset of the isolated points and lines of V(f) for deg f <= 4."""
    f = f.trimmed(EPS_POLY)
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if f.degree() > 4:
        raise DegreeTooHigh(f"degree {f.degree()} > 4")
    f = f.normalized()
    lins, fh = linear_factors(f)
    out: list[AffineSubspace] = []
    seen: list[LinearPoly] = []
    for l in lins:
        if not any(l.same_as(o) for o in seen):
            seen.append(l)
            out.append(AffineSubspace.hyperplane(l))
    fh = fh.trimmed(EPS_POLY)
    if fh.degree() <= 0 or len(fh.occurring()) < 2:
        return out
    if fh.degree() <= 2:
        return out + conic_components(fh)
    x = _choose_var(fh)
    fx = fh.diff(x)
    r = resultant(fh, fx, x)
    zero, near = _res_class(r, fh, fx, x)
    if not zero:
        out += _fiber_points(fh, fx, x, real_roots(r, tol=ROOT_TOL),
                             system=[fh, fh.diff(0), fh.diff(1)])
    if near:
        out += _square_split(fh, fx)
    return _dedupe(out)


def _square_split(f: Poly, fx: Poly) -> list[AffineSubspace]:
    """f = g*h with a quadratic g recovered from a linear factor of f_x."""
    out = []
    lins, _ = linear_factors(fx.trimmed(EPS_POLY).normalized(), tol=1e-6)
    for l in lins:
        try:
            g = divide_by_linear(fx.normalized(), l, tol=1e-6)
        except NotAFactor:
            continue
        g = g.trimmed(EPS_POLY)
        if g.degree() < 1:
            continue
        try:
            h = try_divide(f, g.normalized(), tol=1e-6)
        except (NotAFactor, ValueError):
            continue
        for part in (g, h):
            part = part.trimmed(EPS_POLY)
            if part.degree() >= 1:
                out += conic_components(part) if part.degree() <= 2 else []
        return out
    return out


def bivariate_pair_isolated(f: Poly, g: Poly) -> list[AffineSubspace]:
    """Superset of the isolated points and lines of V(f, g) in the plane."""
    f, g = f.trimmed(EPS_POLY), g.trimmed(EPS_POLY)
    if f.is_zero() or g.is_zero():
        raise ZeroPolynomial("zero polynomial")
    if f.degree() > 4 or g.degree() > 4:
        raise DegreeTooHigh("degree above 4")
    return _pair(f.normalized(), g.normalized(), 0)


def _pair(f: Poly, g: Poly, depth: int) -> list[AffineSubspace]:
    if depth > MAX_DEPTH:
        raise RecursionError("bivariate pair recursion too deep")
    out: list[AffineSubspace] = []
    common = common_linear_factors([f, g])
    for l in common:
        out.append(AffineSubspace.hyperplane(l))
        f, g = divide_out(f, l), divide_out(g, l)
    live = _prep([f, g])
    if len(live) < 2:
        if live and live[0].degree() >= 1:
            out += bivariate_isolated(live[0])
        return out
    f, g = live
    if f.degree() <= 0 or g.degree() <= 0:
        return out
    if g.degree() > f.degree():
        f, g = g, f
    # a polynomial in one variable fixes that coordinate
    for p, q in ((f, g), (g, f)):
        occ = p.occurring()
        if len(occ) == 1:
            v = occ[0]
            for r in real_roots(p.restrict_vars([v]), tol=ROOT_TOL):
                base = np.zeros(2)
                base[v] = r
                line = AffineSubspace.make(base, np.eye(2)[1 - v][None, :])
                qr = _prep([line.restrict(q)])
                if not qr:
                    out.append(line)
                    continue
                for t in _common_roots_1d(qr):
                    out.append(AffineSubspace.make(line.at([t])))
            return _dedupe(out)
    x = _choose_var(f, g)
    r = resultant(f, g, x)
    zero, near = _res_class(r, f, g, x)
    if not zero:
        rr = r.trimmed(EPS_POLY)
        if rr.degree() >= 1:
            out += _fiber_points(f, g, x, real_roots(rr, tol=ROOT_TOL))
    if near:
        lins, rest = linear_factors(g)
        if lins:
            l = lins[0]
            # V(f, l): substitute the line into f
            line = AffineSubspace.hyperplane(l)
            fl = _prep([line.restrict(f)])
            if not fl:
                out.append(line)
            else:
                out += [AffineSubspace.make(line.at([t])) for t in _common_roots_1d(fl)]
            gq = divide_by_linear(g, l)
            if gq.trimmed(EPS_POLY).degree() >= 1:
                out += _pair(f, gq.normalized(), depth + 1)
        else:
            out += bivariate_isolated(g)
    return _dedupe(out)


# -- general recursive solver -------------------------------------------------
_MONO_ORDER: dict = {}


def _independent(polys: list[Poly]) -> list[Poly]:
    """Row-reduce the coefficient vectors, eliminating high-degree monomials first."""
    if len(polys) <= 1:
        return polys
    n = polys[0].nvars
    shape = tuple(max(p.c.shape[a] for p in polys) for a in range(n))
    key = shape
    if key not in _MONO_ORDER:
        idx = list(np.ndindex(*shape))
        idx.sort(key=lambda e: (-sum(e), tuple(-v for v in e)))
        _MONO_ORDER[key] = idx
    monos = _MONO_ORDER[key]
    M = np.zeros((len(polys), len(monos)))
    for r, p in enumerate(polys):
        for cidx, e in enumerate(monos):
            if all(e[a] < p.c.shape[a] for a in range(n)):
                M[r, cidx] = p.c[e]
    rows = list(range(len(polys)))
    used = []
    for cidx in range(len(monos)):
        cand = [r for r in rows if r not in used]
        if not cand:
            break
        r = max(cand, key=lambda r: abs(M[r, cidx]))
        # inputs are normalized, so an absolute threshold is relative to them
        if abs(M[r, cidx]) <= INDEP_TOL:
            continue
        M[r] /= M[r, cidx]
        for o in rows:
            if o != r and M[o, cidx] != 0.0:
                M[o] -= M[o, cidx] * M[r]
                M[o, cidx] = 0.0
        used.append(r)
    out = []
    for r in used:
        c = np.zeros(shape)
        for cidx, e in enumerate(monos):
            c[e] = M[r, cidx]
        p = Poly(c).trimmed(EPS_POLY)
        if not p.is_zero(INDEP_TOL):
            out.append(p.normalized())
    return out


def _solve(polys: list[Poly], n: int, depth: int = 0) -> list[AffineSubspace]:
    if depth > MAX_DEPTH:
        raise RecursionError("polynomial system recursion too deep")
    ps = _prep(polys)
    if not ps:
        return [AffineSubspace.whole(n)]
    if any(p.degree() <= 0 for p in ps):
        return []
    ps = _independent(ps)
    if any(p.degree() <= 0 for p in ps):
        return []
    occ = sorted(set().union(*[p.occurring() for p in ps]))
    if len(occ) < n:
        sub = _solve([p.restrict_vars(occ) for p in ps], len(occ), depth + 1)
        return [s.extend(n, occ) for s in sub]
    if n == 1:
        return [AffineSubspace.make([r]) for r in _common_roots_1d(ps)]
    for p in ps:
        o = p.occurring()
        if len(o) == 1:
            v = o[0]
            out = []
            others = [a for a in range(n) if a != v]
            for r in real_roots(p.restrict_vars([v]), tol=ROOT_TOL):
                base = np.zeros(n)
                base[v] = r
                S = AffineSubspace(base, np.eye(n)[others])
                rest = [S.restrict(q) for q in ps if q is not p]
                out += [S.compose(s) for s in _solve(rest, n - 1, depth + 1)]
            return out
    common = common_linear_factors(ps)
    if common:
        out = [AffineSubspace.hyperplane(l) for l in common]
        reduced = ps
        for l in common:
            reduced = [divide_out(p, l) for p in reduced]
        return out + _solve(reduced, n, depth + 1)
    for p in ps:
        if p.degree() == 1:
            H = AffineSubspace.hyperplane(as_linear(p))
            rest = [H.restrict(q) for q in ps if q is not p]
            return [H.compose(s) for s in _solve(rest, n - 1, depth + 1)]
    if n == 2:
        return _solve2(ps, depth)
    return _solve3(ps, depth)


def _solve2(ps: list[Poly], depth: int) -> list[AffineSubspace]:
    if len(ps) == 1:
        return bivariate_isolated(ps[0])
    if len(ps) == 2:
        f, g = sorted(ps, key=lambda p: -p.degree())
        return bivariate_pair_isolated(f, g)
    # three or more: any pair with a nonzero resultant has finitely many common zeros
    pairs = [(i, j) for i in range(len(ps)) for j in range(i + 1, len(ps))]
    for i, j in pairs:
        for x in range(2):
            r = resultant(ps[i], ps[j], x)
            zero, near = _res_class(r, ps[i], ps[j], x)
            if not near and r.trimmed(EPS_POLY).degree() >= 1:
                cand = _fiber_points(ps[i], ps[j], x, real_roots(r.trimmed(EPS_POLY), tol=ROOT_TOL))
                return _filter_points(cand, ps)
    # every pair shares a factor: split on a pairwise linear factor
    for i, j in pairs:
        common = common_linear_factors([ps[i], ps[j]])
        if common:
            l = common[0]
            rest = [p for k, p in enumerate(ps) if k not in (i, j)]
            I1 = rest + [l.poly]
            I2 = rest + [divide_out(ps[i], l), divide_out(ps[j], l)]
            return _solve(I1, 2, depth + 1) + _solve(I2, 2, depth + 1)
    log.debug("three bivariate polynomials with shared nonlinear factor; using pair fallback")
    out = []
    for C in bivariate_pair_isolated(ps[0], ps[1]):
        out += [C.compose(s) for s in _solve([C.restrict(p) for p in ps], C.dim, depth + 1)]
    return out


def _filter_points(cands: list[AffineSubspace], ps: list[Poly]) -> list[AffineSubspace]:
    out = []
    for c in cands:
        if c.dim == 0:
            x = c.point
            if all(abs(p(*x)) <= FIBER_TOL * max(p.abs_eval(*x), 1.0) for p in ps):
                out.append(c)
        else:
            out.append(c)
    return out


def _lift_through(C: AffineSubspace, v: int, ps: list[Poly], depth: int) -> list[AffineSubspace]:
    """Solve ps on {x_v free} x C, where C lives in the other two coordinates."""
    others = [a for a in range(3) if a != v]
    base = np.zeros(3)
    base[others] = C.point
    dirs = [np.eye(3)[v]]
    for d in C.directions:
        e = np.zeros(3)
        e[others] = d
        dirs.append(e)
    S = AffineSubspace(base, np.array(dirs))
    restricted = [S.restrict(p) for p in ps]
    if S.dim == 1:
        # C is only known approximately: take every fiber root as a candidate
        live = _prep(restricted)
        if not live:
            return [S]
        cands = [S.at([t]) for q in live if q.degree() >= 1
                 for t in real_roots(q, tol=ROOT_TOL)]
        return _points_from_candidates(cands, ps)
    sub = _solve(restricted, S.dim, depth + 1)
    return [S.compose(s) for s in sub]


def _quadratic_coef(p: Poly, v: int) -> float:
    if p.c.shape[v] < 3:
        return 0.0
    idx = [0] * p.nvars
    idx[v] = 2
    return float(p.c[tuple(idx)])


def _drop_square(ps: list[Poly], v: int) -> tuple[list[Poly], Poly]:
    """Combine so that only the returned pivot keeps an x_v^2 term."""
    a = [_quadratic_coef(p, v) for p in ps]
    k = int(np.argmax(np.abs(a)))
    piv = ps[k]
    rest = []
    for i, p in enumerate(ps):
        if i == k:
            continue
        if a[k] != 0.0 and a[i] != 0.0:
            p = (p - piv * (a[i] / a[k])).trimmed(EPS_POLY)
        rest.append(p)
    return rest, piv


def _solve3(ps: list[Poly], depth: int) -> list[AffineSubspace]:
    for p in ps:
        if p.degree() > 2:
            raise DegreeTooHigh("trivariate systems are limited to quadrics")
    if len(ps) == 1:
        return _quadric_case(ps[0])
    if len(ps) == 2:
        return _two_quadrics(ps, depth)
    return _three_quadrics(ps[:3], depth) if len(ps) == 3 else \
        _filter_subspaces(_three_quadrics(ps[:3], depth), ps)


def _filter_subspaces(cands, ps):
    return [c for c in cands if all(_vanishes_on(p, c) for p in ps)]


def _vanishes_on(p: Poly, S: AffineSubspace, tol: float = FIBER_TOL) -> bool:
    r = S.restrict(p)
    return r.norm() <= tol * max(p.norm(), 1.0) * max(1.0, np.linalg.norm(S.point)) ** 2


def _quadric_case(f: Poly) -> list[AffineSubspace]:
    """Case (1,3): isolated components of a quadric surface."""
    a = [_quadratic_coef(f, v) for v in range(3)]
    v = int(np.argmax(np.abs(a)))
    if abs(a[v]) <= 1e-12:
        return []
    others = [w for w in range(3) if w != v]
    F = f.coeffs_in(v)
    kappa = float(F[2].c.reshape(-1)[0]) if len(F) > 2 else 0.0
    l3 = F[1] * (1.0 / kappa) if len(F) > 1 else Poly.const(0.0, 2)
    q3 = F[0] * (1.0 / kappa)
    qt = (l3 * l3 * 0.25 - q3).trimmed(EPS_POLY)
    if qt.is_zero():
        return []
    out = []
    for C in conic_components(qt):
        # x_v = -l3/2 along the component
        base = np.zeros(3)
        base[others] = C.point
        base[v] = -0.5 * l3(*C.point)
        dirs = []
        lin = [l3.diff(0), l3.diff(1)]
        for d in C.directions:
            e = np.zeros(3)
            e[others] = d
            e[v] = -0.5 * sum(float(lin[k].c.reshape(-1)[0]) * d[k] for k in range(2))
            dirs.append(e)
        out.append(AffineSubspace.make(base, dirs))
    return out


def _pick_elimination(ps: list[Poly]):
    """Choose x_v and an ordering (f, g) with g linear in x_v and x_v^2 only in f."""
    best = None
    for v in range(3):
        rest, piv = _drop_square(ps, v)
        if _quadratic_coef(piv, v) == 0.0:
            # nobody has x_v^2; any member linear in x_v will do
            lin = [p for p in ps if p.deg_in(v) == 1]
            if lin:
                g = lin[0]
                f = [p for p in ps if p is not g]
                cand = (v, f, g)
            else:
                continue
        else:
            lin = [p for p in rest if p.deg_in(v) == 1]
            if not lin:
                continue
            g = lin[0]
            f = [p for p in rest if p is not g] + [piv]
            cand = (v, f, g)
        if best is None:
            best = cand
    return best


def _two_quadrics(ps: list[Poly], depth: int) -> list[AffineSubspace]:
    """Case (2,3)."""
    pick = _pick_elimination(ps)
    if pick is None:
        v = [w for w in range(3) if all(p.deg_in(w) > 0 for p in ps)][0]
        f, g = ps
        log.debug("no variable linear in one quadric; using a plain resultant")
    else:
        v, fl, g = pick
        f = fl[0]
    f, g = _prep([f])[0], _prep([g])[0]
    r = resultant(f, g, v)
    zero, near = _res_class(r, f, g, v)
    out = []
    others = [w for w in range(3) if w != v]
    if not zero:
        r2 = r.trimmed(EPS_POLY)
        if r2.degree() >= 1:
            for C in bivariate_isolated(r2):
                out += _lift_through(C, v, [f, g], depth)
    if near:
        lins, rest = linear_factors(g)
        if lins:
            l = lins[0]
            out += _solve([f, l.poly], 3, depth + 1)
            out += _solve([f, divide_by_linear(g, l)], 3, depth + 1)
        else:
            out += _solve([g], 3, depth + 1)
    return out


def _three_quadrics(ps: list[Poly], depth: int) -> list[AffineSubspace]:
    """Case (3,3)."""
    pick = None
    for v in range(3):
        rest, piv = _drop_square(ps, v)
        with_x = [p for p in rest if p.deg_in(v) == 1]
        if not with_x:
            continue
        p2 = with_x[0]
        p1 = [p for p in rest if p is not p2][0]
        pick = (v, _prep([p1]), p2, piv)
        break
    if pick is None or not pick[1]:
        log.debug("case (3,3) without a usable elimination variable; pairwise fallback")
        out = []
        for C in _two_quadrics(ps[:2], depth):
            sub = _solve([C.restrict(p) for p in ps], C.dim, depth + 1)
            out += [C.compose(s) for s in sub]
        return out
    v, (p1,), p2, p3 = pick
    p1 = p1.normalized()
    if p1.degree() <= 1 or len(p1.occurring()) < 2:
        return _solve([p1, p2, p3], 3, depth + 1)
    p2, p3 = p2.normalized(), p3.normalized()
    r12 = resultant(p1, p2, v)
    r23 = resultant(p2, p3, v)
    z12, n12 = _res_class(r12, p1, p2, v)
    z23, n23 = _res_class(r23, p2, p3, v)
    out: list[AffineSubspace] = []
    if n12:
        out += _split_common([p1, p2], [p3], depth)
    if n23:
        out += _split_common([p2, p3], [p1], depth)
    if not z12 and not z23:
        f = r23.trimmed(EPS_POLY)
        g = r12.trimmed(EPS_POLY)
        if f.degree() >= 1 and g.degree() >= 1:
            for C in bivariate_pair_isolated(f, g):
                out += _lift_through(C, v, [p1, p2, p3], depth)
    return out


def _split_common(pair: list[Poly], rest: list[Poly], depth: int) -> list[AffineSubspace]:
    """V(a, b, rest) with a, b sharing a factor: split on a common linear factor."""
    common = common_linear_factors(pair, tol=1e-6)
    if not common:
        # no common linear factor: the pair is degenerate, fall back to the pair itself
        log.debug("vanishing resultant without a common linear factor")
        return []
    l = common[0]
    I1 = rest + [l.poly]
    I2 = rest + [divide_out(p, l, tol=1e-6) for p in pair]
    return _solve(I1, 3, depth + 1) + _solve(I2, 3, depth + 1)


# -- top level ---------------------------------------------------------------
def _polish(S: AffineSubspace, gsys: _System) -> AffineSubspace:
    """Newton on grad p, moving only normal to S so the point slides onto it."""
    x = S.point.copy()
    for _ in range(60):
        g, _ = gsys.values(x)
        if not np.any(g):
            break
        step = np.linalg.lstsq(gsys.jacobian(x), g, rcond=1e-12)[0]
        if S.dim:
            step = step - (step @ S.directions.T) @ S.directions
        if not np.all(np.isfinite(step)):
            break
        x = x - step
        if np.linalg.norm(step) <= 1e-16 * max(1.0, np.linalg.norm(x)):
            break
    return AffineSubspace.make(x, S.directions)


def _grad_small(gsys: _System, S: AffineSubspace, pn: float, tol: float) -> bool:
    rng = np.random.default_rng(7)
    ts = [np.zeros(S.dim)] + [rng.uniform(-1, 1, S.dim) for _ in range(6 if S.dim else 0)]
    for t in ts:
        x = S.at(t)
        g, _ = gsys.values(x)
        if np.linalg.norm(g) > tol * pn * (1.0 + np.linalg.norm(x)) ** 2:
            return False
    return True


def gradient_critical_subspaces(p: Poly, tol: float = 1e-8) -> list[AffineSubspace]:
    """Affine subspaces on which grad p vanishes, covering its isolated ones."""
    if p.degree() > 3:
        raise DegreeTooHigh(f"degree {p.degree()} > 3")
    n = p.nvars
    pn = p.norm()
    grads = [g.trimmed(1e-14) for g in p.gradient()]
    if all(g.is_zero(1e-14 * max(pn, 1e-300)) for g in grads):
        return [AffineSubspace.whole(n)]
    raw = _solve(grads, n)
    gsys = _System(grads)
    out = []
    for S in raw:
        if S.dim == n:
            out.append(S)
            continue
        S = _polish(S, gsys)
        if _grad_small(gsys, S, pn, tol):
            out.append(S)
    return _dedupe(out)
