"""Dense small-degree real polynomials in up to three variables.

A ``Poly`` stores coefficients in an ndarray ``c`` with one axis per
variable: ``c[i, j, k]`` multiplies ``x**i * y**j * z**k``. A 0-d array is a
constant in zero variables, which is what slicing off the last variable of a
univariate polynomial yields.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np
import numpy.polynomial.polynomial as npp
from scipy.optimize import brentq

EPS_POLY = 1e-10
EPS_FACT = 1e-8
EPS_ROOT = 1e-12
VARNAMES = "xyz"


class ZeroPolynomial(ValueError):
    pass


class BothConstantInVar(ValueError):
    pass


class NotAFactor(ValueError):
    pass


class PreconditionViolated(ValueError):
    pass


def _strip(c: np.ndarray) -> np.ndarray:
    # drop trailing slices that are exactly zero, keeping at least one entry per axis
    for ax in range(c.ndim):
        n = c.shape[ax]
        idx = [slice(None)] * c.ndim
        while n > 1:
            idx[ax] = n - 1
            if c[tuple(idx)].any():
                break
            n -= 1
        if n < c.shape[ax]:
            idx[ax] = slice(0, n)
            c = c[tuple(idx)]
    return c


class Poly:
    __slots__ = ("c",)

    def __init__(self, coeffs):
        c = np.array(coeffs, dtype=float)
        self.c = _strip(c) if c.ndim else c

    # -- construction -------------------------------------------------------
    @classmethod
    def const(cls, v: float, nvars: int) -> "Poly":
        return cls(np.full((1,) * nvars, float(v)))

    @classmethod
    def var(cls, i: int, nvars: int) -> "Poly":
        shape = [1] * nvars
        shape[i] = 2
        c = np.zeros(shape)
        idx = [0] * nvars
        idx[i] = 1
        c[tuple(idx)] = 1.0
        return cls(c)

    @classmethod
    def from_terms(cls, terms: dict, nvars: int) -> "Poly":
        if not terms:
            return cls.const(0.0, nvars)
        shape = [max(e[a] for e in terms) + 1 for a in range(nvars)]
        c = np.zeros(shape)
        for e, v in terms.items():
            c[tuple(e)] += v
        return cls(c)

    @classmethod
    def linear(cls, const: float, grad) -> "Poly":
        grad = np.asarray(grad, dtype=float)
        out = cls.const(const, len(grad))
        for i, g in enumerate(grad):
            if g != 0.0:
                out = out + cls.var(i, len(grad)) * g
        return out

    # -- basic properties ---------------------------------------------------
    @property
    def nvars(self) -> int:
        return self.c.ndim

    def norm(self) -> float:
        return float(np.abs(self.c).max())

    def is_zero(self, tol: float = 0.0) -> bool:
        return self.norm() <= tol

    def terms(self):
        if self.nvars == 0:
            if self.c != 0:
                yield (), float(self.c)
            return
        for idx in zip(*np.nonzero(self.c)):
            yield tuple(int(i) for i in idx), float(self.c[idx])

    def degree(self) -> int:
        if self.nvars == 0:
            return 0 if self.c != 0 else -1
        nz = np.nonzero(self.c)
        if len(nz[0]) == 0:
            return -1
        return int(np.max(np.sum(nz, axis=0)))

    def deg_in(self, v: int) -> int:
        other = tuple(a for a in range(self.nvars) if a != v)
        nz = np.flatnonzero(np.any(self.c != 0, axis=other)) if other else np.flatnonzero(self.c)
        return int(nz[-1]) if len(nz) else -1

    def occurring(self) -> list[int]:
        return [v for v in range(self.nvars) if self.deg_in(v) > 0]

    def trimmed(self, rel: float = EPS_POLY) -> "Poly":
        n = self.norm()
        if n == 0:
            return self
        c = np.where(np.abs(self.c) <= rel * n, 0.0, self.c)
        return Poly(c)

    def normalized(self) -> "Poly":
        n = self.norm()
        if n < 1e-300:
            return Poly(np.zeros_like(self.c))
        return self * (1.0 / n)

    def homogeneous_part(self, d: int) -> "Poly":
        if self.nvars == 0:
            return self if d == 0 else Poly(0.0)
        idx = np.indices(self.c.shape).sum(axis=0)
        return Poly(np.where(idx == d, self.c, 0.0))

    # -- arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        return Poly.const(float(other), self.nvars)

    def __add__(self, other) -> "Poly":
        o = self._coerce(other)
        shape = tuple(max(a, b) for a, b in zip(self.c.shape, o.c.shape))
        c = np.zeros(shape)
        c[tuple(slice(0, s) for s in self.c.shape)] += self.c
        c[tuple(slice(0, s) for s in o.c.shape)] += o.c
        return Poly(c)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly(-self.c)

    def __sub__(self, other) -> "Poly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "Poly":
        return self._coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self.c * float(other))
        if self.nvars == 0:
            return Poly(other.c * float(self.c))
        if other.nvars == 0:
            return Poly(self.c * float(other.c))
        a, b = (self.c, other.c) if np.count_nonzero(self.c) <= np.count_nonzero(other.c) \
            else (other.c, self.c)
        shape = tuple(x + y - 1 for x, y in zip(a.shape, b.shape))
        c = np.zeros(shape)
        for idx in zip(*np.nonzero(a)):
            c[tuple(slice(i, i + s) for i, s in zip(idx, b.shape))] += a[idx] * b
        return Poly(c)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        out = Poly.const(1.0, self.nvars)
        for _ in range(k):
            out = out * self
        return out

    # -- calculus and evaluation -------------------------------------------
    def diff(self, v: int) -> "Poly":
        if self.c.shape[v] == 1:
            return Poly(np.zeros((1,) * self.nvars))
        return Poly(npp.polyder(self.c, axis=v))

    def gradient(self) -> list["Poly"]:
        return [self.diff(v) for v in range(self.nvars)]

    def __call__(self, *x):
        n = self.nvars
        if n == 0:
            return float(self.c)
        if len(x) == 1 and n > 1:
            x = tuple(np.asarray(x[0], dtype=float).T)
        if n == 1:
            return npp.polyval(x[0], self.c)
        if n == 2:
            return npp.polyval2d(x[0], x[1], self.c)
        return npp.polyval3d(x[0], x[1], x[2], self.c)

    def abs_eval(self, *x):
        """Evaluation of |coefficients| at |x|; a scale for relative tests."""
        return Poly(np.abs(self.c))(*[np.abs(np.asarray(t, dtype=float)) for t in x]) \
            if self.nvars else abs(float(self.c))

    # -- variable manipulation ---------------------------------------------
    def coeffs_in(self, v: int) -> list["Poly"]:
        """Coefficients of ascending powers of variable v, as polys in the others."""
        return [Poly(np.take(self.c, i, axis=v)) for i in range(self.c.shape[v])]

    @classmethod
    def from_coeffs_in(cls, v: int, coeffs: list["Poly"], nvars: int) -> "Poly":
        out = cls.const(0.0, nvars)
        xv = cls.var(v, nvars)
        power = cls.const(1.0, nvars)
        for q in coeffs:
            out = out + q.insert_var(v) * power
            power = power * xv
        return out

    def insert_var(self, v: int) -> "Poly":
        """Same polynomial viewed in one more variable, placed at position v."""
        return Poly(np.expand_dims(self.c, v))

    def embed(self, nvars: int, positions) -> "Poly":
        """Rename variable i to ``positions[i]`` inside an nvars-variable ring."""
        shape = [1] * nvars
        for i, p in enumerate(positions):
            shape[p] = self.c.shape[i]
        order = list(positions) + [a for a in range(nvars) if a not in positions]
        c = self.c.reshape(self.c.shape + (1,) * (nvars - self.nvars))
        c = np.moveaxis(c, list(range(nvars)), order)
        return Poly(c.reshape(shape))

    def restrict_vars(self, keep) -> "Poly":
        """Drop variables that do not occur (keep lists the ones to retain)."""
        drop = [a for a in range(self.nvars) if a not in keep]
        for a in drop:
            if self.c.shape[a] > 1:
                raise ValueError(f"variable {a} occurs")
        c = self.c.reshape([self.c.shape[a] for a in keep]) if keep else self.c.reshape(())
        return Poly(c)

    def compose_affine(self, base, dirs) -> "Poly":
        """Substitute x = base + sum_j t_j dirs[j]; result is a poly in the t_j."""
        base = np.asarray(base, dtype=float)
        dirs = np.asarray(dirs, dtype=float).reshape(-1, self.nvars)
        k = len(dirs)
        if k == 0:
            return Poly(np.asarray(self(*base) if self.nvars else self.c, dtype=float))
        D = max(self.degree(), 0)
        shape = (D + 1,) * k
        out = np.zeros(shape)
        one = np.zeros(shape)
        one[(0,) * k] = 1.0
        # powers of each substituted coordinate, as arrays of the full shape
        pw = []
        for i in range(self.nvars):
            row = [one]
            for _ in range(1, self.c.shape[i]):
                row.append(_mul_linear(row[-1], base[i], dirs[:, i]))
            pw.append(row)
        for idx, v in self.terms():
            term = one
            for i, e in enumerate(idx):
                if e:
                    term = pw[i][e] if term is one else _mul_dense(term, pw[i][e])
            out += v * term
        return Poly(out)

    def substitute(self, v: int, expr: "Poly") -> "Poly":
        """Replace variable v by ``expr`` (a poly in the remaining variables)."""
        coeffs = self.coeffs_in(v)
        out = Poly.const(0.0, self.nvars - 1)
        power = Poly.const(1.0, self.nvars - 1)
        for q in coeffs:
            out = out + q * power
            power = power * expr
        return out

    # -- display ------------------------------------------------------------
    def to_str(self, digits: int = 6) -> str:
        parts = []
        names = VARNAMES if self.nvars <= 3 else [f"x{i}" for i in range(self.nvars)]
        for idx, v in sorted(self.terms(), key=lambda t: (-sum(t[0]), t[0])):
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(idx) if e)
            coef = f"{v:.{digits}g}"
            parts.append(coef if not mono else (mono if coef == "1" else f"{coef}*{mono}"))
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __repr__(self) -> str:
        return f"Poly[{self.nvars}]({self.to_str()})"


def _mul_linear(a: np.ndarray, c0: float, g) -> np.ndarray:
    # a * (c0 + g . t) inside the fixed shape of a (the caller bounds the degree)
    out = a * c0
    k = a.ndim
    for j in range(k):
        if g[j] != 0.0:
            dst = tuple(slice(1, None) if a2 == j else slice(0, None) for a2 in range(k))
            src = tuple(slice(0, -1) if a2 == j else slice(0, None) for a2 in range(k))
            out[dst] += g[j] * a[src]
    return out


def _mul_dense(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    # product of two arrays of the same shape, truncated to that shape
    out = np.zeros_like(a)
    n = a.shape[0]
    for idx in zip(*np.nonzero(a)):
        sl_dst = tuple(slice(i, n) for i in idx)
        sl_src = tuple(slice(0, n - i) for i in idx)
        out[sl_dst] += a[idx] * b[sl_src]
    return out


def _as_poly(f) -> Poly:
    return f if isinstance(f, Poly) else Poly(np.asarray(f, dtype=float))


# -- univariate roots ------------------------------------------------------
def _trim_leading(c: np.ndarray, rel: float) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    scale = np.abs(c).max(initial=0.0)
    if scale == 0.0:
        return c[:0]
    nz = np.flatnonzero(np.abs(c) > rel * scale)
    return c[: nz[-1] + 1]


def _roots(c: np.ndarray, tol: float) -> list[float]:
    m = len(c) - 1
    if m <= 0:
        return []
    c = c / np.abs(c).max()
    if m == 1:
        return [-c[0] / c[1]]
    crit = _roots(_trim_leading(npp.polyder(c), EPS_POLY), tol)
    bound = 1.0 + float(np.abs(c[:-1] / c[-1]).max())
    f = lambda x: npp.polyval(x, c)
    absc = np.abs(c)
    found: list[float] = []
    for x in crit:
        # a critical point where f (nearly) vanishes is a multiple root
        if abs(f(x)) <= tol * npp.polyval(abs(x), absc):
            found.append(x)
    pts = [-bound] + list(crit) + [bound]
    for a, b in zip(pts[:-1], pts[1:]):
        if b <= a:
            continue
        fa, fb = f(a), f(b)
        if fa == 0.0:
            found.append(a)
        elif fa * fb < 0:
            found.append(brentq(f, a, b, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500))
    if f(pts[-1]) == 0.0:
        found.append(pts[-1])
    found.sort()
    out: list[float] = []
    for x in found:
        if out and abs(x - out[-1]) <= 1e-14 * max(1.0, abs(x)):
            continue
        out.append(x)
    return out


def real_roots(f, tol: float = EPS_ROOT) -> np.ndarray:
    """Sorted real roots of a univariate polynomial, multiplicities collapsed.

    Accepts a 1-variable Poly or ascending coefficients. ``tol`` is the
    relative residual under which a critical point of f counts as a multiple
    root.
    """
    f = _as_poly(f)
    if f.nvars != 1:
        if f.nvars == 0:
            if f.is_zero():
                raise ZeroPolynomial("zero polynomial")
            return np.zeros(0)
        raise ValueError("real_roots needs a univariate polynomial")
    c = _trim_leading(f.c, EPS_POLY)
    if len(c) == 0:
        raise ZeroPolynomial("zero polynomial")
    return np.array(_roots(c, tol)) + 0.0


# -- resultants --------------------------------------------------------------
def resultant(f: Poly, g: Poly, v: int) -> Poly:
    """Sylvester resultant of f and g with respect to variable v.

    If one of them does not involve v, that polynomial itself is returned.
    """
    m1, m2 = f.deg_in(v), g.deg_in(v)
    if m1 <= 0 and m2 <= 0:
        raise BothConstantInVar(f"neither polynomial involves variable {v}")
    if m1 <= 0:
        return f.coeffs_in(v)[0]
    if m2 <= 0:
        return g.coeffs_in(v)[0]
    F = f.coeffs_in(v)[: m1 + 1][::-1]  # descending
    G = g.coeffs_in(v)[: m2 + 1][::-1]
    N = m1 + m2
    S: list[list[Poly | None]] = [[None] * N for _ in range(N)]
    for r in range(m2):
        for k, q in enumerate(F):
            S[r][r + k] = None if q.is_zero() else q
    for r in range(m1):
        for k, q in enumerate(G):
            S[m2 + r][r + k] = None if q.is_zero() else q
    nrem = f.nvars - 1
    memo: dict[int, Poly] = {}

    def det(col: int, mask: int) -> Poly:
        if col == N:
            return Poly.const(1.0, nrem)
        if mask in memo:
            return memo[mask]
        acc = Poly.const(0.0, nrem)
        sign = 1.0
        for r in range(N):
            if not mask >> r & 1:
                continue
            e = S[r][col]
            if e is not None:
                sub = det(col + 1, mask & ~(1 << r))
                if not sub.is_zero():
                    acc = acc + e * sub * sign
            sign = -sign
        memo[mask] = acc
        return acc

    return det(0, (1 << N) - 1)


def sylvester_gap(f: Poly, g: Poly, v: int, npts: int = 4, seed: int = 11) -> float:
    """Largest sigma_min / sigma_max of the numeric Sylvester matrix at random points.

    A scale-free indicator of a vanishing resultant: it is at rounding level
    exactly when f and g share a factor involving x_v.
    """
    m1, m2 = f.deg_in(v), g.deg_in(v)
    if m1 <= 0 or m2 <= 0:
        return 1.0
    F = f.coeffs_in(v)[: m1 + 1][::-1]
    G = g.coeffs_in(v)[: m2 + 1][::-1]
    N = m1 + m2
    k = f.nvars - 1
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(npts if k else 1):
        u = rng.uniform(-1.0, 1.0, k)
        S = np.zeros((N, N))
        fv = [q(*u) if k else float(q.c) for q in F]
        gv = [q(*u) if k else float(q.c) for q in G]
        for r in range(m2):
            S[r, r: r + m1 + 1] = fv
        for r in range(m1):
            S[m2 + r, r: r + m2 + 1] = gv
        sv = np.linalg.svd(S, compute_uv=False)
        if sv[0] > 0:
            best = max(best, sv[-1] / sv[0])
    return best


# -- linear factors ----------------------------------------------------------
@dataclass(frozen=True)
class LinearPoly:
    """l(x) = const + grad . x with grad != 0."""
    const: float
    grad: np.ndarray

    @property
    def nvars(self) -> int:
        return len(self.grad)

    @property
    def poly(self) -> Poly:
        return Poly.linear(self.const, self.grad)

    def vector(self) -> np.ndarray:
        return np.r_[self.const, self.grad]

    def normalized(self) -> "LinearPoly":
        v = self.vector() / np.linalg.norm(self.grad)
        v[np.abs(v) <= 1e-12 * np.abs(v).max()] = 0.0
        nz = np.flatnonzero(np.abs(v[1:]) > 1e-12)
        if v[1 + nz[0]] < 0:
            v = -v
        return LinearPoly(float(v[0]), v[1:])

    def same_as(self, other: "LinearPoly", tol: float = 1e-9) -> bool:
        a, b = self.vector(), other.vector()
        cos = abs(a @ b) / (np.linalg.norm(a) * np.linalg.norm(b))
        return cos > 1 - tol

    def __call__(self, x) -> float:
        return self.const + np.asarray(x, dtype=float) @ self.grad

    def __repr__(self) -> str:
        return f"LinearPoly({self.poly.to_str()})"


def as_linear(p: Poly) -> LinearPoly:
    if p.degree() != 1:
        raise ValueError("not a linear polynomial")
    n = p.nvars
    grad = np.array([p.c[tuple(1 if a == i else 0 for a in range(n))] if p.c.shape[i] > 1 else 0.0
                     for i in range(n)])
    return LinearPoly(float(p.c[(0,) * n]), grad)


def divide_by_linear(f: Poly, l, var: int | None = None, tol: float = EPS_FACT) -> Poly:
    """Exact quotient f / l, or NotAFactor when the remainder is too large."""
    if isinstance(l, Poly):
        l = as_linear(l)
    if var is None:
        var = int(np.argmax(np.abs(l.grad)))
    lv = l.grad[var]
    if lv == 0.0:
        raise PreconditionViolated("pivot coefficient is zero")
    n = f.nvars
    others = [a for a in range(n) if a != var]
    # l / lv = x_var + lbar
    lbar = Poly.linear(l.const / lv, l.grad[others] / lv)
    F = f.coeffs_in(var)
    m = len(F) - 1
    if m == 0:
        if f.is_zero():
            return f
        raise NotAFactor("polynomial does not involve the pivot variable")
    q: list[Poly] = [None] * m  # type: ignore[list-item]
    q[m - 1] = F[m]
    for i in range(m - 2, -1, -1):
        q[i] = F[i + 1] - q[i + 1] * lbar
    r = F[0] - q[0] * lbar
    if r.norm() > tol * f.norm():
        raise NotAFactor(f"remainder {r.norm():.3g} exceeds tolerance")
    return (Poly.from_coeffs_in(var, q, n) * (1.0 / lv)).trimmed(1e-13)


_rng_seed = 20260


def _sample_points(k: int, attempt: int, rng) -> np.ndarray:
    base = np.vstack([np.eye(k), np.zeros((1, k))]) if k else np.zeros((1, 0))
    if attempt == 0:
        return base
    return base + rng.uniform(-1e-3, 1e-3, size=base.shape) * attempt


def _line_restrict(f: Poly, v: int, u: np.ndarray) -> Poly:
    """f restricted to the line where the other variables equal u."""
    c = np.moveaxis(f.c, v, 0)
    for x in u:
        c = npp.polyval(x, np.moveaxis(c, 1, 0))
    return Poly(c)


def _vanishes_on(f: Poly, l: LinearPoly, v: int, fn: float, rng) -> bool:
    # cheap necessary test: f is ~0 at random points of the hyperplane l = 0
    n = f.nvars
    others = [a for a in range(n) if a != v]
    X = np.zeros((4, n))
    X[:, others] = rng.uniform(-1.0, 1.0, size=(4, n - 1))
    X[:, v] = -(l.const + X[:, others] @ l.grad[others]) / l.grad[v]
    vals = np.abs(f(X)) if n > 1 else np.abs(f(X[:, 0]))
    scale = Poly(np.abs(f.c))(np.abs(X)) if n > 1 else Poly(np.abs(f.c))(np.abs(X[:, 0]))
    return bool(np.all(vals <= 1e-6 * np.maximum(scale, fn)))


def _find_linear_factor(f: Poly, v: int, tol: float) -> LinearPoly | None:
    m = f.deg_in(v)
    if m <= 0:
        return None
    n = f.nvars
    others = [a for a in range(n) if a != v]
    rng = np.random.default_rng(_rng_seed)
    fn = f.norm()
    for attempt in range(9):
        U = _sample_points(n - 1, attempt, rng)
        restr = [_line_restrict(f, v, u) for u in U]
        if all(g.norm() > 1e-6 * fn and g.degree() > 0 for g in restr):
            break
    else:
        return None
    Z = [real_roots(g, tol=1e-9) for g in restr]
    if any(len(z) == 0 for z in Z):
        return None
    M = np.column_stack([np.ones(len(U)), U])
    best = None
    for zs in itertools.product(*Z):
        a = np.linalg.solve(M, np.array(zs))
        grad = np.zeros(n)
        grad[v] = 1.0
        grad[others] = -a[1:]
        cand = LinearPoly(-float(a[0]), grad)
        if n > 1 and not _vanishes_on(f, cand, v, fn, rng):
            continue
        try:
            divide_by_linear(f, cand, var=v, tol=tol)
        except NotAFactor:
            continue
        best = cand
        break
    return best


def linear_factors(f: Poly, tol: float = EPS_FACT) -> tuple[list[LinearPoly], Poly]:
    """All linear factors of f (with multiplicity) and the remaining cofactor."""
    if f.is_zero():
        raise ZeroPolynomial("zero polynomial")
    factors: list[LinearPoly] = []
    rem = f
    for v in range(f.nvars):
        while rem.degree() >= 1:
            l = _find_linear_factor(rem, v, tol)
            if l is None:
                break
            rem = divide_by_linear(rem, l, var=v, tol=tol)
            factors.append(l.normalized())
    return factors, rem


def common_linear_factors(fs: list[Poly], tol: float = EPS_FACT) -> list[LinearPoly]:
    """Linear factors shared by every polynomial in fs, each listed once."""
    sets = [linear_factors(f, tol)[0] for f in fs]
    out: list[LinearPoly] = []
    for l in sets[0]:
        if any(l.same_as(o) for o in out):
            continue
        if all(any(l.same_as(o, 1e-9) for o in s) for s in sets[1:]):
            out.append(l)
    return out


def divide_out(f: Poly, l: LinearPoly, tol: float = EPS_FACT) -> Poly:
    """Remove every power of l from f."""
    while f.degree() >= 1:
        try:
            f = divide_by_linear(f, l, tol=tol)
        except NotAFactor:
            break
    return f


def try_divide(f: Poly, g: Poly, var: int | None = None, tol: float = EPS_FACT) -> Poly:
    """f / g by coefficient comparison in a variable where g's leading coefficient is constant."""
    n = f.nvars

    def lead_const(v):
        d = g.deg_in(v)
        if d <= 0:
            return False
        lead = g.coeffs_in(v)[d]
        return lead.degree() == 0

    if var is None:
        cands = [v for v in range(n) if lead_const(v)]
        if not cands:
            raise PreconditionViolated("no variable with constant leading coefficient")
        var = max(cands, key=lambda v: g.deg_in(v))
    elif not lead_const(var):
        raise PreconditionViolated("leading coefficient is not a nonzero constant")
    m, k = f.deg_in(var), g.deg_in(var)
    if m < k:
        raise NotAFactor("degree of f below degree of g")
    F = f.coeffs_in(var)[: m + 1][::-1]
    G = g.coeffs_in(var)[: k + 1][::-1]
    g0 = float(G[0].c.reshape(-1)[0])
    H: list[Poly] = []
    for t in range(m - k + 1):
        acc = F[t]
        for j in range(1, min(t, k) + 1):
            acc = acc - G[j] * H[t - j]
        H.append(acc * (1.0 / g0))
    scale = f.norm()
    for t in range(m - k + 1, m + 1):
        acc = F[t]
        for j in range(t - (m - k), min(k, t) + 1):
            acc = acc - G[j] * H[t - j]
        if acc.norm() > tol * scale:
            raise NotAFactor(f"identity {t} violated by {acc.norm():.3g}")
    return Poly.from_coeffs_in(var, H[::-1], n).trimmed(1e-13)
