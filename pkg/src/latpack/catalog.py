"""Regular and Archimedean solids in fixed coordinates, with reference densities.

Most solids are intersections of scaled copies of a few base bodies given by
absolute-value inequalities. The two snub solids are built from vertices:
the snub cube from the real root of y^3 + y^2 + y = 1, the snub dodecahedron
as the rotation orbit of a point on a facet plane of (1 + tau) P_d.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.optimize import brentq, fsolve

from .polytope import Polytope, convex_hull, from_halfspaces, linear_symmetries

SQRT2 = 1.4142135623730950488
SQRT5 = 2.2360679774997896964
TAU = 1.6180339887498948482  # (1 + sqrt 5) / 2


class UnknownSolid(KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown solid"


# -- base bodies as halfspace rows (a1, a2, a3, b) -----------------------------
def _abs_rows(coeffs, b: float) -> list[np.ndarray]:
    """|c1 x1| + |c2 x2| + |c3 x3| <= b as one row per sign pattern."""
    c = np.asarray(coeffs, dtype=float)
    nz = np.flatnonzero(c)
    rows = []
    for signs in itertools.product((1.0, -1.0), repeat=len(nz)):
        a = np.zeros(3)
        a[nz] = c[nz] * np.array(signs)
        rows.append(np.r_[a, b])
    return rows


def _cyclic(c) -> list[tuple]:
    c = tuple(c)
    return [c, (c[2], c[0], c[1]), (c[1], c[2], c[0])]


def _cube(s: float = 1.0):
    return [r for i in range(3) for r in _abs_rows(np.eye(3)[i], s)]


def _octahedron(s: float = 1.0):
    return _abs_rows((1, 1, 1), s)


def _tetrahedron(s: float = 1.0):
    A = np.array([[1, 1, 1], [-1, -1, 1], [-1, 1, -1], [1, -1, -1]], dtype=float)
    return [np.r_[a, s] for a in A]


def _dodecahedron(s: float = 1.0):
    return [r for c in _cyclic((TAU, 1, 0)) for r in _abs_rows(c, s)]


def _icosahedron(s: float = 1.0):
    rows = _octahedron(s)
    for c in _cyclic((TAU, 0, 1 / TAU)):
        rows += _abs_rows(c, s)
    return rows


def _triacontahedron(s: float = 1.0):
    # the rhombic triacontahedron; each mixed inequality holds for all sign patterns
    rows = [r for i in range(3) for r in _abs_rows(TAU * np.eye(3)[i], s)]
    for c in _cyclic((0.5, TAU / 2, (TAU + 1) / 2)):
        rows += _abs_rows(c, s)
    return rows


def _pairs(s: float):
    return [r for c in ((1, 1, 0), (0, 1, 1), (1, 0, 1)) for r in _abs_rows(c, s)]


def _hrep(*parts) -> Polytope:
    return from_halfspaces(np.array([r for p in parts for r in p]))


# -- snub solids -----------------------------------------------------------------
def snub_cube_root() -> float:
    """The real root of y^3 + y^2 + y = 1, to full double precision."""
    return brentq(lambda y: y ** 3 + y ** 2 + y - 1.0, 0.5, 0.6, xtol=1e-16, rtol=1e-15)


def _snub_cube_vertices(handed: int) -> np.ndarray:
    y = snub_cube_root()
    out = []
    for perm in itertools.permutations(range(3)):
        parity = np.linalg.det(np.eye(3)[list(perm)]) > 0
        for signs in itertools.product((1, -1), repeat=3):
            odd = (sum(s < 0 for s in signs) % 2) == 1
            if (parity == odd) == (handed > 0):
                v = np.array([1.0, y, y * y])[list(perm)] * signs
                out.append(v)
    return np.array(out)


def _rotation(axis: np.ndarray, angle: float) -> np.ndarray:
    k = axis / np.linalg.norm(axis)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


def _snub_from_facet_plane(base: Polytope, fold: int) -> list[np.ndarray]:
    """Vertex orbits of snubs whose 'fold'-gon facets lie in the facet planes of base.

    The snub vertex v sits on the plane of facet 0 and is equidistant from its
    images under the rotations about the facet axis, a neighbouring vertex
    axis and the edge axis between them.
    """
    rots = [s.A for s in linear_symmetries(base) if np.linalg.det(s.A) > 0]
    n0, h = base.normals[0], float(base.offsets[0])
    F = base.facet_vertices(0)
    a3 = F[0] / np.linalg.norm(F[0])
    a2 = 0.5 * (F[0] + F[1])
    a2 /= np.linalg.norm(a2)
    R = [_rotation(n0, 2 * np.pi / fold), _rotation(a3, 2 * np.pi / 3), _rotation(a2, np.pi)]
    e1 = np.cross(n0, a3)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n0, e1)
    c = h * n0

    def point(t):
        return c + t[0] * e1 + t[1] * e2

    def eqs(t):
        v = point(t)
        d = [np.sum((v - Ri @ v) ** 2) for Ri in R]
        return [d[0] - d[1], d[0] - d[2]]

    found: list[np.ndarray] = []
    r = float(np.linalg.norm(F[0] - c))
    for ang in np.linspace(0, 2 * np.pi, 24, endpoint=False):
        t, _, ok, _ = fsolve(eqs, [0.5 * r * np.cos(ang), 0.5 * r * np.sin(ang)], full_output=True,
                             xtol=1e-15)
        if ok != 1 or np.max(np.abs(eqs(t))) > 1e-13 * h * h:
            continue
        v = point(t)
        if np.sum((v - R[0] @ v) ** 2) < 1e-6 * h * h:
            continue
        V = np.array([A @ v for A in rots])
        if any(np.allclose(np.sort(V, axis=0), np.sort(W, axis=0), atol=1e-9 * h)
               for W in found):
            continue
        found.append(V)
    return found


def _uniform_snub(candidates, f_vector) -> list[Polytope]:
    out = []
    for V in candidates:
        P = convex_hull(V)
        if P.f_vector != f_vector:
            continue
        L = np.linalg.norm(P.vertices[P.edges[:, 0]] - P.vertices[P.edges[:, 1]], axis=1)
        if np.ptp(L) <= 1e-9 * L.max():
            out.append(P)
    return out


# Handedness of the cataloged snub cube: +1 takes even permutations of
# (1, y, y^2) with an even number of sign flips. The reference lattice
# 2((1,0,0), (0,0,1), (1/2, 1/y - 1, -1/2)) packs both mirror images.
SNUB_CUBE_HANDED = 1


def snub_cube(handed: int = SNUB_CUBE_HANDED) -> Polytope:
    return convex_hull(_snub_cube_vertices(handed))


@lru_cache(maxsize=None)
def snub_dodecahedron() -> Polytope:
    """Uniform snub dodecahedron with pentagons in the facet planes of (1 + tau) P_d."""
    base = from_halfspaces(np.array(_dodecahedron(1 + TAU)))
    found = _uniform_snub(_snub_from_facet_plane(base, 5), (60, 150, 92))
    if not found:
        raise AssertionError("snub dodecahedron construction failed")
    return found[0]


# -- the catalog -----------------------------------------------------------------
@dataclass(frozen=True)
class SolidSpec:
    name: str
    build: Callable[[], Polytope]
    f_vector: tuple
    density: Callable[[], float]
    closed_form: str  # decimal-only entries have no reproducible closed form
    symmetric: bool
    lattice: Callable[[], np.ndarray] | None = None  # reference packing lattice, columns


def _D3(scale: float = 1.0):
    return lambda: 2 * scale * np.array([[1, 1, 0], [1, 0, 1], [0, 1, 1]], dtype=float).T


def _cols(*vs):
    return lambda: 2 * np.column_stack([np.asarray(v, dtype=float) for v in vs])


_a_trc = (2 - SQRT2) / 3
_a_trco = np.sqrt(33) * (SQRT2 + 1) / 6


def _snub_cube_lattice():
    y = snub_cube_root()
    return 2 * np.column_stack([[1, 0, 0], [0, 0, 1], [0.5, 1 / y - 1, -0.5]]).astype(float)


_SPECS = [
    SolidSpec("tetrahedron", lambda: _hrep(_tetrahedron()), (4, 6, 4),
              lambda: 18 / 49, "18/49", False,
              _cols((1, -1 / 6, -1 / 6), (-1 / 6, 1, -1 / 6), (-1 / 6, -1 / 6, 1))),
    SolidSpec("cube", lambda: _hrep(_cube()), (8, 12, 6), lambda: 1.0, "1", True,
              lambda: 2 * np.eye(3)),
    SolidSpec("octahedron", lambda: _hrep(_octahedron()), (6, 12, 8),
              lambda: 18 / 19, "18/19", True,
              _cols((1 / 3, 1 / 2, 1 / 6), (-1 / 6, -1 / 3, 1 / 2), (-1 / 2, 1 / 6, -1 / 3))),
    SolidSpec("dodecahedron", lambda: _hrep(_dodecahedron()), (20, 30, 12),
              lambda: (2 + TAU) / 4, "(2+tau)/4", True, _D3(1 / (1 + TAU))),
    SolidSpec("icosahedron", lambda: _hrep(_icosahedron()), (12, 30, 20),
              lambda: 0.836357445, "decimal 0.836357445", True),
    SolidSpec("cubeoctahedron", lambda: _hrep(_cube(), _octahedron(2)), (12, 24, 14),
              lambda: 45 / 49, "45/49", True,
              _cols((1, -1 / 6, -1 / 6), (-1 / 6, 1, -1 / 6), (-1 / 6, -1 / 6, 1))),
    SolidSpec("icosidodecahedron", lambda: _hrep(_icosahedron(), _dodecahedron()), (30, 60, 32),
              lambda: (14 + 17 * TAU) / 48, "(14+17tau)/48", True, _D3(1 / (1 + TAU))),
    SolidSpec("rhombic_cubeoctahedron",
              lambda: _hrep(_pairs(2), _cube(SQRT2), _octahedron(4 - SQRT2)), (24, 48, 26),
              lambda: (16 * SQRT2 - 20) / 3, "(16sqrt2-20)/3", True, _D3()),
    SolidSpec("rhombic_icosidodecahedron",
              lambda: _hrep(_triacontahedron(3 * TAU + 2), _icosahedron(4 * TAU + 1),
                            _dodecahedron(3 * (1 + TAU))), (60, 120, 62),
              lambda: (8 * TAU + 46) / (36 * TAU + 15), "(8tau+46)/(36tau+15)", True,
              _cols(((TAU - 1) / (4 * TAU + 2), 3.5, (9 * TAU + 4) / (4 * TAU + 2)),
                    ((9 * TAU + 4) / (4 * TAU + 2), (TAU - 1) / (4 * TAU + 2), 3.5),
                    (3.5, (9 * TAU + 4) / (4 * TAU + 2), (TAU - 1) / (4 * TAU + 2)))),
    SolidSpec("truncated_cube", lambda: _hrep(_cube(), _octahedron(1 + SQRT2)), (24, 36, 14),
              lambda: 9 / (5 + 3 * SQRT2), "9/(5+3sqrt2)", True,
              _cols((1, -_a_trc, 0), (0, 1, -_a_trc), (-_a_trc, 0, 1))),
    SolidSpec("truncated_octahedron", lambda: _hrep(_cube(), _octahedron(1.5)), (24, 36, 14),
              lambda: 1.0, "1", True, _cols((1, 0, 0), (1, 1, 0), (0.5, 0.5, -0.5))),
    SolidSpec("truncated_dodecahedron",
              lambda: _hrep(_dodecahedron(1 + TAU), _icosahedron((7 + 12 * TAU) / (3 + 4 * TAU))),
              (60, 90, 32), lambda: (5 * TAU + 16) / (6 * TAU - 3) / 4,
              "(5tau+16)/(4(6tau-3))", True, _D3()),
    SolidSpec("truncated_icosahedron",
              lambda: _hrep(_icosahedron(1 + TAU), _dodecahedron(4 / 3 + TAU)), (60, 90, 32),
              lambda: 0.7849877759, "decimal 0.7849877759", True),
    SolidSpec("truncated_cubeoctahedron",
              lambda: _hrep(_pairs(2 + 3 * SQRT2), _cube(2 * SQRT2 + 1),
                            _octahedron(3 * SQRT2 + 3)), (48, 72, 26),
              lambda: (99 / 992 * np.sqrt(66) - 231 / 1984 * np.sqrt(33) + 2835 / 992 * SQRT2
                       - 6615 / 1984),
              "99/992 sqrt66 - 231/1984 sqrt33 + 2835/992 sqrt2 - 6615/1984", True,
              _cols((2 * SQRT2 + 1, -2 * SQRT2 - 0.5 + _a_trco, 2 * SQRT2 + 0.5 - _a_trco),
                    (SQRT2 / 4 - 0.75 + _a_trco / 2, -0.75 * SQRT2 + 0.25 + _a_trco / 2,
                     2 * SQRT2 + 1),
                    (1.75 + 1.75 * SQRT2 - _a_trco / 2, 0.5 + _a_trco,
                     1.25 * SQRT2 + 0.75 - _a_trco / 2))),
    SolidSpec("truncated_icosidodecahedron",
              lambda: _hrep(_triacontahedron(5 * TAU + 4), _icosahedron(6 * TAU + 3),
                            _dodecahedron(5 * (1 + TAU))), (120, 180, 62),
              lambda: 0.4 * TAU + 9 / 50, "2tau/5+9/50", True, _D3(5)),
    SolidSpec("truncated_tetrahedron",
              lambda: _hrep(_tetrahedron(5), [np.r_[-r[:3], r[3]] for r in _tetrahedron(3)]),
              (12, 18, 8), lambda: 207 / 304, "207/304", False,
              _cols((2 / 3, 2, 4 / 3), (2, -4 / 3, -2 / 3), (-4 / 3, 2 / 3, -2))),
    SolidSpec("snub_cube", snub_cube, (24, 60, 38),
              lambda: 0.5 + snub_cube_root() / 6 + 2 / 3 * snub_cube_root() ** 2,
              "1/2 + y/6 + 2y^2/3, y^3+y^2+y=1", False, _snub_cube_lattice),
    SolidSpec("snub_dodecahedron", snub_dodecahedron, (60, 150, 92),
              lambda: snub_dodecahedron().volume() / 16, "vol/16", False, _D3()),
]

CATALOG: dict[str, SolidSpec] = {s.name: s for s in _SPECS}
SOLIDS = tuple(CATALOG)
FAST_TIER = ("tetrahedron", "cube", "octahedron", "cubeoctahedron", "truncated_octahedron")
EXTENDED_TIER = ("dodecahedron", "icosahedron", "icosidodecahedron", "truncated_cube",
                 "truncated_tetrahedron", "rhombic_cubeoctahedron", "snub_cube")


def _spec(name: str) -> SolidSpec:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownSolid(f"unknown solid {name!r}; choose from {', '.join(SOLIDS)}") from None


@lru_cache(maxsize=None)
def make_solid(name: str) -> Polytope:
    spec = _spec(name)
    P = spec.build()
    if P.f_vector != spec.f_vector:
        raise AssertionError(f"{name}: f-vector {P.f_vector} != {spec.f_vector}")
    return P


def reference_density(name: str) -> tuple[float, str]:
    spec = _spec(name)
    return float(spec.density()), spec.closed_form


def reference_lattice(name: str) -> np.ndarray | None:
    """Reference packing lattice basis (columns) of the cataloged solid, if given."""
    spec = _spec(name)
    return None if spec.lattice is None else spec.lattice()
