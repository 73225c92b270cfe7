"""3-polytopes with both descriptions, facet cycles, edges and neighbor lists."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy.spatial import ConvexHull, HalfspaceIntersection, QhullError, cKDTree

from .smallsolve import LPProblem, lp_feasible

EPS_GEO = 1e-9
ANGLE_TOL = 1e-9


class DegenerateInput(ValueError):
    pass


class Unbounded(ValueError):
    pass


class EmptyInterior(ValueError):
    pass


class Location(Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    EXTERIOR = "exterior"


@dataclass(frozen=True)
class Halfspace:
    normal: np.ndarray
    offset: float


@dataclass(frozen=True)
class Box:
    lo: np.ndarray
    hi: np.ndarray


@dataclass(frozen=True, eq=False)
class Polytope:
    """Bounded full-dimensional polytope {x : normals @ x <= offsets}.

    Normals are unit length. ``facets[i]`` is the vertex cycle of facet i,
    counter-clockwise seen from outside. ``edges[e]`` holds a vertex pair and
    ``edge_facets[e]`` the two facets meeting there.
    """
    normals: np.ndarray
    offsets: np.ndarray
    vertices: np.ndarray
    facets: tuple
    edges: np.ndarray
    edge_facets: np.ndarray
    neighbors: tuple
    antipode: np.ndarray  # index of the facet with opposite normal, or -1
    symmetric: bool

    @property
    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(a.copy(), float(b)) for a, b in zip(self.normals, self.offsets)]

    @property
    def f_vector(self) -> tuple[int, int, int]:
        return len(self.vertices), len(self.edges), len(self.facets)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @property
    def circumradius(self) -> float:
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @property
    def tol(self) -> float:
        return EPS_GEO * max(self.circumradius, 1e-300)

    def facet_vertices(self, i: int) -> np.ndarray:
        return self.vertices[list(self.facets[i])]

    def facet_centroid(self, i: int) -> np.ndarray:
        return self.facet_vertices(i).mean(axis=0)

    def volume(self) -> float:
        return volume(self)

    def transformed(self, T, t=None) -> "Polytope":
        """Image under x -> T x + t."""
        T = np.asarray(T, dtype=float)
        V = self.vertices @ T.T
        if t is not None:
            V = V + np.asarray(t, dtype=float)
        return convex_hull(V)

    def scaled(self, mu: float) -> "Polytope":
        if mu <= 0:
            raise ValueError("scale factor must be positive")
        return Polytope(self.normals, self.offsets * mu, self.vertices * mu, self.facets,
                        self.edges, self.edge_facets, self.neighbors, self.antipode,
                        self.symmetric)

    def centered(self) -> "Polytope":
        """Translate so the vertex centroid sits at the origin."""
        c = self.vertices.mean(axis=0)
        if np.linalg.norm(c) <= self.tol:
            return self
        return Polytope(self.normals, self.offsets - self.normals @ c, self.vertices - c,
                        self.facets, self.edges, self.edge_facets, self.neighbors,
                        self.antipode, self.symmetric)

    def __repr__(self) -> str:
        return f"Polytope(f={self.f_vector}, symmetric={self.symmetric})"


def _dedupe_points(P: np.ndarray, tol: float) -> np.ndarray:
    tree = cKDTree(P)
    pairs = tree.query_pairs(tol, output_type="ndarray")
    if len(pairs) == 0:
        return P
    parent = np.arange(len(P))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in pairs:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    roots = np.array([find(i) for i in range(len(P))])
    keep = np.unique(roots)
    return np.array([P[roots == r].mean(axis=0) for r in keep])


def _plane_basis(a: np.ndarray):
    e = np.eye(3)[np.argmin(np.abs(a))]
    u = np.cross(a, e)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    return u, v


def _polygon(points: np.ndarray, idx: np.ndarray, a: np.ndarray, tol: float):
    """Extreme points of the planar set points[idx], ordered CCW around +a."""
    if len(idx) < 3:
        return None
    u, v = _plane_basis(a)
    Q = np.column_stack([points[idx] @ u, points[idx] @ v])
    span = np.ptp(Q, axis=0)
    if span.min() <= tol:
        # collinear within tolerance: not a 2-face
        c = Q - Q.mean(axis=0)
        if np.linalg.svd(c, compute_uv=False)[-1] <= tol:
            return None
    try:
        hull = ConvexHull(Q)
    except QhullError:
        return None
    ring = idx[hull.vertices]  # CCW in (u, v), i.e. seen from +a
    # drop vertices that are collinear with their neighbors
    P2 = Q[hull.vertices]
    keep = []
    k = len(P2)
    for t in range(k):
        p0, p1, p2 = P2[t - 1], P2[t], P2[(t + 1) % k]
        d1, d2 = p1 - p0, p2 - p1
        cross = d1[0] * d2[1] - d1[1] * d2[0]
        if abs(cross) > tol * max(np.linalg.norm(d1) + np.linalg.norm(d2), 1e-300):
            keep.append(t)
    if len(keep) < 3:
        return None
    return ring[keep]


def _assemble(points: np.ndarray, planes: list[tuple[np.ndarray, float]], tol: float,
              exact_planes: bool) -> Polytope:
    """Build the face structure from candidate planes and a point cloud.

    A candidate plane becomes a facet when the points lying on it span a
    2-dimensional polygon. Duplicated planes collapse to one facet.
    """
    facets = []
    normals = []
    offsets = []
    seen = {}
    for a, b in planes:
        on = np.flatnonzero(np.abs(points @ a - b) <= tol)
        ring = _polygon(points, on, a, tol)
        if ring is None:
            continue
        key = frozenset(ring.tolist())
        if key in seen:
            continue
        seen[key] = len(facets)
        if not exact_planes:
            # refit the plane through the polygon vertices
            Pv = points[ring]
            c = Pv.mean(axis=0)
            _, _, Vt = np.linalg.svd(Pv - c)
            n = Vt[-1]
            if n @ a < 0:
                n = -n
            a, b = n, float(n @ c)
        facets.append(ring)
        normals.append(a)
        offsets.append(b)
    used = np.unique(np.concatenate(facets))
    remap = -np.ones(len(points), dtype=np.int64)
    remap[used] = np.arange(len(used))
    V = points[used]
    facets = tuple(tuple(int(remap[i]) for i in f) for f in facets)
    normals = np.array(normals)
    offsets = np.array(offsets)

    edge_map: dict[tuple[int, int], list[int]] = {}
    for fi, ring in enumerate(facets):
        for t in range(len(ring)):
            e = (ring[t], ring[(t + 1) % len(ring)])
            edge_map.setdefault((min(e), max(e)), []).append(fi)
    bad = [e for e, fs in edge_map.items() if len(fs) != 2]
    if bad:
        raise DegenerateInput(f"inconsistent face lattice: {len(bad)} edges without two facets")
    keys = sorted(edge_map)
    edges = np.array(keys, dtype=np.int64)
    edge_facets = np.array([sorted(edge_map[e]) for e in keys], dtype=np.int64)
    nb: list[set[int]] = [set() for _ in facets]
    for f, g in edge_facets:
        nb[f].add(int(g))
        nb[g].add(int(f))
    neighbors = tuple(tuple(sorted(s)) for s in nb)

    nv, ne, nf = len(V), len(edges), len(facets)
    if nv - ne + nf != 2:
        raise DegenerateInput(f"Euler relation fails for f-vector {(nv, ne, nf)}")

    antipode = -np.ones(nf, dtype=np.int64)
    dots = normals @ normals.T
    for i in range(nf):
        j = int(np.argmin(dots[i]))
        if dots[i, j] < -1 + ANGLE_TOL and abs(offsets[i] - offsets[j]) <= tol:
            antipode[i] = j
    symmetric = bool(np.all(antipode >= 0))
    return Polytope(normals, offsets, V, facets, edges, edge_facets, neighbors, antipode,
                    symmetric)


def convex_hull(points) -> Polytope:
    """Convex hull with coplanar triangles merged into polygonal facets."""
    P = np.asarray(points, dtype=float).reshape(-1, 3)
    if len(P) < 4 or not np.all(np.isfinite(P)):
        raise DegenerateInput("need at least 4 finite points")
    scale = float(np.abs(P - P.mean(axis=0)).max())
    if scale == 0.0:
        raise DegenerateInput("all points coincide")
    tol = EPS_GEO * scale
    P = _dedupe_points(P, tol)
    if len(P) < 4 or np.linalg.matrix_rank(P - P.mean(axis=0), tol=tol * 10) < 3:
        raise DegenerateInput("points do not span R^3")
    try:
        hull = ConvexHull(P)
    except QhullError as exc:
        raise DegenerateInput(str(exc)) from exc
    eq = hull.equations
    planes = []
    reps: list[np.ndarray] = []
    for a, c in zip(eq[:, :3], eq[:, 3]):
        n = np.linalg.norm(a)
        a, b = a / n, -c / n
        if any(np.linalg.norm(a - r[:3]) < ANGLE_TOL and abs(b - r[3]) <= tol for r in reps):
            continue
        reps.append(np.r_[a, b])
        planes.append((a, b))
    return _assemble(P, planes, tol, exact_planes=False)


def _interior_point(A: np.ndarray, b: np.ndarray):
    # Chebyshev-style center: maximize the minimum normalized slack
    res = lp_feasible(LPProblem(A, b))
    if res is None or res.slack <= 0:
        return None, 0.0
    return res.x, res.slack


def from_halfspaces(hs) -> Polytope:
    """Polytope of a list of Halfspace objects or an (m, 4) array of rows (a, b)."""
    if len(hs) and isinstance(hs[0], Halfspace):
        H = np.array([np.r_[h.normal, h.offset] for h in hs], dtype=float)
    else:
        H = np.asarray(hs, dtype=float).reshape(-1, 4)
    A, b = H[:, :3].copy(), H[:, 3].copy()
    n = np.linalg.norm(A, axis=1)
    if np.any(n == 0) or not np.all(np.isfinite(H)):
        raise ValueError("halfspace normals must be finite and nonzero")
    A /= n[:, None]
    b /= n
    # bounded iff the recession cone {A x <= 0} is trivial
    for d in np.vstack([np.eye(3), -np.eye(3)]):
        cone = lp_feasible(LPProblem(np.vstack([A, -d[None, :]]), np.r_[np.zeros(len(A)), -1.0]))
        if cone is not None:
            raise Unbounded("halfspace intersection is unbounded")
    x0, r = _interior_point(A, b)
    if x0 is None:
        raise EmptyInterior("halfspace intersection has empty interior")
    scale = max(float(np.abs(x0).max()), r)
    if r <= EPS_GEO * scale:
        raise EmptyInterior("halfspace intersection has empty interior")
    hsi = HalfspaceIntersection(np.column_stack([A, -b]), x0)
    V = hsi.intersections
    vscale = float(np.abs(V - V.mean(axis=0)).max())
    tol = EPS_GEO * max(vscale, float(np.abs(V).max()))
    V = _dedupe_points(V, tol)
    return _assemble(V, list(zip(A, b)), tol * 10, exact_planes=True)


def classify_point(P: Polytope, x, tol: float | None = None) -> Location:
    if tol is None:
        tol = P.tol
    m = float(np.max(P.normals @ np.asarray(x, dtype=float) - P.offsets))
    if m < -tol:
        return Location.INTERIOR
    if m <= tol:
        return Location.BOUNDARY
    return Location.EXTERIOR


def volume(P: Polytope) -> float:
    o = P.vertices.mean(axis=0)
    total = 0.0
    for ring in P.facets:
        V = P.vertices[list(ring)] - o
        for t in range(1, len(ring) - 1):
            total += np.dot(V[0], np.cross(V[t], V[t + 1]))
    return total / 6.0


def difference_body(P: Polytope) -> Polytope:
    """P - P as the hull of pairwise vertex differences, symmetrized."""
    V = P.vertices
    D = (V[:, None, :] - V[None, :, :]).reshape(-1, 3)
    Q = convex_hull(D)
    return symmetrize(Q)


def symmetrize(Q: Polytope) -> Polytope:
    """Average antipodal facet pairs and vertex pairs of a centrally symmetric body."""
    tol = Q.tol
    Vq = Q.vertices
    tree = cKDTree(Vq)
    dist, opp = tree.query(-Vq)
    if np.any(dist > 10 * tol) or not Q.symmetric:
        raise DegenerateInput("body is not centrally symmetric")
    V = 0.5 * (Vq - Vq[opp])
    N = Q.normals.copy()
    b = Q.offsets.copy()
    for i, j in enumerate(Q.antipode):
        N[i] = 0.5 * (Q.normals[i] - Q.normals[j])
        b[i] = 0.5 * (Q.offsets[i] + Q.offsets[j])
    N /= np.linalg.norm(N, axis=1)[:, None]
    return Polytope(N, b, V, Q.facets, Q.edges, Q.edge_facets, Q.neighbors, Q.antipode, True)


def facet_box(P: Polytope, i: int) -> Box:
    V = P.facet_vertices(i)
    return Box(V.min(axis=0), V.max(axis=0))


def facet_boxes(P: Polytope) -> tuple[np.ndarray, np.ndarray]:
    lo = np.array([P.facet_vertices(i).min(axis=0) for i in range(P.n_facets)])
    hi = np.array([P.facet_vertices(i).max(axis=0) for i in range(P.n_facets)])
    return lo, hi


def boxes_intersect(A: Box, B: Box) -> bool:
    return bool(np.all(A.lo <= B.hi) and np.all(B.lo <= A.hi))


def minkowski_box(A: Box, B: Box, sigma: int) -> Box:
    if sigma == 1:
        return Box(A.lo + B.lo, A.hi + B.hi)
    if sigma == -1:
        return Box(A.lo - B.hi, A.hi - B.lo)
    raise ValueError("sigma must be +1 or -1")


@dataclass(frozen=True)
class Symmetry:
    """A linear map A with A(P) = P and the facet permutation it induces."""
    A: np.ndarray
    facet_perm: np.ndarray


def linear_symmetries(P: Polytope, rtol: float = 1e-7) -> list[Symmetry]:
    """All linear maps fixing P (P centered at the origin), identity first.

    A linear symmetry permutes the vertices, so it preserves the vertex
    second-moment form; candidate images of a vertex basis are filtered by
    that form before the full vertex match.
    """
    V = P.vertices
    R = P.circumradius
    G = np.linalg.inv(V.T @ V / len(V))
    Gram = V @ G @ V.T
    scale = float(np.abs(Gram).max())
    tol_g = 1e-6 * scale
    b0 = 0
    b1 = int(np.argmax(np.linalg.norm(np.cross(V[b0], V), axis=1)))
    b2 = int(np.argmax(np.abs(np.cross(V[b0], V[b1]) @ V.T)))
    B = V[[b0, b1, b2]].T
    Binv = np.linalg.inv(B)
    tree = cKDTree(V)
    ctr = np.array([P.facet_centroid(i) for i in range(P.n_facets)])
    ctree = cKDTree(ctr)
    tol_v = max(rtol * R, 10 * P.tol)
    diag = np.diag(Gram)

    def close(a, b):
        return np.abs(a - b) <= tol_g

    out: list[Symmetry] = []
    for w0 in np.flatnonzero(close(diag, diag[b0])):
        m1 = close(diag, diag[b1]) & close(Gram[w0], Gram[b0, b1])
        for w1 in np.flatnonzero(m1):
            m2 = close(diag, diag[b2]) & close(Gram[w0], Gram[b0, b2]) & close(Gram[w1], Gram[b1, b2])
            for w2 in np.flatnonzero(m2):
                A = V[[w0, w1, w2]].T @ Binv
                dist, _ = tree.query(V @ A.T)
                if np.any(dist > tol_v):
                    continue
                cd, perm = ctree.query(ctr @ A.T)
                if np.any(cd > tol_v) or len(set(perm.tolist())) != P.n_facets:
                    continue
                out.append(Symmetry(A, perm.astype(np.int64)))
    out.sort(key=lambda s: float(np.abs(s.A - np.eye(3)).max()))
    return out
