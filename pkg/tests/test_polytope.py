import itertools

import numpy as np
import pytest

from latpack.catalog import SOLIDS, make_solid
from latpack.polytope import (DegenerateInput, EmptyInterior, Location, Unbounded, boxes_intersect,
                              classify_point, convex_hull, difference_body, facet_box,
                              from_halfspaces, linear_symmetries, minkowski_box)
from conftest import random_hull


@pytest.mark.parametrize("name", SOLIDS)
def test_euler_and_facet_cycles(name):
    P = make_solid(name)
    v, e, f = P.f_vector
    assert v - e + f == 2
    assert sum(len(c) for c in P.facets) == 2 * e
    # facet normals point outward, cycles are counter-clockwise seen from outside
    for i, cyc in enumerate(P.facets):
        X = P.vertices[list(cyc)]
        assert np.allclose(X @ P.normals[i], P.offsets[i], atol=1e-9)
        area = sum(np.cross(X[k], X[(k + 1) % len(X)]) for k in range(len(X)))
        assert area @ P.normals[i] > 0


def test_cube_basics(cube):
    assert cube.f_vector == (8, 12, 6)
    assert cube.symmetric
    assert cube.volume() == pytest.approx(8.0)
    assert all(cube.normals[cube.antipode[i]] @ cube.normals[i] == pytest.approx(-1) for i in range(6))


def test_hull_and_halfspaces_round_trip(rng):
    P = random_hull(rng)
    Q = from_halfspaces(np.c_[P.normals, P.offsets])
    assert Q.f_vector == P.f_vector
    assert Q.volume() == pytest.approx(P.volume(), rel=1e-10)


def test_hull_drops_interior_and_duplicate_points(cube):
    pts = np.vstack([cube.vertices, cube.vertices, np.zeros((1, 3)), [[0.5, 0.1, -0.2]]])
    assert convex_hull(pts).f_vector == (8, 12, 6)


def test_degenerate_inputs():
    with pytest.raises(DegenerateInput):
        convex_hull(np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0]], float))
    with pytest.raises(Unbounded):
        from_halfspaces(np.array([[1, 0, 0, 1], [0, 1, 0, 1], [0, 0, 1, 1], [-1, 0, 0, 1]], float))
    with pytest.raises((EmptyInterior, DegenerateInput)):
        from_halfspaces(np.array([[1, 0, 0, -1], [-1, 0, 0, -1], [0, 1, 0, 1], [0, -1, 0, 1],
                                  [0, 0, 1, 1], [0, 0, -1, 1]], float))


def test_classify_point(cube):
    assert classify_point(cube, [0, 0, 0]) is Location.INTERIOR
    assert classify_point(cube, [1, 0.3, 0]) is Location.BOUNDARY
    assert classify_point(cube, [1.01, 0, 0]) is Location.EXTERIOR


def test_difference_body_of_tetrahedron(tetrahedron):
    P0 = difference_body(tetrahedron)
    assert P0.symmetric
    assert P0.f_vector == (12, 24, 14)  # a cubeoctahedron
    # vol(P - P) = 20 vol(P) for a simplex
    assert P0.volume() == pytest.approx(20 * tetrahedron.volume(), rel=1e-12)


def test_difference_body_contains_all_vertex_differences(rng):
    P = random_hull(rng, 12)
    P0 = difference_body(P)
    D = np.array([a - b for a, b in itertools.product(P.vertices, repeat=2)])
    assert np.all(D @ P0.normals.T <= P0.offsets + 1e-9)


def test_affine_image_volume(tetrahedron, rng):
    T = rng.normal(size=(3, 3)) + 3 * np.eye(3)
    img = tetrahedron.transformed(T, [1.0, -2.0, 0.5])
    assert img.volume() == pytest.approx(abs(np.linalg.det(T)) * tetrahedron.volume(), rel=1e-10)


def test_boxes(cube):
    b0 = facet_box(cube, 0)
    assert boxes_intersect(b0, b0)
    m = minkowski_box(b0, b0, -1)
    assert np.all(m.lo <= 0) and np.all(m.hi >= 0)


@pytest.mark.parametrize("name,order", [("cube", 48), ("octahedron", 48), ("cubeoctahedron", 48),
                                        ("dodecahedron", 120)])
def test_linear_symmetries(name, order):
    P = difference_body(make_solid(name))
    syms = linear_symmetries(P)
    assert len(syms) == order
    assert np.allclose(syms[0].A, np.eye(3))
    for s in syms[:10]:
        img = P.normals @ np.linalg.inv(s.A)
        # facet i goes to facet facet_perm[i]
        assert np.allclose(img / np.linalg.norm(img, axis=1)[:, None], P.normals[s.facet_perm], atol=1e-8)


def test_linear_symmetries_survive_affine_maps(rng):
    P = difference_body(make_solid("cube"))
    T = rng.normal(size=(3, 3)) + 2 * np.eye(3)
    assert len(linear_symmetries(P.transformed(T))) == 48


def test_generic_body_has_only_central_symmetry(rng):
    P = difference_body(random_hull(rng, 9))
    assert len(linear_symmetries(P)) == 2
