import numpy as np
import pytest

from latpack.catalog import (CATALOG, EXTENDED_TIER, FAST_TIER, SOLIDS, UnknownSolid, make_solid,
                             reference_density, reference_lattice, snub_cube_root)
from latpack.polytope import difference_body, linear_symmetries
from latpack.search import verify_admissible_bruteforce

WITH_LATTICE = [n for n in SOLIDS if CATALOG[n].lattice is not None]


def test_tiers_are_in_catalog():
    assert set(FAST_TIER) | set(EXTENDED_TIER) <= set(SOLIDS)
    assert len(SOLIDS) == 18


@pytest.mark.parametrize("name", SOLIDS)
def test_f_vector_and_symmetry_flag(name):
    P = make_solid(name)
    assert P.f_vector == CATALOG[name].f_vector
    assert P.symmetric == CATALOG[name].symmetric


@pytest.mark.parametrize("name", [n for n in SOLIDS if n not in ("tetrahedron", "truncated_tetrahedron")
                                  and not n.startswith("snub")])
def test_uniform_edges(name):
    P = make_solid(name)
    L = np.linalg.norm(P.vertices[P.edges[:, 0]] - P.vertices[P.edges[:, 1]], axis=1)
    assert L.max() - L.min() < 1e-9 * L.max()


@pytest.mark.parametrize("name", ["snub_cube", "snub_dodecahedron", "tetrahedron",
                                  "truncated_tetrahedron"])
def test_uniform_edges_chiral_and_tetrahedral(name):
    P = make_solid(name)
    L = np.linalg.norm(P.vertices[P.edges[:, 0]] - P.vertices[P.edges[:, 1]], axis=1)
    assert L.max() - L.min() < 1e-9 * L.max()


@pytest.mark.parametrize("name", WITH_LATTICE)
def test_reference_lattice_reproduces_density(name):
    P = make_solid(name)
    W = reference_lattice(name)
    assert verify_admissible_bruteforce(difference_body(P), W)
    ref, _ = reference_density(name)
    assert P.volume() / abs(np.linalg.det(W)) == pytest.approx(ref, abs=1e-12)


def test_closed_forms():
    assert reference_density("tetrahedron") == (pytest.approx(18 / 49), "18/49")
    assert reference_density("truncated_tetrahedron")[0] == pytest.approx(207 / 304)
    tau = (1 + 5 ** 0.5) / 2
    assert reference_density("dodecahedron")[0] == pytest.approx((2 + tau) / 4)


def test_snub_cube_root():
    y = snub_cube_root()
    assert y ** 3 + y ** 2 + y == pytest.approx(1.0, abs=1e-15)
    assert reference_density("snub_cube")[0] == pytest.approx(0.5 + y / 6 + 2 * y * y / 3, abs=1e-15)


def test_snub_cube_is_chiral():
    # rotations only: 24 linear symmetries of the solid itself
    assert len(linear_symmetries(make_solid("snub_cube"))) == 24


def test_unknown_solid():
    with pytest.raises(UnknownSolid) as err:
        make_solid("hypercube")
    assert "hypercube" in str(err.value)
