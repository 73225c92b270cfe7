from fractions import Fraction

import numpy as np

from latpack.catalog import make_solid
from latpack.exact import verify_exact
from latpack.search import densest_packing


def test_cube_is_exactly_one():
    chk = verify_exact(make_solid("cube"), densest_packing(make_solid("cube")))
    assert chk.ok and chk.density == Fraction(1) and chk.density_str == "1/1"


def test_octahedron_exact():
    P = make_solid("octahedron")
    chk = verify_exact(P, densest_packing(P))
    assert chk.ok and chk.density == Fraction(18, 19)


def test_irrational_vertices_fail_gracefully():
    P = make_solid("dodecahedron")
    res = densest_packing(make_solid("cube"))  # any result object will do
    chk = verify_exact(P, res)
    assert not chk.ok and chk.density is None and chk.reason


def test_perturbed_basis_is_rejected():
    P = make_solid("cube")
    res = densest_packing(P)
    res.basis = res.basis + 1e-7 * np.eye(3)
    chk = verify_exact(P, res)
    assert not chk.ok
