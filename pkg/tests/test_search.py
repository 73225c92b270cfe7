import numpy as np
import pytest

from latpack import search as S
from latpack.catalog import make_solid, reference_lattice
from latpack.polytope import difference_body
from brute import s0_all_tuples, s0_after_triples


@pytest.fixture(scope="module")
def cube_Q():
    return S._normalized_P0(make_solid("cube"))[1]


def test_test_sets():
    assert len(S.test_set_vectors(1)) == 6
    assert len(S.test_set_vectors(2)) == 6
    assert len(S.test_set_vectors(3)) == 7
    assert [S.sigma_of(k) for k in (1, 2, 3)] == [-1, 1, 1]


@pytest.mark.parametrize("kind", [1, 2, 3])
def test_relation_triples_are_test_set_identities(kind):
    U = [np.array(u) for u in S.test_set_vectors(kind)]
    sigma = S.sigma_of(kind)
    for k, pairs in S.relation_triples(kind).items():
        for i, j in pairs:
            assert np.array_equal(U[i] + sigma * U[j], U[k])


@pytest.mark.parametrize("name", ["cube", "octahedron"])
def test_triple_set_matches_brute_force(name):
    Q = S._normalized_P0(make_solid(name))[1]
    fast, slow = S.build_triple_set(Q, 1), S.brute_triple_set(Q, 1)
    assert fast.triples == slow.triples
    assert fast.with_sigma(-1).triples == slow.with_sigma(-1).triples


def test_triple_set_needs_symmetric_body(tetrahedron):
    with pytest.raises(ValueError):
        S.build_triple_set(tetrahedron)


@pytest.mark.parametrize("case", S.CASES)
def test_pruning_is_sound_on_cube(cube_Q, case):
    assert s0_after_triples(cube_Q, case) == s0_all_tuples(cube_Q, case)


@pytest.mark.parametrize("case", S.CASES)
def test_canonical_selections_cover_every_orbit(cube_Q, case):
    ts = S.build_triple_set(cube_Q, 1).with_sigma(S.sigma_of(S.CASE_KIND[case]))
    full = set(S.enumerate_selections(case, ts, cube_Q))
    canon = set(S.enumerate_selections(case, ts, cube_Q, canonical=True))
    assert canon <= full
    group = S.SelectionGroup(cube_Q, case)
    # every selection is mapped onto some canonical one by the group
    for sel in list(full)[:200]:
        s = np.array(sel)
        imgs = group.perm[np.arange(len(group))[:, None],
                          np.where(group.flip, group.antipode[s[group.src]], s[group.src])]
        assert any(tuple(int(v) for v in im) in canon for im in imgs)


def test_reference_lattices_admissible():
    for name in ("cube", "octahedron", "tetrahedron"):
        P = make_solid(name)
        P0 = difference_body(P)
        W = reference_lattice(name)
        # packing lattice of P = admissible lattice of P - P
        assert S.verify_admissible_bruteforce(P0, W)
        assert not S.verify_admissible_bruteforce(P0, 0.9 * W)


def test_singular_basis_rejected(cube):
    with pytest.raises(ValueError):
        S.verify_admissible_bruteforce(difference_body(cube), np.zeros((3, 3)))


def test_cube_packing():
    res = S.densest_packing(make_solid("cube"))
    assert res.density == pytest.approx(1.0, abs=1e-9)
    assert res.verified
    assert res.critical_determinant == pytest.approx(8.0)
    assert res.cases_searched == S.CASES
    assert res.counts.selections_enumerated > 0
    assert res.contact_points.shape in ((6, 3), (7, 3))


def test_symmetry_reduction_does_not_change_the_result():
    P = make_solid("cube")
    a = S.densest_packing(P)
    b = S.densest_packing(P, symmetry=False)
    assert a.density == pytest.approx(b.density, abs=1e-12)
    assert a.case == b.case
    assert b.counts.selections_enumerated >= a.counts.selections_enumerated


def test_parallel_run_agrees():
    P = make_solid("cube")
    a = S.densest_packing(P)
    b = S.densest_packing(P, threads=2)
    assert a.density == pytest.approx(b.density, abs=1e-12)
    assert a.selection == b.selection


def test_partial_cases():
    res = S.densest_packing(make_solid("cube"), cases=("III",))
    assert res.cases_searched == ("III",)
    with pytest.raises(ValueError):
        S.densest_packing(make_solid("cube"), cases=())


def test_octahedron_packing():
    res = S.densest_packing(make_solid("octahedron"))
    assert res.density == pytest.approx(18 / 19, abs=1e-9)
    assert res.verified
