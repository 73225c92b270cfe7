"""Acceptance suite: one pytest item (or a parametrized group) per criterion.

Every check records a line through ``report.record``; the terminal summary
prints one PASS/FAIL line per criterion. The extended tier is marked slow
(deselect with ``-m "not slow"``).
"""
import itertools
import time

import numpy as np
import pytest

from latpack import search as S
from latpack.catalog import EXTENDED_TIER, FAST_TIER, make_solid, reference_density, reference_lattice
from latpack.poly import linear_factors, resultant
from latpack.polysolve import gradient_critical_subspaces
from latpack.polytope import Location, classify_point, difference_body
from brute import s0_all_tuples, s0_after_triples
from oracles import factored_bivariate, planted_minimum, resultant_pair
from report import record

TOL_DENSITY = 1e-6
FAST_BUDGET_S = 300.0
EXTENDED_BUDGET_S = 7200.0

FAST_REF = {"tetrahedron": 18 / 49, "cube": 1.0, "octahedron": 18 / 19,
            "cubeoctahedron": 45 / 49, "truncated_octahedron": 1.0}
TAU = (1 + 5 ** 0.5) / 2
EXTENDED_REF = {"dodecahedron": (2 + TAU) / 4, "icosahedron": 0.836357445,
                "icosidodecahedron": 0.864720371, "truncated_cube": 0.973747688,
                "truncated_tetrahedron": 207 / 304, "rhombic_cubeoctahedron": 0.875805666,
                "snub_cube": 0.78769996}
assert set(FAST_REF) == set(FAST_TIER) and set(EXTENDED_REF) == set(EXTENDED_TIER)

# The quoted snub cube decimal disagrees with the closed form 1/2 + y/6 + 2y^2/3
# (y^3 + y^2 + y = 1), which evaluates to 0.7876799971; the cataloged lattice
# gives the same value. The solver reproduces the closed form, so the check
# against the quoted decimal stays red.
KNOWN_RED = {"snub_cube": "quoted 0.78769996 vs closed form 0.7876799971 (digits transposed)"}

_SOLVED: dict = {}


def solved(name: str, threads: int = 1):
    if name not in _SOLVED:
        t0 = time.perf_counter()
        res = S.densest_packing(make_solid(name), threads=threads)
        _SOLVED[name] = (res, time.perf_counter() - t0)
    return _SOLVED[name]


# -- 1 ------------------------------------------------------------------------------
@pytest.mark.parametrize("name", FAST_TIER)
def test_criterion_1_fast_tier(name):
    res, secs = solved(name)
    err = abs(res.density - FAST_REF[name])
    ok = err <= TOL_DENSITY and secs <= FAST_BUDGET_S
    record(1, ok, f"{name}: density {res.density:.12f} err {err:.1e} in {secs:.1f}s")
    assert err <= TOL_DENSITY
    assert secs <= FAST_BUDGET_S


# -- 2 ------------------------------------------------------------------------------
_EXT_TIME = []


def _extended_params():
    for name in EXTENDED_TIER:
        marks = [pytest.mark.slow]
        if name in KNOWN_RED:
            marks.append(pytest.mark.xfail(strict=True, reason=KNOWN_RED[name]))
        yield pytest.param(name, marks=marks, id=name)


@pytest.mark.parametrize("name", list(_extended_params()))
def test_criterion_2_extended_tier(name):
    res, secs = solved(name, threads=S.default_threads())
    _EXT_TIME.append(secs)
    err = abs(res.density - EXTENDED_REF[name])
    total = sum(_EXT_TIME)
    ok = err <= TOL_DENSITY and total <= EXTENDED_BUDGET_S
    note = f" [{KNOWN_RED[name]}]" if name in KNOWN_RED else ""
    record(2, ok, f"{name}: density {res.density:.12f} err {err:.1e} in {secs:.1f}s "
                  f"(tier total {total:.0f}s){note}")
    assert err <= TOL_DENSITY
    assert total <= EXTENDED_BUDGET_S


@pytest.mark.slow
def test_criterion_2_snub_cube_closed_form():
    # companion check to the known-red item: the solver agrees with the closed form
    res, _ = solved("snub_cube", threads=S.default_threads())
    ref, form = reference_density("snub_cube")
    assert abs(res.density - ref) <= TOL_DENSITY


# -- 3 ------------------------------------------------------------------------------
@pytest.mark.parametrize("name", ["cube", "octahedron", "tetrahedron"])
def test_criterion_3_bases(name):
    res, _ = solved(name)
    P0 = difference_body(make_solid(name))
    ref_det = abs(np.linalg.det(reference_lattice(name)))
    rel = abs(res.lattice_det - ref_det) / ref_det
    adm = S.verify_admissible_bruteforce(P0, res.basis)
    adm_ref = S.verify_admissible_bruteforce(P0, reference_lattice(name))
    ok = adm and adm_ref and rel <= 1e-9
    record(3, ok, f"{name}: admissible={adm} (reference {adm_ref}), det rel err {rel:.1e}")
    assert ok


# -- 4 ------------------------------------------------------------------------------
def test_criterion_4_polynomial_oracles():
    rng = np.random.default_rng(4)
    t0 = time.perf_counter()
    missed = 0
    for _ in range(500):
        f, planted = factored_bivariate(rng)
        got, _ = linear_factors(f)
        for l in planted:
            if not any(np.abs(g.vector() - l.vector()).max() <= 1e-6 for g in got):
                missed += 1
                break
    lost = 0
    for _ in range(200):
        p, m = planted_minimum(rng)
        subs = gradient_critical_subspaces(p)
        if min((s.distance(m) for s in subs), default=np.inf) > 1e-6:
            lost += 1
    secs = time.perf_counter() - t0
    ok = missed == 0 and lost == 0 and secs <= 120.0
    record(4, ok, f"linear factors missed in {missed}/500, minima lost {lost}/200, {secs:.1f}s")
    assert ok


# -- 5 ------------------------------------------------------------------------------
def test_criterion_5_resultants():
    rng = np.random.default_rng(5)
    worst_shared = worst_spec = 0.0
    n = 0
    while n < 500:
        nv = 2 + n % 2
        f, g, h = resultant_pair(rng, nv)
        F, G = f * h, g * h
        pt = rng.uniform(-1, 1, nv)
        f2, g2 = f - f(*pt), g - g(*pt)
        if h.deg_in(0) < 1 or f2.deg_in(0) < 1 or g2.deg_in(0) < 1:
            continue
        n += 1
        r = resultant(F, G, 0)
        worst_shared = max(worst_shared, r.norm() / (F.norm() ** G.deg_in(0) * G.norm() ** F.deg_in(0)))
        # planted common root: the resultant vanishes at its remaining coordinates
        r2 = resultant(f2, g2, 0)
        worst_spec = max(worst_spec, abs(r2(*pt[1:])) / max(r2.abs_eval(*pt[1:]), 1e-300))
    ok = worst_shared <= 1e-6 and worst_spec <= 1e-6
    record(5, ok, f"500 pairs: shared-factor rel norm {worst_shared:.1e}, "
                  f"specialization rel value {worst_spec:.1e}")
    assert ok


# -- 6 ------------------------------------------------------------------------------
@pytest.mark.parametrize("name", ["cube", "octahedron"])
def test_criterion_6_pruning_soundness(name):
    Q = S._normalized_P0(make_solid(name))[1]
    res, _ = solved(name)
    sizes, ok = [], True
    for case in S.CASES:
        full = s0_all_tuples(Q, case)
        pruned = s0_after_triples(Q, case)
        ok &= full == pruned
        sizes.append(f"{case}:{len(pruned)}/{len(full)}")
    kept = res.selection in s0_after_triples(Q, res.case)
    ok &= kept
    record(6, ok, f"{name}: survivors G+S0 / S0-all {' '.join(sizes)}; "
                  f"optimal selection kept={kept}")
    assert ok


# -- 7 ------------------------------------------------------------------------------
def _well_conditioned(rng, cond_max=10.0):
    U, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    V, _ = np.linalg.qr(rng.normal(size=(3, 3)))
    s = cond_max ** np.r_[0.0, rng.uniform(0, 1, 2)]
    return U @ np.diag(s) @ V * rng.uniform(0.5, 2.0)


def test_criterion_7_affine_invariance():
    rng = np.random.default_rng(7)
    P = make_solid("tetrahedron")
    errs = []
    for _ in range(5):
        T = _well_conditioned(rng)
        assert np.linalg.cond(T) <= 10.0 + 1e-9
        res = S.densest_packing(P.transformed(T, rng.normal(size=3)))
        errs.append(abs(res.density - 18 / 49))
    ok = max(errs) <= 1e-5
    record(7, ok, f"5 maps (cond <= 10): max |delta - 18/49| = {max(errs):.1e}")
    assert ok


# -- 8 ------------------------------------------------------------------------------
def _packing_valid(name):
    res, _ = solved(name)
    P0 = res.P0
    W = res.basis
    Z = np.array([z for z in itertools.product(range(-4, 5), repeat=3) if any(z)], float)
    # P + Wa and P + Wb overlap iff W(a - b) lies in int(P - P); |a_i|, |b_i| <= 2
    worst = np.max((Z @ W.T) @ P0.normals.T - P0.offsets, axis=1)
    overlap = int(np.sum(worst < -P0.tol))
    on_bd = [classify_point(P0, x) is Location.BOUNDARY for x in res.contact_points]
    full = len(S.test_set_vectors(S.CASE_KIND[res.case])) == len(on_bd)
    return overlap, sum(on_bd), len(on_bd), full


@pytest.mark.parametrize("name", list(FAST_TIER) + [pytest.param(n, marks=pytest.mark.slow)
                                                    for n in EXTENDED_TIER])
def test_criterion_8_packing_validity(name):
    overlap, nb, nc, full = _packing_valid(name)
    ok = overlap == 0 and nb == nc and full
    record(8, ok, f"{name}: {overlap} overlapping pairs within 2 shells, "
                  f"{nb}/{nc} test-set contacts on bd(P0)")
    assert ok
