"""Brute-force reference for selection pruning: every facet tuple, S0 only."""
from latpack import search as S


def s0_all_tuples(Q, case):
    """Selections (l_1 a representative, other slots any facet) passing the S0 LP.

    Partial tuples are cut as soon as their own S0 LP fails; the LP of a
    prefix has a subset of the constraints, so no feasible completion is lost.
    """
    k = len(S.test_set_vectors(S.CASE_KIND[case]))
    out = set()
    sel = []

    def rec():
        if len(sel) == k:
            out.add(tuple(sel))
            return
        cands = S.representatives(Q) if not sel else range(Q.n_facets)
        for l in cands:
            sel.append(l)
            if S.selection_feasible(Q, sel, case):
                rec()
            sel.pop()

    rec()
    return out


def s0_after_triples(Q, case):
    ts = S.build_triple_set(Q, 1).with_sigma(S.sigma_of(S.CASE_KIND[case]))
    return {sel for sel in S.enumerate_selections(case, ts, Q)
            if S.selection_feasible(Q, sel, case)}
