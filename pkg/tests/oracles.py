"""Random polynomial families with planted structure (shared by unit and acceptance tests)."""
import itertools

import numpy as np

from latpack.poly import LinearPoly, Poly


def _quadratic_irreducible(rng, nvars=2):
    # positive definite form plus a constant: an ellipse or an empty conic, never a line pair
    X = [Poly.var(i, nvars) for i in range(nvars)]
    c = rng.uniform(-1, 1, nvars)
    B = rng.normal(size=(nvars, nvars))
    A = B @ B.T + 0.3 * np.eye(nvars)
    u = [X[i] - c[i] for i in range(nvars)]
    q = Poly.const(-rng.uniform(0.2, 2) * rng.choice([1, -1]), nvars)
    for i in range(nvars):
        for j in range(nvars):
            q = q + u[i] * u[j] * A[i, j]
    return q


def factored_bivariate(rng):
    """(f, planted linear factors): 1..4 linear factors and at most one quadratic, deg <= 4."""
    nq = int(rng.integers(0, 2))
    nl = int(rng.integers(1, 5 - 2 * nq))
    ls = [LinearPoly(rng.normal(), rng.normal(size=2)).normalized() for _ in range(nl)]
    f = Poly.const(rng.uniform(0.5, 2), 2)
    for l in ls:
        f = f * l.poly
    for _ in range(nq):
        f = f * _quadratic_irreducible(rng)
    return f, ls


def planted_minimum(rng):
    """(p, m): trivariate cubic with a nondegenerate local minimum at m."""
    V = [Poly.var(i, 3) for i in range(3)]
    m = rng.uniform(-2, 2, 3)
    B = rng.normal(size=(3, 3))
    A = B @ B.T + 0.5 * np.eye(3)
    u = [V[i] - m[i] for i in range(3)]
    p = Poly.const(rng.normal(), 3)
    for i in range(3):
        for j in range(3):
            p = p + u[i] * u[j] * A[i, j]
    for e in itertools.combinations_with_replacement(range(3), 3):
        p = p + u[e[0]] * u[e[1]] * u[e[2]] * (0.3 * rng.normal())
    return p, m


def random_poly(rng, deg, nvars):
    terms = {e: rng.normal() for e in itertools.product(range(deg + 1), repeat=nvars)
             if sum(e) <= deg}
    return Poly.from_terms(terms, nvars)


def resultant_pair(rng, nvars):
    """(f, g, h) with random degrees 1..2 each."""
    return tuple(random_poly(rng, int(rng.integers(1, 3)), nvars) for _ in range(3))
