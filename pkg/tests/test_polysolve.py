import numpy as np
import pytest

from latpack.poly import Poly
from latpack.polysolve import (AffineSubspace, DegreeTooHigh, conic_components,
                               gradient_critical_subspaces)
from oracles import planted_minimum

X, Y = Poly.var(0, 2), Poly.var(1, 2)
V = [Poly.var(i, 3) for i in range(3)]


def test_affine_subspace_basics():
    S = AffineSubspace.make([1.0, 2.0, 3.0], [[0, 0, 2.0]])
    assert S.dim == 1
    assert S.distance([1, 2, -7]) == pytest.approx(0.0)
    assert S.distance([2, 2, 0]) == pytest.approx(1.0)
    assert AffineSubspace.whole(3).contains(S)
    assert not S.contains(AffineSubspace.whole(3))


def test_conic_components():
    # line pair x^2 - y^2
    lines = conic_components(X * X - Y * Y)
    assert len(lines) == 2 and all(s.dim == 1 for s in lines)
    # point ellipse (x-1)^2 + (y+2)^2
    pt = conic_components((X - 1) ** 2 + (Y + 2) ** 2)
    assert len(pt) == 1 and np.allclose(pt[0].point, [1, -2])
    # real ellipse and empty conic have no affine components
    assert conic_components(X * X + Y * Y - 1) == []
    assert conic_components(X * X + Y * Y + 1) == []


def test_critical_point_of_quadratic():
    p = (V[0] - 1) ** 2 + (V[1] + 0.5) ** 2 * 2 + V[2] * V[2] + V[0] * V[2]
    S = gradient_critical_subspaces(p)
    pts = [s.point for s in S if s.dim == 0]
    H = np.array([[2, 0, 1], [0, 4, 0], [1, 0, 2]], float)
    m = np.linalg.solve(H, [2, -2, 0])
    assert min(np.linalg.norm(q - m) for q in pts) < 1e-8


def test_critical_line_of_degenerate_cubic():
    # x^2 (y + 1): gradient vanishes on the whole line x = 0
    p = V[0] * V[0] * (V[1] + 1)
    S = gradient_critical_subspaces(p)
    line = AffineSubspace.make([0, 0, 0], [[0, 1, 0], [0, 0, 1]])
    assert any(s.dim >= 1 and line.contains(s, 1e-6) or s.contains(line, 1e-6) for s in S)


def test_constant_polynomial_is_everywhere_critical():
    S = gradient_critical_subspaces(Poly.const(3.0, 3))
    assert len(S) == 1 and S[0].dim == 3


def test_degree_limit():
    with pytest.raises(DegreeTooHigh):
        gradient_critical_subspaces(V[0] ** 4 + V[1])


def test_planted_minima(rng):
    for _ in range(25):
        p, m = planted_minimum(rng)
        S = gradient_critical_subspaces(p)
        assert min(s.distance(m) for s in S) <= 1e-6
