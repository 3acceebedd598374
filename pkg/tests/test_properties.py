"""Property-based checks of invariants."""

import itertools
import math

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st

from wparc import hyptrig as ht
from wparc import limits as L
from wparc import metrics as m
from wparc import twist as tw
from wparc import wp_poisson as wp
from wparc.surface import Surface, isomorphic, one_holed_torus, pair_of_pants

TORUS, PANTS = one_holed_torus(), pair_of_pants()
length = st.floats(0.3, 2.5)
lengths = st.tuples(length, length, length).map(np.array)
surfaces = st.sampled_from([TORUS, PANTS])


@st.composite
def moebius(draw):
    """Determinant-one map from three free coefficients."""
    a = draw(st.floats(0.5, 2.0))
    b, c = draw(st.floats(-1.0, 1.0)), draw(st.floats(-1.0, 1.0))
    return ht.MoebiusMap(a, b, c, (1.0 + b * c) / a)


@st.composite
def configurations(draw):
    """Six boundary points x = tan(theta / 2) with angular gaps >= 2 pi / 18."""
    w = np.array(draw(st.lists(st.floats(1.0, 3.0), min_size=6, max_size=6)))
    start = draw(st.floats(-3.0, 3.0))
    th = start + np.cumsum(np.concatenate([[0.0], w[:-1]])) * 2 * math.pi / w.sum()
    order = draw(st.permutations(range(6)))
    x = [math.tan(th[i] / 2) for i in order]
    assume(all(abs(v) < 1e4 for v in x))
    return tw.TwistConfiguration(tuple(x[:4]), x[4], x[5])


@given(configurations(), moebius())
def test_cross_ratio_moebius_invariant(c, g):
    imgs = [g(v) for v in c.z]
    assume(all(abs(v) < 1e6 for v in imgs))
    assert math.isclose(ht.cross_ratio(*imgs), ht.cross_ratio(*c.z), rel_tol=1e-8, abs_tol=1e-10)


@given(configurations(), moebius())
def test_twist_derivative_moebius_invariant(c, g):
    z = [g(v) for v in c.z] + [g(c.s1), g(c.s2)]
    assume(all(abs(v) < 1e5 for v in z))
    c2 = tw.TwistConfiguration(tuple(z[:4]), z[4], z[5])
    assert math.isclose(tw.cr_twist_derivative(c2), tw.cr_twist_derivative(c),
                        rel_tol=1e-7, abs_tol=1e-9)


@given(configurations())
def test_side_negates(c):
    assert tw.cr_twist_derivative(c, side=-1) == -tw.cr_twist_derivative(c)


@given(surfaces, lengths)
def test_bivector_antisymmetric(s, a):
    H = wp.wp_bivector(s, a)
    assert np.max(np.abs(H + H.T)) < 1e-15


@given(st.permutations(range(3)), lengths)
def test_relabeling_conjugates_bivector(perm, a):
    # arc i becomes arc perm[i]
    hexes = [[(perm[i], d) for i, d in h] for h in TORUS.hexagons]
    relabeled = Surface.from_hexagons(hexes)
    b = np.empty(3)
    b[list(perm)] = a
    H, H2 = wp.wp_bivector(TORUS, a), wp.wp_bivector(relabeled, b)
    P = np.eye(3)[list(perm)].T
    assert np.max(np.abs(P @ H @ P.T - H2)) < 1e-14


@given(surfaces, lengths, st.integers(0, 2))
def test_flip_is_an_involution(s, a, arc):
    assume(s.locate((arc, 1))[0] != s.locate((arc, -1))[0])
    s1, a1 = m.flip(s, a, arc)
    s2, a2 = m.flip(s1, a1, arc)
    assert isomorphic(s2, s)
    assert np.max(np.abs(a2 - a)) < 1e-8
    p0, p1 = np.sort(m.perimeters(s, a)), np.sort(m.perimeters(s1, a1))
    assert np.max(np.abs(p0 - p1)) < 1e-8


@given(surfaces, st.tuples(length, length, length), st.floats(0.1, 10.0))
def test_decorated_bivector_projective(s, lam, c):
    H1 = L.decorated_bivector(L.DecoratedSurface(s, lam))
    H2 = L.decorated_bivector(L.DecoratedSurface(s, tuple(c * x for x in lam)))
    assert np.max(np.abs(H1 - H2)) < 1e-12


@given(length, length, length)
def test_hexagon_identity(ai, aj, ak):
    s = [math.cosh(x / 2) for x in (ai, aj, ak)]
    b = m.hexagon_b_lengths(ai, aj, ak)
    for pos in range(3):
        i, j, k = pos, (pos + 1) % 3, (pos + 2) % 3
        wi = ht.half_width(s[i], s[j], s[k])
        wj = ht.half_width(s[j], s[k], s[i])
        assert math.isclose(wi + wj, b[k], abs_tol=1e-10)


@given(st.floats(1.0, 5.0), st.floats(0.01, 0.99))
def test_geometric_series(p, frac):
    d = frac * p
    assert math.isclose(tw.geometric_series_sum(p, d), tw.closed_coefficient(p, d), abs_tol=1e-10)


@given(surfaces, lengths)
def test_widths_sum_to_half_total_perimeter(s, a):
    assert math.isclose(m.widths(s, a).sum(), 0.5 * m.perimeters(s, a).sum(), rel_tol=1e-12)


@given(lengths)
def test_twist_matrix_antisymmetric_torus(a):
    T = wp.twist_matrix(TORUS, a)
    for i, j in itertools.combinations(range(3), 2):
        assert math.isclose(T[i, j], -T[j, i], abs_tol=1e-14)
