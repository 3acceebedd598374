import math

import numpy as np
import pytest

from wparc import wp_poisson as wp
from wparc.metrics import boundary_geometry

SYM = math.acosh(2.0)
PATTERN = np.array([[0, 1, -1], [-1, 0, 1], [1, -1, 0]], dtype=float)


def hand_bivector(surface, a):
    """Independent assembly: walk each cycle, accumulate positions, and sum the
    kernel over every ordered pair of distinct feet."""
    geom = boundary_geometry(surface, a)
    H = np.zeros((3, 3))
    for c, cyc in enumerate(geom.cycles):
        pos, x = {}, 0.0
        for y in cyc:
            pos[y] = x
            x += geom.segment[y]
        p = x
        for y in cyc:
            for y2 in cyc:
                if y == y2:
                    continue
                d = (pos[y2] - pos[y]) % p
                H[y[0], y2[0]] += 0.5 * math.sinh(p / 2 - d) / math.sinh(p / 2)
    return H


def test_symmetric_torus_value(torus):
    H = wp.wp_bivector(torus, np.full(3, SYM))
    assert np.max(np.abs(H - 0.2 * PATTERN)) < 1e-12


def test_matches_hand_assembly(torus, pants, rng):
    for s in (torus, pants):
        a = rng.uniform(0.3, 2.5, 3)
        assert np.max(np.abs(wp.wp_bivector(s, a) - hand_bivector(s, a))) < 1e-14


def test_frozen_value(torus):
    H = wp.wp_bivector(torus, np.array([1.0, 1.5, 2.0]))
    assert H[0, 1] == pytest.approx(0.0499628470877089, abs=1e-13)
    assert H[0, 2] == pytest.approx(-0.20896067460834372, abs=1e-13)
    assert H[1, 2] == pytest.approx(0.40480879759653776, abs=1e-13)


def test_antisymmetry(torus, rng):
    H = wp.wp_bivector(torus, rng.uniform(0.3, 2.5, 3))
    assert np.max(np.abs(H + H.T)) < 1e-15


def test_pants_vanishes(pants, rng):
    for _ in range(10):
        assert np.max(np.abs(wp.wp_bivector(pants, rng.uniform(0.2, 3.0, 3)))) < 1e-13


def test_bracket(torus):
    H = wp.wp_bivector(torus, np.full(3, SYM))
    assert wp.bracket(H, [1, 0, 0], [0, 1, 0]) == pytest.approx(0.2, abs=1e-12)
    assert wp.bracket(H, [1, 2, 3], [1, 2, 3]) == pytest.approx(0.0, abs=1e-14)
    with pytest.raises(ValueError):
        wp.bracket(H, [1, 0], [0, 1, 0])


def test_casimir(torus, pants, rng):
    assert wp.casimir_residual(torus, np.full(3, SYM), 0) < 1e-9
    for C in range(3):
        assert wp.casimir_residual(pants, rng.uniform(0.3, 2.5, 3), C) == 0.0
    a = SYM + rng.uniform(-0.4, 0.4, 3)
    assert wp.casimir_residual(torus, a, 0, scaled=True) < 1e-7
    with pytest.raises(ValueError):
        wp.casimir_residual(torus, a, 1)


def test_jacobi(torus, pants, rng):
    assert wp.jacobi_residual(torus, np.full(3, SYM), 0, 1, 2) < 1e-6
    assert wp.jacobi_residual(pants, rng.uniform(0.3, 2.5, 3), 0, 1, 2) == 0.0
    with pytest.raises(ValueError):
        wp.jacobi_residual(torus, np.full(3, SYM), 0, 0, 2)
    with pytest.raises(ValueError):
        wp.jacobi_residual(torus, np.full(3, SYM), 0, 1, 5)


def test_jacobi_tensor_vanishes_everywhere(torus, rng):
    J = wp.jacobi_tensor(torus, rng.uniform(0.5, 2.0, 3))
    assert J.shape == (3, 3, 3)
    assert np.max(np.abs(J)) < 1e-8


def test_twist_matrix_is_minus_bivector(torus, pants, rng):
    for s in (torus, pants):
        a = rng.uniform(0.3, 2.5, 3)
        T = wp.twist_matrix(s, a)
        assert np.max(np.abs(T + wp.wp_bivector(s, a))) < 1e-14
        assert wp.twist_derivative_arc(s, a, 1, 1) == pytest.approx(0.0, abs=1e-15)


def test_rank(torus, pants, rng):
    a = rng.uniform(0.3, 2.5, 3)
    assert wp.poisson_rank(wp.wp_bivector(torus, a)) == 2
    assert wp.poisson_rank(wp.wp_bivector(pants, a)) == 0
