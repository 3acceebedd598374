"""The Weil-Petersson Poisson bivector in arc-length coordinates.

For arcs i, j the bracket is

    {a_i, a_j} = 1/2 sum_C sum sinh(p_C/2 - d_C(y, y')) / sinh(p_C/2)

over feet y of arc i and y' of arc j on the same boundary component C,
y != y'.  d_C(y, y') is measured from y to y' in the positive direction
of C, so the coefficient is antisymmetric in (y, y').
"""

from __future__ import annotations

import math

import numpy as np

from .metrics import BoundaryGeometry, boundary_geometry, check_lengths, fd_jacobian, perimeters
from .surface import Surface

GRADIENT_STEP = 1e-6
JACOBI_STEP = 1e-5


def pair_matrix(surface: Surface, geom: BoundaryGeometry, kernel) -> np.ndarray:
    """1/2 sum over ordered pairs of distinct feet on a common component of
    kernel(d(y, y'), p_C), accumulated at [arc(y), arc(y')]."""
    n = surface.arc_count
    out = np.zeros((n, n))
    for c, cyc in enumerate(geom.cycles):
        p = geom.perimeters[c]
        for y in cyc:
            for y2 in cyc:
                if y != y2:
                    out[y[0], y2[0]] += 0.5 * kernel(geom.d(y, y2), p)
    return out


def _wp_kernel(d: float, p: float) -> float:
    return math.sinh(p / 2.0 - d) / math.sinh(p / 2.0)


def wp_bivector(surface: Surface, a) -> np.ndarray:
    """Matrix H with H[i, j] = {a_i, a_j}."""
    return pair_matrix(surface, boundary_geometry(surface, a), _wp_kernel)


def bracket(H, df, dg) -> float:
    """eta(df, dg) = df^T H dg."""
    H = np.asarray(H, dtype=float)
    df = np.asarray(df, dtype=float)
    dg = np.asarray(dg, dtype=float)
    n = H.shape[0]
    if H.shape != (n, n) or df.shape != (n,) or dg.shape != (n,):
        raise ValueError(f"dimension mismatch: H {H.shape}, df {df.shape}, dg {dg.shape}")
    return float(df @ H @ dg)


def perimeter_gradients(surface: Surface, a, rel_step: float = GRADIENT_STEP) -> np.ndarray:
    """Row C is the central-difference gradient of p_C with respect to a."""
    a = check_lengths(surface, a)
    return fd_jacobian(lambda x: perimeters(surface, x), a, rel_step)


def casimir_residual(surface: Surface, a, C: int, rel_step: float = GRADIENT_STEP,
                     scaled: bool = False) -> float:
    """||H grad p_C||_inf.  With ``scaled`` the value is divided by
    ||H||_inf ||grad p_C||_inf (zero when H vanishes)."""
    a = check_lengths(surface, a)
    H = wp_bivector(surface, a)
    grad = perimeter_gradients(surface, a, rel_step)
    if not 0 <= C < grad.shape[0]:
        raise ValueError(f"boundary component {C} out of range 0..{grad.shape[0] - 1}")
    g = grad[C]
    r = float(np.max(np.abs(H @ g)))
    if not scaled:
        return r
    norm = float(np.max(np.abs(H))) * float(np.max(np.abs(g)))
    return r / norm if norm > 0 else 0.0


def bivector_derivatives(surface: Surface, a, rel_step: float = JACOBI_STEP) -> np.ndarray:
    """dH[j, k, l] = d H[j, k] / d a_l by central differences."""
    a = check_lengths(surface, a)
    n = surface.arc_count
    flat = fd_jacobian(lambda x: wp_bivector(surface, x).ravel(), a, rel_step)
    return flat.reshape(n, n, n)


def jacobi_tensor(surface: Surface, a, rel_step: float = JACOBI_STEP) -> np.ndarray:
    """J[i, j, k] = sum_l (H[i,l] dH[j,k,l] + H[j,l] dH[k,i,l] + H[k,l] dH[i,j,l])."""
    H = wp_bivector(surface, a)
    dH = bivector_derivatives(surface, a, rel_step)
    t = np.einsum("il,jkl->ijk", H, dH)
    return t + t.transpose(1, 2, 0) + t.transpose(2, 0, 1)


def jacobi_residual(surface: Surface, a, i: int, j: int, k: int,
                    rel_step: float = JACOBI_STEP) -> float:
    if len({i, j, k}) != 3:
        raise ValueError("Jacobi residual needs three distinct arcs")
    n = surface.arc_count
    if not all(0 <= x < n for x in (i, j, k)):
        raise ValueError(f"arc index out of range 0..{n - 1}")
    return float(abs(jacobi_tensor(surface, a, rel_step)[i, j, k]))


def twist_derivative_arc(surface: Surface, a, i: int, j: int) -> float:
    """d a_j / d tau_i, tau_i the twist along the closed geodesic doubling
    arc i:  1/2 sum sinh(p_C/2 - d_C(y', y)) / sinh(p_C/2) over feet y of
    arc i and y' of arc j on a common component, y != y'."""
    geom = boundary_geometry(surface, a)
    total = 0.0
    for c, cyc in enumerate(geom.cycles):
        p = geom.perimeters[c]
        for y in cyc:
            if y[0] != i:
                continue
            for y2 in cyc:
                if y2[0] == j and y2 != y:
                    total += 0.5 * _wp_kernel(geom.d(y2, y), p)
    return total


def twist_matrix(surface: Surface, a) -> np.ndarray:
    """T[i, j] = d a_j / d tau_i.  The bivector is H = T^T = -T."""
    n = surface.arc_count
    return np.array([[twist_derivative_arc(surface, a, i, j) for j in range(n)]
                     for i in range(n)])


def poisson_rank(H, tol: float = 1e-9) -> int:
    s = np.linalg.svd(np.asarray(H, dtype=float), compute_uv=False)
    return int(np.sum(s > tol * max(1.0, s[0] if len(s) else 0.0)))


__all__ = [
    "GRADIENT_STEP", "JACOBI_STEP", "bivector_derivatives", "bracket", "casimir_residual",
    "jacobi_residual", "jacobi_tensor", "pair_matrix", "perimeter_gradients", "poisson_rank",
    "twist_derivative_arc", "twist_matrix", "wp_bivector",
]
