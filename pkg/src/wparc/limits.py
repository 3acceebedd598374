"""Limiting Poisson structures: Kontsevich's piecewise-linear bivector (large
boundary) and Penner's decorated coordinates (cusps)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .hyptrig import GeometryError
from .metrics import (BoundaryGeometry, assemble_boundary, check_lengths, fd_jacobian,
                      normalized_widths, perimeters)
from .surface import Surface
from .wp_poisson import GRADIENT_STEP, pair_matrix, wp_bivector


def kontsevich_bivector(surface: Surface) -> np.ndarray:
    """B[i, j] = sum over hexagons of +1 when j follows i in the hexagon's
    cyclic order and -1 when i follows j."""
    n = surface.arc_count
    B = np.zeros((n, n), dtype=int)
    for h in surface.hexagons:
        for pos in range(3):
            i, j = h[pos][0], h[(pos + 1) % 3][0]
            B[i, j] += 1
            B[j, i] -= 1
    return B


@dataclass
class LimitRow:
    t: float
    deviation: float
    sign_match: bool


def large_boundary_limit_study(surface: Surface, a0, t_list,
                               rel_step: float = GRADIENT_STEP) -> list:
    """Deviation of 2 eta~ in normalized width coordinates from B along a = t a0.

    eta~ = (sum p / 2)^2 H, pushed forward by the Jacobian of a -> w~.  The
    target is the integer pattern B itself: in w~ coordinates the limit is
    1/2 sum_h (d~_i ^ d~_j + ...), whose matrix is B / 2."""
    a0 = check_lengths(surface, a0)
    ts = [float(t) for t in t_list]
    if any(t <= 0 for t in ts) or any(t2 >= t1 for t1, t2 in zip(ts, ts[1:])):
        raise ValueError("t_list must be strictly decreasing positive values")
    B = kontsevich_bivector(surface)
    rows = []
    for t in ts:
        a = t * a0
        H = wp_bivector(surface, a)
        half = 0.5 * perimeters(surface, a).sum()
        J = fd_jacobian(lambda x: normalized_widths(surface, x), a, rel_step)
        if not np.all(np.isfinite(J)) or np.linalg.matrix_rank(J) < surface.arc_count - 1:
            raise GeometryError(f"normalized width Jacobian is singular at t={t}")
        eta_w = J @ (half ** 2 * H) @ J.T
        dev = float(np.max(np.abs(2.0 * eta_w - B)))
        mask = B != 0
        sign_match = bool(np.all(np.sign(eta_w[mask]) == np.sign(B[mask])))
        rows.append(LimitRow(t, dev, sign_match))
    return rows


# ---------------------------------------------------------------------------
# Decorated surfaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class DecoratedSurface:
    surface: Surface
    lam: tuple

    def __post_init__(self):
        lam = tuple(float(x) for x in self.lam)
        if len(lam) != self.surface.arc_count:
            raise ValueError(f"expected {self.surface.arc_count} lambda-lengths, got {len(lam)}")
        if not all(x > 0 and math.isfinite(x) for x in lam):
            raise ValueError("lambda-lengths must be positive and finite")
        object.__setattr__(self, "lam", lam)

    @classmethod
    def from_reduced(cls, surface: Surface, reduced) -> "DecoratedSurface":
        """From reduced lengths a~ = log(lambda^2 / 2)."""
        return cls(surface, tuple(np.sqrt(2.0 * np.exp(np.asarray(reduced, dtype=float)))))

    @property
    def reduced_lengths(self) -> np.ndarray:
        return np.log(np.square(self.lam) / 2.0)


def h_lengths(d: DecoratedSurface) -> list:
    """Per hexagon, h at each position: lambda_i / (lambda_j lambda_k)."""
    lam = d.lam
    out = []
    for h in d.surface.hexagons:
        li, lj, lk = (lam[x[0]] for x in h)
        out.append((li / (lj * lk), lj / (lk * li), lk / (li * lj)))
    return out


def decorated_geometry(d: DecoratedSurface) -> BoundaryGeometry:
    """Horocyclic boundary data.  The segment after a foot is the corner arc
    of the truncated triangle opposite the arc before it in the hexagon, of
    length 2 h."""
    hl = h_lengths(d)
    return assemble_boundary(d.surface, lambda t, k: 2.0 * hl[t][k])


def simplicial_coordinates(d: DecoratedSurface) -> tuple:
    """(per-side X, per-arc X):  X(side i) = (l_j^2 + l_k^2 - l_i^2) / (l_i l_j l_k)."""
    lam = d.lam
    per_side = {}
    for h in d.surface.hexagons:
        for pos in range(3):
            li, lj, lk = (lam[h[(pos + m) % 3][0]] for m in range(3))
            per_side[h[pos]] = (lj * lj + lk * lk - li * li) / (li * lj * lk)
    per_arc = np.array([per_side[(i, 1)] + per_side[(i, -1)]
                        for i in range(d.surface.arc_count)])
    return per_side, per_arc


def penner_form(surface: Surface) -> np.ndarray:
    """Omega_P in the d a~ basis: -1/2 of the per-hexagon cyclic pattern."""
    return -0.5 * kontsevich_bivector(surface)


def _linear_kernel(dist: float, p: float) -> float:
    return 1.0 - 2.0 * dist / p


def decorated_bivector(d: DecoratedSurface) -> np.ndarray:
    """{a~_i, a~_j} = 1/2 sum (1 - 2 d_C(y, y') / p_C), same pair rule as
    the Weil-Petersson bivector."""
    return pair_matrix(d.surface, decorated_geometry(d), _linear_kernel)


def _decorated_perimeters(surface: Surface, reduced) -> np.ndarray:
    return decorated_geometry(DecoratedSurface.from_reduced(surface, reduced)).perimeters


def duality_residuals(d: DecoratedSurface, rel_step: float = GRADIENT_STEP) -> np.ndarray:
    """Per arc: || Omega_P H~ e_a - (e_a + grad log p_+ + grad log p_-) ||_inf,
    where p_+, p_- are the components holding the two ends of the arc
    (the same one twice when both ends lie on it)."""
    surface = d.surface
    n = surface.arc_count
    at = d.reduced_lengths
    Ht = decorated_bivector(d)
    omega = penner_form(surface)
    logp = fd_jacobian(lambda x: np.log(_decorated_perimeters(surface, x)), at, rel_step)
    comp = surface.component_of()
    lhs = omega @ Ht
    out = np.zeros(n)
    for a in range(n):
        rhs = np.eye(n)[a] + logp[comp[(a, 1)]] + logp[comp[(a, -1)]]
        out[a] = np.max(np.abs(lhs[:, a] - rhs))
    return out


def duality_residual(d: DecoratedSurface, rel_step: float = GRADIENT_STEP) -> float:
    return float(np.max(duality_residuals(d, rel_step)))


__all__ = [
    "DecoratedSurface", "LimitRow", "decorated_bivector", "decorated_geometry",
    "duality_residual", "duality_residuals", "h_lengths", "kontsevich_bivector",
    "large_boundary_limit_study", "penner_form", "simplicial_coordinates",
]
