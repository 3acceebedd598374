"""Hyperbolic metrics on hexagon-glued surfaces: arc lengths, boundary
geometry, widths, and the geometric flip."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import hyptrig as ht
from .hyptrig import GeometryError, MoebiusMap, PlaneGeodesic
from .surface import Surface, flip_combinatorial

CONSISTENCY_TOL = 1e-9


def check_lengths(surface: Surface, a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.shape != (surface.arc_count,):
        raise ValueError(f"expected {surface.arc_count} arc lengths, got shape {a.shape}")
    if not np.all(np.isfinite(a)) or np.any(a <= 0):
        raise ValueError("arc lengths must be positive and finite")
    return a


# ---------------------------------------------------------------------------
# Boundary geometry
# ---------------------------------------------------------------------------

@dataclass
class BoundaryGeometry:
    """Feet of arcs on each boundary component, with positions measured from
    the first foot in the positive direction."""

    cycles: list          # list of lists of feet (oriented arcs)
    perimeters: np.ndarray
    position: dict        # foot -> (component, position)
    segment: dict         # foot -> length of the segment to the next foot

    def d(self, y, y2) -> float:
        """Distance along the common boundary from foot y to foot y2 in the
        positive direction, in [0, p_C)."""
        c1, x1 = self.position[y]
        c2, x2 = self.position[y2]
        if c1 != c2:
            raise GeometryError("feet lie on different boundary components")
        return (x2 - x1) % self.perimeters[c1]

    def walk(self, y, y2) -> float:
        """Like d, but a foot reaches itself after a full turn: (0, p_C]."""
        v = self.d(y, y2)
        return v if v > 0 else self.perimeters[self.position[y][0]]

    def component(self, y) -> int:
        return self.position[y][0]


def assemble_boundary(surface: Surface, segment_length) -> BoundaryGeometry:
    """Assemble boundary data from ``segment_length(t, k_arc_position)``,
    the length of the boundary side of hexagon t opposite its side at
    position k."""
    cycles = surface.boundary_cycles()
    position, segment = {}, {}
    perims = np.zeros(len(cycles))
    for c, cyc in enumerate(cycles):
        x = 0.0
        for y in cyc:
            position[y] = (c, x)
            t, pos = surface.locate(y)
            seg = segment_length(t, (pos + 2) % 3)
            segment[y] = seg
            x += seg
        perims[c] = x
    return BoundaryGeometry(cycles, perims, position, segment)


def hexagon_b_lengths(a_i: float, a_j: float, a_k: float) -> tuple:
    """(b_i, b_j, b_k): boundary sides opposite the arcs i, j, k."""
    return (ht.hexagon_side(a_i, a_j, a_k), ht.hexagon_side(a_j, a_k, a_i),
            ht.hexagon_side(a_k, a_i, a_j))


def boundary_geometry(surface: Surface, a) -> BoundaryGeometry:
    a = check_lengths(surface, a)
    b = []
    for h in surface.hexagons:
        ai, aj, ak = (a[x[0]] for x in h)
        b.append(hexagon_b_lengths(ai, aj, ak))
    return assemble_boundary(surface, lambda t, k: b[t][k])


def perimeters(surface: Surface, a) -> np.ndarray:
    return boundary_geometry(surface, a).perimeters


def s_lengths(a) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if np.any(a <= 0):
        raise ValueError("arc lengths must be positive")
    return np.cosh(a / 2.0)


@dataclass
class HexagonGeometry:
    """Per-hexagon data, indexed like ``surface.hexagons``: entry m of each
    triple refers to the side at position m."""

    b_lengths: list    # b opposite each side
    half_widths: list  # signed half-width of each side
    angles: list       # spine angle gamma at each side; nan if undefined
    cos_angles: list

    def realizable(self, t: int) -> bool:
        """Whether the spine vertex of hexagon t exists, i.e. the s-lengths
        satisfy the triangle inequality."""
        return all(abs(c) <= 1.0 for c in self.cos_angles[t])


def hexagon_geometry(surface: Surface, a) -> HexagonGeometry:
    """b-lengths, half-widths and spine angles of every hexagon.

    cos(gamma_i) = (s_j^2 + s_k^2 - s_i^2) / (2 s_j s_k) can leave [-1, 1]
    when one s-length exceeds the sum of the other two; gamma is then
    reported as nan."""
    a = check_lengths(surface, a)
    s = s_lengths(a)
    out = HexagonGeometry([], [], [], [])
    for h in surface.hexagons:
        ids = [x[0] for x in h]
        out.b_lengths.append(hexagon_b_lengths(*(a[i] for i in ids)))
        hw, gam, cos = [], [], []
        for pos in range(3):
            i, j, k = (ids[(pos + m) % 3] for m in range(3))
            hw.append(ht.half_width(s[i], s[j], s[k]))
            c = (s[j] ** 2 + s[k] ** 2 - s[i] ** 2) / (2.0 * s[j] * s[k])
            cos.append(c)
            gam.append(math.acos(c) if abs(c) <= 1.0 else math.nan)
        out.half_widths.append(tuple(hw))
        out.angles.append(tuple(gam))
        out.cos_angles.append(tuple(cos))
    return out


# ---------------------------------------------------------------------------
# Widths
# ---------------------------------------------------------------------------

def half_widths(surface: Surface, a) -> dict:
    """Signed half-width for every oriented arc (one per hexagon side)."""
    a = check_lengths(surface, a)
    s = np.cosh(a / 2.0)
    out = {}
    for h in surface.hexagons:
        for pos in range(3):
            i, j, k = (h[(pos + m) % 3][0] for m in range(3))
            out[h[pos]] = ht.half_width(s[i], s[j], s[k])
    return out


def half_widths_from_boundary(surface: Surface, geom: BoundaryGeometry) -> dict:
    """Half-widths from boundary distances:
    w(x) = (d(x, succ x) + d(prev x, succ prev x) - d(next x, succ next x)) / 2."""
    out = {}
    for h in surface.hexagons:
        for pos in range(3):
            x, nx, px = h[pos], h[(pos + 1) % 3], h[(pos + 2) % 3]
            d1 = geom.walk(x, surface.successor(x))
            d2 = geom.walk(px, surface.successor(px))
            d3 = geom.walk(nx, surface.successor(nx))
            out[x] = 0.5 * (d1 + d2 - d3)
    return out


def widths(surface: Surface, a, check: bool = True) -> np.ndarray:
    """Width of each arc: the sum of its two half-widths."""
    hw = half_widths(surface, a)
    w = np.array([hw[(i, 1)] + hw[(i, -1)] for i in range(surface.arc_count)])
    if check:
        hw2 = half_widths_from_boundary(surface, boundary_geometry(surface, a))
        w2 = np.array([hw2[(i, 1)] + hw2[(i, -1)] for i in range(surface.arc_count)])
        scale = max(1.0, float(np.max(np.abs(w))))
        if np.max(np.abs(w - w2)) > CONSISTENCY_TOL * scale:
            raise GeometryError("half-width formulas disagree; internal inconsistency")
    return w


def normalized_widths(surface: Surface, a) -> np.ndarray:
    """w / (sum of perimeters / 2), so that the entries sum to one."""
    w = widths(surface, a, check=False)
    return 2.0 * w / perimeters(surface, a).sum()


def fd_jacobian(f, x: np.ndarray, rel_step: float) -> np.ndarray:
    """Central finite-difference Jacobian with step rel_step * (1 + |x_j|)."""
    x = np.asarray(x, dtype=float)
    cols = []
    for j in range(len(x)):
        step = rel_step * (1.0 + abs(x[j]))
        xp, xm = x.copy(), x.copy()
        xp[j] += step
        xm[j] -= step
        cols.append((np.asarray(f(xp)) - np.asarray(f(xm))) / (2.0 * step))
    return np.stack(cols, axis=-1)


def invert_widths(surface: Surface, target, a0=None, tol: float = 1e-12,
                  max_iter: int = 100, fd_step: float = 1e-6) -> np.ndarray:
    """Arc lengths with the given widths, by damped Newton iteration with a
    finite-difference Jacobian."""
    target = np.asarray(target, dtype=float)
    n = surface.arc_count
    if target.shape != (n,):
        raise ValueError(f"expected {n} widths, got shape {target.shape}")
    a = np.full(n, math.acosh(2.0)) if a0 is None else check_lengths(surface, a0).copy()

    def resid(x):
        return widths(surface, x, check=False) - target

    r = resid(a)
    for _ in range(max_iter):
        norm = np.max(np.abs(r))
        if norm <= tol * max(1.0, np.max(np.abs(target))):
            return a
        jac = fd_jacobian(lambda x: widths(surface, x, check=False), a, fd_step)
        if not np.all(np.isfinite(jac)) or np.linalg.cond(jac) > 1e14:
            raise GeometryError("width Jacobian is singular")
        step = np.linalg.solve(jac, -r)
        lam = 1.0
        while lam > 1e-8:
            trial = a + lam * step
            if np.all(trial > 0):
                rt = resid(trial)
                if np.max(np.abs(rt)) < norm:
                    a, r = trial, rt
                    break
            lam *= 0.5
        else:
            raise GeometryError("Newton line search failed")
    raise GeometryError(f"width inversion did not converge in {max_iter} iterations")


# ---------------------------------------------------------------------------
# Hexagon development (independent construction in the upper half-plane)
# ---------------------------------------------------------------------------

class Frame:
    """Position and heading in the hyperbolic plane, stored as the isometry
    carrying (i, upward) to them."""

    def __init__(self, m: MoebiusMap | None = None):
        self.m = m or MoebiusMap.identity()

    @property
    def point(self) -> complex:
        return self.m(1j)

    def forward(self, length: float) -> "Frame":
        e = math.exp(length / 2.0)
        return Frame(self.m @ MoebiusMap(e, 0.0, 0.0, 1.0 / e))

    def turn(self, angle: float) -> "Frame":
        c, s = math.cos(angle / 2.0), math.sin(angle / 2.0)
        return Frame(self.m @ MoebiusMap(c, s, -s, c))

    def line_left_to_right(self) -> PlaneGeodesic:
        """Geodesic perpendicular to the heading, oriented to the right."""
        return PlaneGeodesic(-1.0, 1.0).image(self.m)

    def line_right_to_left(self) -> PlaneGeodesic:
        return PlaneGeodesic(1.0, -1.0).image(self.m)


@dataclass
class DevelopedHexagon:
    """Right-angled hexagon z_i y_i z_j y_j z_k y_k (counterclockwise).  Arc
    sides are z y; boundary lines are named by the opposite arc."""

    vertices: tuple        # (z_i, y_i, z_j, y_j, z_k, y_k)
    arc_lines: tuple       # oriented z -> y, for i, j, k
    boundary_lines: tuple  # lines opposite i, j, k, oriented along the hexagon
    side_lengths: tuple    # measured (a_i, b_k, a_j, b_i, a_k, b_j)
    angles: tuple          # interior angles at the six vertices

    def measured_b(self) -> tuple:
        _, bk, _, bi, _, bj = self.side_lengths
        return bi, bj, bk

    def spine(self) -> dict:
        """Spine vertex u, signed half-widths and angles gamma (measured).

        Raises GeometryError when the spine vertex does not exist (the
        s-lengths violate the triangle inequality)."""
        zi, yi, zj, yj, zk, yk = self.vertices
        ends = ((zi, yi), (zj, yj), (zk, yk))
        mids, bis = [], []
        for (z, y) in ends:
            g = ht.geodesic_through(z, y)
            m = ht.point_on(g, z, ht.point_distance(z, y) / 2.0)
            mids.append(m)
            bis.append(ht.geodesic_from(m, ht.direction_to(m, y) + math.pi / 2))
        u = ht.geodesic_intersection(bis[0], bis[1])
        if u is None:
            raise GeometryError("perpendicular bisectors do not meet")
        lam_i, lam_j, lam_k = self.boundary_lines
        # the boundary side after arc i lies on the line opposite k, etc.
        after = ((lam_k, yi), (lam_i, yj), (lam_j, yk))
        feet, hw = [], []
        for line, y in after:
            f = ht.foot_of_perpendicular(u, line)
            feet.append(f)
            hw.append(ht.signed_position(line, y, f))
        # gamma_i is the angle at u of the quadrilateral m_i y_i f_k u; when
        # the half-width is negative that quadrilateral is crossed and the
        # angle between the rays is pi - gamma_i.
        gam = []
        for m, f, w in zip(mids, feet, hw):
            x = abs(ht.direction_to(u, m) - ht.direction_to(u, f)) % (2 * math.pi)
            x = min(x, 2 * math.pi - x)
            gam.append(x if w >= 0 else math.pi - x)
        gam = tuple(gam)
        return {"u": u, "half_widths": tuple(hw), "gammas": tuple(gam), "mids": tuple(mids)}


def develop_hexagon(a_i: float, a_j: float, a_k: float) -> DevelopedHexagon:
    """Build the hexagon from the three arc lengths alone.

    The construction walks up a_i, turns left, walks an unknown b_k, turns
    left and walks a_j.  b_k is found by root finding so that the line
    reached is at distance a_k from the starting line, with the common
    perpendicular on the correct side.  No trigonometric formula is used."""
    for v in (a_i, a_j, a_k):
        if not (v > 0 and math.isfinite(v)):
            raise GeometryError("arc lengths must be positive")
    f0 = Frame()
    lam_j = f0.line_left_to_right()
    fyi = f0.forward(a_i)

    def build(b):
        fzj = fyi.turn(math.pi / 2).forward(b).turn(math.pi / 2)
        fyj = fzj.forward(a_j)
        return fzj, fyj, fyj.line_right_to_left()

    def F(b):
        _, fyj, lam_i = build(b)
        try:
            cp = ht.common_perpendicular(lam_i, lam_j)
        except GeometryError:
            return -a_k
        ahead = ht.signed_position(lam_i, fyj.point, cp.foot1) > 0
        behind = ht.signed_position(lam_j, 1j, cp.foot2) < 0
        if not (ahead and behind):
            return -a_k
        return cp.length - a_k

    hi = 1.0
    while F(hi) <= 0:
        hi *= 2.0
        if hi > 1e3:
            raise GeometryError("hexagon development failed to bracket")
    lo = hi
    while F(lo) > 0:
        lo /= 2.0
        if lo < 1e-300:
            raise GeometryError("hexagon development failed to bracket")
    bk = brentq(F, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
    fzj, fyj, lam_i = build(bk)
    cp = ht.common_perpendicular(lam_i, lam_j)
    zk, yk = cp.foot1, cp.foot2
    zi, yi, zj, yj = 1j, fyi.point, fzj.point, fyj.point
    lam_k = fyi.line_right_to_left()
    verts = (zi, yi, zj, yj, zk, yk)
    sides = tuple(ht.point_distance(verts[m], verts[(m + 1) % 6]) for m in range(6))
    angles = []
    for m in range(6):
        v, nxt, prv = verts[m], verts[(m + 1) % 6], verts[(m - 1) % 6]
        angles.append(ht.ccw_angle(ht.direction_to(v, nxt), ht.direction_to(v, prv)))
    arcs = (ht.geodesic_through(zi, yi), ht.geodesic_through(zj, yj),
            ht.geodesic_through(zk, yk))
    return DevelopedHexagon(verts, arcs, (lam_i, lam_j, lam_k), sides, tuple(angles))


# ---------------------------------------------------------------------------
# Geometric flip
# ---------------------------------------------------------------------------

def segment_isometry(p1: complex, q1: complex, p2: complex, q2: complex) -> MoebiusMap:
    """Orientation-preserving isometry taking p1 -> p2, q1 -> q2 (the two
    segments must have equal length)."""

    def normalizer(p, q):
        g = ht.geodesic_through(p, q)
        m = g.standardizer()
        return MoebiusMap.scaling(1.0 / m(p).imag) @ m

    return normalizer(p2, q2).inverse() @ normalizer(p1, q1)


def flipped_arc_length(surface: Surface, a, arc: int) -> float:
    """Length of the arc replacing ``arc`` after a flip, computed by gluing
    the two developed hexagons along ``arc`` and measuring the common
    perpendicular of the two boundary lines facing it."""
    a = check_lengths(surface, a)
    t1, p1 = surface.locate((arc, 1))
    t2, p2 = surface.locate((arc, -1))
    if t1 == t2:
        raise GeometryError(f"arc {arc} bounds one hexagon on both sides")

    def develop(t, pos):
        h = surface.hexagons[t]
        ids = [h[(pos + m) % 3][0] for m in range(3)]
        return develop_hexagon(*(a[i] for i in ids))

    h1, h2 = develop(t1, p1), develop(t2, p2)
    z1, y1 = h1.vertices[0], h1.vertices[1]
    z2, y2 = h2.vertices[0], h2.vertices[1]
    glue = segment_isometry(z2, y2, y1, z1)
    far1 = h1.boundary_lines[0]
    far2 = h2.boundary_lines[0].image(glue)
    return ht.common_perpendicular(far1, far2).length


def flip_length(surface: Surface, a, arc: int) -> np.ndarray:
    """Arc lengths after flipping ``arc`` (the new arc keeps its id)."""
    a = check_lengths(surface, a)
    a2 = a.copy()
    a2[arc] = flipped_arc_length(surface, a, arc)
    return a2


def flip(surface: Surface, a, arc: int) -> tuple:
    """Flip ``arc``: returns (new surface, new arc lengths)."""
    return flip_combinatorial(surface, arc), flip_length(surface, a, arc)


@dataclass
class SpineResult:
    surface: Surface
    lengths: np.ndarray
    widths: np.ndarray
    flips: list
    perimeter_drift: float


def spine_search(surface: Surface, a, max_iter: int = 200, tol: float = 1e-12,
                 drift_tol: float = 1e-8) -> SpineResult:
    """Flip the arc of most negative width (ties by arc id) until all widths
    are >= -tol.  The sorted boundary perimeters must not drift by more than
    drift_tol along the way."""
    a = check_lengths(surface, a)
    p0 = np.sort(perimeters(surface, a))
    flips, drift = [], 0.0
    cur, ca = surface, a
    for _ in range(max_iter + 1):
        w = widths(cur, ca)
        worst = int(np.argmin(w))
        if w[worst] >= -tol:
            return SpineResult(cur, ca, w, flips, drift)
        if len(flips) == max_iter:
            break
        cur, ca = flip(cur, ca, worst)
        flips.append(worst)
        drift = max(drift, float(np.max(np.abs(np.sort(perimeters(cur, ca)) - p0))))
        if drift > drift_tol:
            raise GeometryError(f"boundary lengths drifted by {drift:.3g} after flips {flips}")
    raise GeometryError(f"spine search hit the iteration cap ({max_iter}); flips: {flips}")


def find_spine_triangulation(surface: Surface, a, max_iter: int = 200) -> tuple:
    """(surface, lengths) of a triangulation with all widths nonnegative."""
    r = spine_search(surface, a, max_iter=max_iter)
    return r.surface, r.lengths


def pair_components(surface: Surface, arc: int) -> tuple:
    """Boundary components containing the two ends of an arc."""
    comp = surface.component_of()
    return comp[(arc, 1)], comp[(arc, -1)]


__all__ = [
    "BoundaryGeometry", "DevelopedHexagon", "HexagonGeometry", "SpineResult",
    "assemble_boundary", "boundary_geometry", "check_lengths", "develop_hexagon",
    "fd_jacobian", "find_spine_triangulation", "flip", "flip_length", "flipped_arc_length",
    "half_widths", "half_widths_from_boundary", "hexagon_b_lengths", "hexagon_geometry",
    "invert_widths", "normalized_widths", "pair_components", "perimeters", "s_lengths",
    "segment_isometry", "spine_search", "widths",
]
