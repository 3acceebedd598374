"""Hyperbolic trigonometry and upper half-plane primitives.

Boundary points of the upper half-plane are plain floats, with ``math.inf``
standing for the single ideal point at infinity (``-math.inf`` is accepted
and means the same point).  Interior points are complex numbers with positive
imaginary part.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

INF = math.inf


class GeometryError(ValueError):
    """Raised on degenerate or out-of-domain geometric input."""


def is_infinite(x: float) -> bool:
    return math.isinf(x)


def _check_boundary(x, name: str = "point") -> float:
    x = float(x)
    if math.isnan(x):
        raise GeometryError(f"{name} is NaN")
    return x


# ---------------------------------------------------------------------------
# Cross-ratio
# ---------------------------------------------------------------------------

def cross_ratio(p: float, q: float, r: float, s: float) -> float:
    """(p, q, r, s) = (p - r)(q - s) / ((p - s)(q - r)).

    Factors containing the point at infinity are dropped, which is the
    continuous extension.  Coincident points raise GeometryError.
    """
    pts = [_check_boundary(v) for v in (p, q, r, s)]
    n_inf = sum(is_infinite(v) for v in pts)
    if n_inf > 1:
        raise GeometryError("at most one point may be at infinity")
    for i in range(4):
        for j in range(i + 1, 4):
            if not is_infinite(pts[i]) and pts[i] == pts[j]:
                raise GeometryError("cross-ratio needs four distinct points")
    p, q, r, s = pts

    def f(x, y):
        return 1.0 if is_infinite(x) or is_infinite(y) else x - y

    return f(p, r) * f(q, s) / (f(p, s) * f(q, r))


def distance_from_cross_ratio(cr: float) -> float:
    """Length h of the common perpendicular when cr = -sinh^2(h/2) <= 0.

    The labels must follow the cyclic order p < s < q < r on the circle at
    infinity, with the geodesics joining q, r and p, s."""
    if not cr <= 0:
        raise GeometryError(f"disjoint geodesics need a negative cross-ratio, got {cr}")
    return 2.0 * math.asinh(math.sqrt(-cr))


def angle_from_cross_ratio(cr: float) -> float:
    """Intersection angle eps with cos(eps) = 2 cr - 1, for 0 <= cr <= 1."""
    if not 0.0 <= cr <= 1.0:
        raise GeometryError(f"intersecting geodesics need 0 <= cr <= 1, got {cr}")
    return 2.0 * math.acos(math.sqrt(cr))


def cyclically_between(a: float, x: float, b: float) -> bool:
    """True when x lies in the open arc from a to b, moving in the positive
    direction of the real line closed up at infinity."""
    a, x, b = (INF if is_infinite(v) else v for v in (a, x, b))
    if x == a or x == b:
        return False
    if is_infinite(a):
        return not is_infinite(x) and (is_infinite(b) or x < b)
    if is_infinite(b):
        return not is_infinite(x) and x > a
    if is_infinite(x):
        return a > b
    if a < b:
        return a < x < b
    return x > a or x < b


# ---------------------------------------------------------------------------
# Moebius maps
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MoebiusMap:
    """z -> (a z + b) / (c z + d) with real coefficients and ad - bc > 0."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not self.a * self.d - self.b * self.c > 0:
            raise GeometryError("Moebius map must have positive determinant")

    @property
    def det(self) -> float:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        if isinstance(z, complex):
            return (self.a * z + self.b) / (self.c * z + self.d)
        z = float(z)
        if is_infinite(z):
            return INF if self.c == 0 else self.a / self.c
        den = self.c * z + self.d
        if den == 0:
            return INF
        return (self.a * z + self.b) / den

    def __matmul__(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(self.d, -self.b, -self.c, self.a)

    @classmethod
    def identity(cls) -> "MoebiusMap":
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def to_zero_infinity(cls, s1: float, s2: float) -> "MoebiusMap":
        """Orientation-preserving map with s1 -> 0 and s2 -> infinity."""
        s1, s2 = _check_boundary(s1), _check_boundary(s2)
        if is_infinite(s1) and is_infinite(s2) or s1 == s2:
            raise GeometryError("endpoints must be distinct")
        if is_infinite(s2):
            return cls(1.0, -s1, 0.0, 1.0)
        if is_infinite(s1):
            return cls(0.0, -1.0, 1.0, -s2)
        sign = 1.0 if s1 > s2 else -1.0
        return cls(sign, -sign * s1, 1.0, -s2)

    @classmethod
    def scaling(cls, k: float) -> "MoebiusMap":
        if not k > 0:
            raise GeometryError("scale factor must be positive")
        return cls(k, 0.0, 0.0, 1.0)


# ---------------------------------------------------------------------------
# Points and geodesics in the upper half-plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PlaneGeodesic:
    """Oriented geodesic from ``start`` to ``end`` (boundary points)."""

    start: float
    end: float

    def __post_init__(self):
        s, e = _check_boundary(self.start), _check_boundary(self.end)
        if (is_infinite(s) and is_infinite(e)) or s == e:
            raise GeometryError("geodesic endpoints must be distinct")

    def reversed(self) -> "PlaneGeodesic":
        return PlaneGeodesic(self.end, self.start)

    def standardizer(self) -> MoebiusMap:
        """Map sending this geodesic onto the upward imaginary axis."""
        return MoebiusMap.to_zero_infinity(self.start, self.end)

    def image(self, m: MoebiusMap) -> "PlaneGeodesic":
        return PlaneGeodesic(m(self.start), m(self.end))

    def separates(self, x: float, y: float) -> bool:
        return cyclically_between(self.start, x, self.end) != cyclically_between(
            self.start, y, self.end)


def _check_point(z) -> complex:
    z = complex(z)
    if not z.imag > 0:
        raise GeometryError(f"point {z} is not in the upper half-plane")
    return z


def point_distance(z, w) -> float:
    z, w = _check_point(z), _check_point(w)
    return 2.0 * math.asinh(abs(z - w) / (2.0 * math.sqrt(z.imag * w.imag)))


def direction_to(at, target) -> float:
    """Euclidean angle of the unit tangent at ``at`` pointing along the
    geodesic towards ``target`` (an interior or a boundary point)."""
    at = _check_point(at)
    if isinstance(target, complex):
        t = (target - at) / (target - at.conjugate())
    elif is_infinite(float(target)):
        t = complex(1.0, 0.0)
    else:
        x = float(target)
        t = (x - at) / (x - at.conjugate())
    return math.atan2(t.imag, t.real) + math.pi / 2


def ccw_angle(from_dir: float, to_dir: float) -> float:
    """Counterclockwise rotation from one direction to another, in [0, 2 pi)."""
    return (to_dir - from_dir) % (2.0 * math.pi)


def line_angle(from_dir: float, line_dir: float) -> float:
    """Counterclockwise angle in [0, pi) from a vector to an unoriented line."""
    return (line_dir - from_dir) % math.pi


def geodesic_through(z, w) -> PlaneGeodesic:
    """The geodesic through z and w, oriented from z towards w."""
    z, w = _check_point(z), _check_point(w)
    if z == w:
        raise GeometryError("points must be distinct")
    m = MoebiusMap(1.0 / z.imag, -z.real / z.imag, 0.0, 1.0)
    w1 = m(w)
    if abs(w1.real) < 1e-15 * max(1.0, abs(w1)):
        ends = (0.0, INF) if w1.imag > 1 else (INF, 0.0)
    else:
        c = (abs(w1) ** 2 - 1.0) / (2.0 * w1.real)
        rad = math.hypot(1.0, c)
        ends = (c - rad, c + rad) if w1.real > 0 else (c + rad, c - rad)
    mi = m.inverse()
    return PlaneGeodesic(mi(ends[0]), mi(ends[1]))


def geodesic_from(z, direction: float) -> PlaneGeodesic:
    """Geodesic through z with tangent angle ``direction`` (oriented along it)."""
    z = _check_point(z)
    # Move z to i, where the tangent angle is unchanged by z -> (z - x)/y.
    m = MoebiusMap(1.0 / z.imag, -z.real / z.imag, 0.0, 1.0)
    # The geodesic through i with tangent angle phi: rotate the imaginary
    # axis (tangent angle pi/2) by phi - pi/2 about i.
    theta = direction - math.pi / 2
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    rot = MoebiusMap(c, s, -s, c)
    g = PlaneGeodesic(0.0, INF).image(rot).image(m.inverse())
    return g


def foot_of_perpendicular(z, g: PlaneGeodesic) -> complex:
    m = g.standardizer()
    w = m(_check_point(z))
    return m.inverse()(complex(0.0, abs(w)))


def signed_position(g: PlaneGeodesic, base, z) -> float:
    """Signed distance from ``base`` to ``z`` along g (both on g), positive
    in the direction of g."""
    m = g.standardizer()
    return math.log(m(complex(z)).imag / m(complex(base)).imag)


def point_on(g: PlaneGeodesic, base, t: float) -> complex:
    """Point at signed distance t from ``base`` along g (base is projected)."""
    m = g.standardizer()
    y = abs(m(complex(base)))
    return m.inverse()(complex(0.0, y * math.exp(t)))


def geodesic_intersection(g1: PlaneGeodesic, g2: PlaneGeodesic):
    """Intersection point of two geodesics, or None if they are disjoint."""
    m = g1.standardizer()
    a, b = m(g2.start), m(g2.end)
    if is_infinite(a) or is_infinite(b) or not a * b < 0:
        return None
    return m.inverse()(complex(0.0, math.sqrt(-a * b)))


@dataclass(frozen=True)
class CommonPerpendicular:
    length: float
    foot1: complex
    foot2: complex


def common_perpendicular(g1: PlaneGeodesic, g2: PlaneGeodesic) -> CommonPerpendicular:
    """Common perpendicular of two disjoint, non-asymptotic geodesics."""
    m = g1.standardizer()
    a, b = m(g2.start), m(g2.end)
    if is_infinite(a) or is_infinite(b) or a == 0 or b == 0:
        raise GeometryError("geodesics share an ideal endpoint")
    if a * b < 0:
        raise GeometryError("geodesics intersect")
    if a < 0:
        flip = MoebiusMap(0.0, -1.0, 1.0, 0.0)
        m = flip @ m
        a, b = -1.0 / a, -1.0 / b
    a, b = min(a, b), max(a, b)
    rho = math.sqrt(a * b)
    x = 2.0 * a * b / (a + b)
    # rho - x and the length in closed form: far-apart lines have a ~ b,
    # where rho^2 - x^2 would cancel
    sa, sb = math.sqrt(a), math.sqrt(b)
    gap = rho * (sb - sa) ** 2 / (a + b)
    y = math.sqrt(gap * (rho + x))
    length = math.log((sb + sa) ** 2 / (b - a))
    f1, f2 = complex(0.0, rho), complex(x, y)
    mi = m.inverse()
    return CommonPerpendicular(length, mi(f1), mi(f2))


# ---------------------------------------------------------------------------
# Trigonometric laws
# ---------------------------------------------------------------------------

def _arccosh(x: float, what: str) -> float:
    if not x >= 1.0 - 1e-15:
        raise GeometryError(f"{what}: cosh value {x} < 1")
    return math.acosh(max(x, 1.0))


def _positive(*vals: float) -> None:
    for v in vals:
        if not (v > 0 and math.isfinite(v)):
            raise GeometryError(f"length must be positive and finite, got {v}")


def _angle(*vals: float) -> None:
    for v in vals:
        if not 0 < v < math.pi:
            raise GeometryError(f"angle must lie in (0, pi), got {v}")


def triangle_side(alpha: float, beta: float, gamma: float) -> float:
    """Side AB of a triangle with angles alpha at A, beta at B, gamma at C."""
    _angle(alpha, beta, gamma)
    if alpha + beta + gamma >= math.pi:
        raise GeometryError("angle sum of a hyperbolic triangle is below pi")
    x = (math.cos(alpha) * math.cos(beta) + math.cos(gamma)) / (
        math.sin(alpha) * math.sin(beta))
    return _arccosh(x, "triangle_side")


def triangle_angle(ab: float, ac: float, bc: float) -> float:
    """Angle at A of the triangle with the given side lengths."""
    _positive(ab, ac, bc)
    x = (math.cosh(ab) * math.cosh(ac) - math.cosh(bc)) / (math.sinh(ab) * math.sinh(ac))
    if not -1.0 <= x <= 1.0:
        raise GeometryError("sides violate the triangle inequality")
    return math.acos(x)


def triangle_sine_ratio(side: float, opposite_angle: float) -> float:
    """sinh(side) / sin(opposite angle), the same for all three pairs."""
    _positive(side)
    _angle(opposite_angle)
    return math.sinh(side) / math.sin(opposite_angle)


def lambert_angle(ab: float, bc: float) -> float:
    """Acute angle of a quadrilateral with three right angles, from the two
    sides AB, BC meeting at the non-right vertex's neighbours:
    sinh AB sinh BC = cos(gamma)."""
    _positive(ab, bc)
    x = math.sinh(ab) * math.sinh(bc)
    if x >= 1.0:
        raise GeometryError("sinh AB sinh BC must be below 1")
    return math.acos(x)


def lambert_side(ab: float, gamma: float) -> float:
    """Inverse of lambert_angle in the second side; gamma may exceed pi/2,
    in which case the returned length is negative (signed)."""
    _angle(gamma)
    return math.asinh(math.cos(gamma) / math.sinh(ab))


def quadrilateral_side(alpha: float, beta: float, cd: float) -> float:
    """Side AB of a quadrilateral ABCD with right angles at C and D."""
    _angle(alpha, beta)
    _positive(cd)
    x = (math.cos(alpha) * math.cos(beta) + math.cosh(cd)) / (
        math.sin(alpha) * math.sin(beta))
    return _arccosh(x, "quadrilateral_side")


def pentagon_side(ab: float, cd: float, gamma: float) -> float:
    """Side BC of a pentagon with four right angles, gamma opposite to BC."""
    _positive(ab, cd)
    _angle(gamma)
    return right_angled_side(ab, cd, math.cos(gamma))


def hexagon_side(a_opp: float, a_j: float, a_k: float) -> float:
    """Side of a right-angled hexagon opposite the side of length a_opp,
    given the alternate sides a_opp, a_j, a_k."""
    _positive(a_opp, a_j, a_k)
    return right_angled_side(a_j, a_k, math.cosh(a_opp))


def right_angled_side(ab: float, cd: float, c: float) -> float:
    """arccosh((cosh AB cosh CD + c) / (sinh AB sinh CD)); c is cos(gamma)
    for the pentagon and cosh(EF) for the hexagon.

    Written as 1 + (cosh(AB - CD) + c) / (sinh AB sinh CD) so that long
    sides, where the argument is close to 1, keep full precision."""
    _positive(ab, cd)
    x1 = (math.cosh(ab - cd) + c) / (math.sinh(ab) * math.sinh(cd))
    if not x1 >= -1e-15:
        raise GeometryError(f"cosh value {1.0 + x1} < 1")
    x1 = max(x1, 0.0)
    return math.log1p(x1 + math.sqrt(x1 * (x1 + 2.0)))


def triangle_relations(*, angles=None, sides=None) -> tuple:
    """Solve a triangle from its three angles or its three sides.

    ``angles=(alpha, beta, gamma)`` returns the sides (BC, CA, AB) opposite
    them; ``sides=(BC, CA, AB)`` returns the angles (alpha, beta, gamma)."""
    if (angles is None) == (sides is None):
        raise GeometryError("give exactly one of angles or sides")
    if angles is not None:
        al, be, ga = angles
        return triangle_side(be, ga, al), triangle_side(ga, al, be), triangle_side(al, be, ga)
    bc, ca, ab = sides
    return triangle_angle(ab, ca, bc), triangle_angle(bc, ab, ca), triangle_angle(ca, bc, ab)


def sine_law_residual(sides, angles) -> float:
    """Spread of sinh(side)/sin(opposite angle) over the three pairs."""
    r = [triangle_sine_ratio(s, a) for s, a in zip(sides, angles)]
    return (max(r) - min(r)) / max(r)


def quad_relations(mode: str, **params) -> float:
    """``three-right``: ab, bc -> gamma with sinh(AB) sinh(BC) = cos(gamma).
    ``two-right``: alpha, beta, cd -> AB for right angles at C and D."""
    if mode == "three-right":
        return lambert_angle(params["ab"], params["bc"])
    if mode == "two-right":
        return quadrilateral_side(params["alpha"], params["beta"], params["cd"])
    raise GeometryError(f"unknown quadrilateral mode {mode!r}")


def s_length(a: float) -> float:
    return math.cosh(a / 2.0)


def half_width(s_i: float, s_j: float, s_k: float) -> float:
    """Signed half-width attached to arc i inside one hexagon."""
    if min(s_i, s_j, s_k) <= 1.0:
        raise GeometryError("s-lengths must exceed 1")
    x = (s_j * s_j + s_k * s_k - s_i * s_i) / (2.0 * s_j * s_k * math.sqrt(s_i * s_i - 1.0))
    return math.asinh(x)


def spine_angle(s_i: float, s_j: float, s_k: float) -> float:
    """Angle gamma_i at the spine vertex facing arc i."""
    if min(s_i, s_j, s_k) <= 1.0:
        raise GeometryError("s-lengths must exceed 1")
    x = (s_j * s_j + s_k * s_k - s_i * s_i) / (2.0 * s_j * s_k)
    if not -1.0 <= x <= 1.0:
        raise GeometryError("s-lengths do not form a spine vertex")
    return math.acos(x)
