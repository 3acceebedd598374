"""Fenchel-Nielsen twist derivatives of the distance between two geodesics.

Conventions (fixed by the numeric flow oracle, see ``numeric_twist_flow_derivative``):

* a lift of the twisting geodesic is written ``(s1, s2)``, oriented from s1 to
  s2; its left side is the open arc from s2 to s1 in the positive cyclic
  order of the real line.  A right twist slides the left side forward: in
  the chart s1 -> 0, s2 -> infinity it multiplies the negative half-line by
  e^t and fixes the positive one.
* standard position: the common perpendicular delta runs up the imaginary
  axis from y1 = i to y2 = i e^h; gamma1 = (p, s) = (-1, 1) is oriented
  towards s and gamma2 = (q, r) = (e^h, -e^h) towards r, so that both see
  delta on their left.  Then p < s < q < r cyclically and
  (p, q, r, s) = -sinh(h/2)^2.
* the angle nu at an intersection with gamma_i is measured counterclockwise
  from the positive direction of gamma_i to the twisting geodesic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import hyptrig as ht
from .hyptrig import INF, GeometryError, MoebiusMap, PlaneGeodesic

SIGMA = (2, 3, 0, 1)  # (13)(24), 0-based
TAU = (3, 2, 1, 0)    # (14)(23), 0-based


@dataclass(frozen=True)
class TwistConfiguration:
    """Four boundary points (p, q, r, s) and a lift (s1, s2) of the twisting
    geodesic."""

    z: tuple
    s1: float
    s2: float

    def __post_init__(self):
        pts = [float(v) for v in self.z] + [float(self.s1), float(self.s2)]
        if len(self.z) != 4:
            raise GeometryError("need exactly four points z")
        norm = [INF if math.isinf(v) else v for v in pts]
        if len(set(norm)) != 6:
            raise GeometryError("the six points must be pairwise distinct")

    @property
    def lift(self) -> PlaneGeodesic:
        return PlaneGeodesic(self.s1, self.s2)


def on_left(x: float, s1: float, s2: float) -> bool:
    """Indicator of the left side of the lift oriented s1 -> s2."""
    return ht.cyclically_between(s2, x, s1)


def cr_twist_derivative(c: TwistConfiguration, side: int = 1) -> float:
    """Derivative of (z1, z2, z3, z4) under a right twist about the lift:
    cr * sum_j chi_L(z_j) [(z_sigma(j), s1, s2, z_j) - (z_tau(j), s1, s2, z_j)].
    side=-1 twists the other side, which negates the result."""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    z = [float(v) for v in c.z]
    cr = ht.cross_ratio(*z)
    left = [on_left(v, c.s1, c.s2) for v in z]
    # twisting the right side instead differs by a global isometry, so the
    # sum over either side agrees up to sign; the smaller side cancels less
    sign = 1.0
    if sum(left) > 2:
        left = [not b for b in left]
        sign = -1.0
    total = 0.0
    for j in range(4):
        if left[j]:
            total += _cr_difference(z[SIGMA[j]], z[TAU[j]], c.s1, c.s2, z[j])
    return side * sign * cr * total


def _cr_difference(a, b, s1, s2, z) -> float:
    """(a, s1, s2, z) - (b, s1, s2, z), without cancellation for thin lifts."""
    if any(ht.is_infinite(v) for v in (a, b, s1, s2, z)):
        return ht.cross_ratio(a, s1, s2, z) - ht.cross_ratio(b, s1, s2, z)
    return (s1 - z) * (z - s2) * (b - a) / ((s1 - s2) * (a - z) * (b - z))


def flow_points(c: TwistConfiguration, t: float, side: int = 1) -> list:
    """Boundary limit of the twist flow at time t.  side=+1 moves the left
    side (right twist); side=-1 moves the right side (left twist)."""
    m = MoebiusMap.to_zero_infinity(c.s1, c.s2)
    mi = m.inverse()
    out = []
    for v in c.z:
        u = m(float(v))
        if math.isinf(u):
            out.append(float(v))
            continue
        if (u < 0 and side == 1) or (u > 0 and side == -1):
            u = u * math.exp(t)
        out.append(mi(u))
    return out


def numeric_twist_flow_derivative(c: TwistConfiguration, step: float = 1e-5,
                                  side: int = 1, method: str = "central") -> float:
    """Derivative in t of the cross-ratio of the flowed points, at t = 0.

    ``central`` is the usual central difference.  ``complex`` flows by the
    imaginary time i*step and reads the derivative off the imaginary part;
    nothing is subtracted, so the result is accurate to rounding (use a
    tiny step, e.g. 1e-30)."""
    if side not in (1, -1):
        raise ValueError("side must be +1 or -1")
    if method == "central":
        plus = ht.cross_ratio(*flow_points(c, step, side))
        minus = ht.cross_ratio(*flow_points(c, -step, side))
        return (plus - minus) / (2.0 * step)
    if method != "complex":
        raise ValueError(f"unknown method {method!r}")
    if any(ht.is_infinite(v) for v in (*c.z, c.s1, c.s2)):
        raise GeometryError("complex-step flow needs finite points")
    m = MoebiusMap.to_zero_infinity(c.s1, c.s2)
    mi = m.inverse()
    grow = complex(math.cos(step), math.sin(step))  # exp(i step)
    z = []
    for v in c.z:
        u = m(float(v))
        if (u < 0 and side == 1) or (u > 0 and side == -1):
            z.append(mi(complex(u) * grow))
        else:
            z.append(complex(float(v)))
    p, q, r, s_ = z
    return ((p - r) * (q - s_) / ((p - s_) * (q - r))).imag / step


# ---------------------------------------------------------------------------
# Per-lift closed forms (rates relative to the cross-ratio)
# ---------------------------------------------------------------------------

LIFT_CASES = ("right_k_nonneg", "right_k_neg", "general_sep_s", "general_sep_p",
              "homotopic", "distant")


def per_lift_contribution(case: str, h: float, d: float | None = None,
                          nu: float | None = None, nu1: float | None = None,
                          nu2: float | None = None, alpha: float | None = None) -> float:
    """d(cr)/d(tau) / cr for a single lift.

    ``d`` is the signed distance from y1 to the crossing
    point, measured towards the endpoint the lift cuts off (towards s in the
    *_sep_s and right_k_nonneg cases, towards p otherwise).  The homotopic
    case takes the angles nu1, nu2 at the crossings with gamma1 and gamma2."""
    if not h > 0:
        raise GeometryError("h must be positive")
    th = math.tanh(h / 2.0)
    if case == "right_k_nonneg":
        return math.exp(-d) / (2.0 * th)
    if case == "right_k_neg":
        return -math.exp(-d) / (2.0 * th)
    if case == "general_sep_s":
        return math.exp(-d) * math.sin(nu) / (2.0 * th)
    if case == "general_sep_p":
        return -math.exp(-d) * math.sin(nu) / (2.0 * th)
    if case == "homotopic":
        return 0.5 * (math.cos(nu1) + math.cos(nu2))
    if case == "distant":
        return math.cos(alpha) / th
    raise ValueError(f"invalid case tag {case!r}; expected one of {LIFT_CASES}")


# ---------------------------------------------------------------------------
# Coefficients and scenarios
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IntersectionDatum:
    """One intersection x_i of the twisting geodesic with gamma_i."""

    target: int                    # 1 or 2
    nu: float
    d: float
    closed: bool = False
    p: float | None = None
    r_wind: int = 0
    homotopic_to_delta: bool = False

    def __post_init__(self):
        if self.target not in (1, 2):
            raise GeometryError("target must be 1 or 2")
        if not 0 < self.nu < math.pi:
            raise GeometryError("nu must lie in (0, pi)")
        if self.closed:
            if self.p is None or not self.p > 0:
                raise GeometryError("closed target needs a positive length p")
            if not self.homotopic_to_delta and not 0 <= self.d < self.p:
                raise GeometryError("closed target needs 0 <= d < p")
        elif self.p is not None:
            raise GeometryError("open target takes no length p")


@dataclass(frozen=True)
class DistantIntersection:
    alpha: float

    def __post_init__(self):
        if not 0 <= self.alpha < math.pi:
            raise GeometryError("alpha must lie in [0, pi)")


@dataclass(frozen=True)
class TwistScenario:
    h: float
    items: tuple = field(default_factory=tuple)
    distant: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if not self.h > 0:
            raise GeometryError("h must be positive")

    def to_dict(self) -> dict:
        return {
            "h": self.h,
            "items": [{"target": x.target, "nu": x.nu, "d": x.d, "closed": x.closed,
                       "p": x.p, "r_wind": x.r_wind,
                       "homotopic_to_delta": x.homotopic_to_delta} for x in self.items],
            "distant": [{"alpha": z.alpha} for z in self.distant],
        }

    @classmethod
    def from_dict(cls, data) -> "TwistScenario":
        if not isinstance(data, dict):
            raise GeometryError("scenario must be an object")
        unknown = set(data) - {"h", "items", "distant"}
        if unknown:
            raise GeometryError(f"unknown scenario field(s): {', '.join(sorted(unknown))}")
        if "h" not in data:
            raise GeometryError("scenario is missing 'h'")
        fields = {"target", "nu", "d", "closed", "p", "r_wind", "homotopic_to_delta"}
        items = []
        for n, x in enumerate(data.get("items", [])):
            if not isinstance(x, dict) or not {"target", "nu", "d"} <= set(x) <= fields:
                raise GeometryError(f"items[{n}]: need target, nu, d; allowed {sorted(fields)}")
            items.append(IntersectionDatum(**x))
        distant = []
        for n, z in enumerate(data.get("distant", [])):
            if not isinstance(z, dict) or set(z) != {"alpha"}:
                raise GeometryError(f"distant[{n}]: expected exactly 'alpha'")
            distant.append(DistantIntersection(z["alpha"]))
        return cls(float(data["h"]), tuple(items), tuple(distant))


def _resolve_zero(x: IntersectionDatum) -> tuple:
    """(sigma, d) after the rule for x_i = y_i: treat x_i as just after y_i
    when nu > pi/2 and just before it when nu < pi/2."""
    if x.d > 0:
        return 1, x.d
    if x.d < 0:
        return -1, x.d
    if x.nu == math.pi / 2:
        raise GeometryError("x_i = y_i with nu = pi/2 puts the twisting geodesic on delta")
    if x.nu > math.pi / 2:
        return 1, 0.0
    return -1, (x.p if x.closed and not x.homotopic_to_delta else 0.0)


def coefficient_c(x: IntersectionDatum, h: float) -> float:
    """Contribution c_i(x_i) of one intersection to the derivative of h."""
    sin_nu = math.sin(x.nu)
    if x.homotopic_to_delta:
        hom = 0.5 * math.tanh(h / 2.0) * math.cos(x.nu)
        if not x.closed:
            return hom
        return math.sinh(-x.d) / math.expm1(x.p) * sin_nu + hom
    sigma, d = _resolve_zero(x)
    if not x.closed:
        es = (-1 if x.r_wind != 0 else 1) * sigma
        return (es / 2.0) * math.exp(-es * d) * sin_nu
    p = x.p
    return math.sinh(p / 2.0 - d - x.r_wind * p) / (2.0 * math.sinh(p / 2.0)) * sin_nu


def twist_derivative_distance(s: TwistScenario) -> float:
    """c1 + c2 + c0 for a twisting geodesic in general position."""
    c = sum(coefficient_c(x, s.h) for x in s.items)
    return c + sum(math.cos(z.alpha) for z in s.distant)


def twist_derivative_right_angle(h: float, items) -> float:
    """The right-angle case: xi is orthogonal to gamma_1, gamma_2 and
    disjoint from delta.  ``items`` holds (d, p) pairs, p None when open."""
    if not h > 0:
        raise GeometryError("h must be positive")
    total = 0.0
    for d, p in items:
        if p is None:
            if d == 0:
                raise GeometryError("an open crossing at y_i would meet delta")
            sigma = 1 if d > 0 else -1
            total += (sigma / 2.0) * math.exp(-sigma * d)
        else:
            if not 0 <= d < p:
                raise GeometryError("closed crossing needs 0 <= d < p")
            total += math.sinh(p / 2.0 - d) / (2.0 * math.sinh(p / 2.0))
    return total


def geometric_series_sum(p: float, d: float, terms: int = 30) -> float:
    """Truncated lift sum  sum_{0<=k<terms} e^{-d-kp}/2 - sum_{-terms<=k<0} e^{d+kp}/2."""
    pos = sum(math.exp(-d - k * p) for k in range(terms)) / 2.0
    neg = sum(math.exp(d + k * p) for k in range(-terms, 0)) / 2.0
    return pos - neg


def closed_coefficient(p: float, d: float) -> float:
    return math.sinh(p / 2.0 - d) / (2.0 * math.sinh(p / 2.0))


# ---------------------------------------------------------------------------
# Standard-position plane constructions (oracles)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StandardPosition:
    h: float

    @property
    def E(self) -> float:
        return math.exp(self.h)

    @property
    def points(self) -> tuple:
        """(p, q, r, s)."""
        return (-1.0, self.E, -self.E, 1.0)

    @property
    def gamma1(self) -> PlaneGeodesic:
        return PlaneGeodesic(-1.0, 1.0)

    @property
    def gamma2(self) -> PlaneGeodesic:
        return PlaneGeodesic(self.E, -self.E)

    @property
    def foot1(self) -> complex:
        return 1j

    @property
    def foot2(self) -> complex:
        return complex(0.0, self.E)

    def cross_ratio(self) -> float:
        return ht.cross_ratio(*self.points)

    def crossing(self, target: int, d: float, nu: float) -> PlaneGeodesic:
        """Geodesic meeting gamma_target at signed distance d from its foot,
        at counterclockwise angle nu from gamma_target's direction."""
        g, y = (self.gamma1, self.foot1) if target == 1 else (self.gamma2, self.foot2)
        x = ht.point_on(g, y, d)
        return ht.geodesic_from(x, ht.direction_to(x, g.end) + nu)

    def distant(self, e: float, alpha: float) -> PlaneGeodesic:
        """Geodesic through the point of delta at signed distance e from its
        midpoint, obtained by rotating the direction towards y1 clockwise by
        alpha."""
        z = complex(0.0, math.exp(self.h / 2.0 + e))
        return ht.geodesic_from(z, -math.pi / 2 - alpha)

    def separated(self, lift: PlaneGeodesic) -> frozenset:
        """Names of the points cut off by the lift: the smaller side, or the
        side containing s for a two-two split."""
        names = ("p", "q", "r", "s")
        left = {n for n, v in zip(names, self.points)
                if ht.cyclically_between(lift.start, v, lift.end)}
        right = set(names) - left
        if len(left) != len(right):
            return frozenset(min(left, right, key=len))
        return frozenset(left if "s" in left else right)

    def angle_with(self, target: int, lift: PlaneGeodesic):
        """(signed distance, ccw angle nu) of the crossing with gamma_target,
        or None if they are disjoint."""
        g, y = (self.gamma1, self.foot1) if target == 1 else (self.gamma2, self.foot2)
        x = ht.geodesic_intersection(g, lift)
        if x is None:
            return None
        d = ht.signed_position(g, y, x)
        nu = ht.line_angle(ht.direction_to(x, g.end), ht.direction_to(x, lift.end))
        return d, nu

    def lift_rate(self, lift: PlaneGeodesic) -> float:
        """cr-relative twist rate of one lift, from the cross-ratio lemma."""
        c = TwistConfiguration(self.points, lift.start, lift.end)
        return cr_twist_derivative(c) / self.cross_ratio()


def translation_along(g: PlaneGeodesic, length: float) -> MoebiusMap:
    """Hyperbolic translation by ``length`` along g in its direction."""
    m = g.standardizer()
    return m.inverse() @ MoebiusMap.scaling(math.exp(length)) @ m


def _translates(lift: PlaneGeodesic, g: PlaneGeodesic, p: float, terms: int) -> list:
    """[(k, T^k lift)] for 0 < |k| <= terms, T the translation by p along g,
    stopping early once a translate is too thin to resolve.
    A single step is iterated because powers of it lose the determinant."""
    out = []
    for sgn in (1, -1):
        step = translation_along(g, sgn * p)
        cur = lift
        for k in range(1, terms + 1):
            nxt = cur.image(step)
            if abs(nxt.end - nxt.start) < 1e-12 * (1.0 + abs(nxt.start)):
                break  # contribution below roundoff; endpoints about to merge
            cur = nxt
            out.append((sgn * k, cur))
    return out


def _crosses(g1: PlaneGeodesic, g2: PlaneGeodesic) -> bool:
    return ht.geodesic_intersection(g1, g2) is not None


def plane_scenario(sp: StandardPosition, lift: PlaneGeodesic, p1: float | None = None,
                   p2: float | None = None, terms: int = 30) -> tuple:
    """Oracle for scenario evaluation on a plane configuration.

    ``lift`` is one lift of the twisting geodesic; p1 / p2 are the lengths
    of gamma1 / gamma2 when closed (None when open).  When the lift crosses a
    closed gamma, its translates along that gamma are lifts too (truncated at
    ``terms`` each way; the k-th contributes about exp(-k p)).  Configurations
    that no simple geodesic on a surface could produce raise GeometryError:
    translates meeting the lift, or translates picking up a second gamma.

    Returns (sum of per-lift lemma rates times dh/dcr, TwistScenario read off
    the geometry)."""
    th = math.tanh(sp.h / 2.0)
    cross = [sp.angle_with(1, lift), sp.angle_with(2, lift)]
    homotopic = cross[0] is not None and cross[1] is not None
    lifts = [lift]
    families = {}
    for target, (g, other, p) in enumerate(
            ((sp.gamma1, sp.gamma2, p1), (sp.gamma2, sp.gamma1, p2)), start=1):
        if p is None or cross[target - 1] is None:
            continue
        fam = _translates(lift, g, p, terms)
        for k, m in fam:
            if abs(k) == 1 and _crosses(m, lift):
                raise GeometryError("translates of the lift intersect: not simple")
            if _crosses(m, other):
                raise GeometryError("a translate crosses the other gamma")
        families[target] = fam
        lifts.extend(m for _, m in fam)
    if len(families) == 2:
        for _, m1 in families[1][:2]:
            for _, m2 in families[2][:2]:
                if _crosses(m1, m2):
                    raise GeometryError("translates of the lift intersect: not simple")
    total = sum(sp.lift_rate(g) for g in lifts) * th

    items, distant = [], []
    for target, (c, p) in enumerate(zip(cross, (p1, p2)), start=1):
        if c is None:
            continue
        d, nu = c
        if homotopic:
            items.append(IntersectionDatum(target, nu, d, p is not None, p, 0, True))
            continue
        away = frozenset("s" if target == 1 else "r")
        if p is None:
            forward = sp.separated(lift) == away
            r = 0 if forward == (d > 0) else 1
            items.append(IntersectionDatum(target, nu, d, False, None, r, False))
            continue
        k0 = math.floor(d / p)
        base = d - k0 * p
        # index (relative to the lift at d) of the first translate cutting off s
        found = sorted([(0, lift)] + families[target], key=lambda km: km[0])
        ks = [k for k, m in found if sp.separated(m) == away]
        if not ks:
            raise GeometryError("no translate cuts off the far endpoint")
        items.append(IntersectionDatum(target, nu, base, True, p, ks[0] + k0, False))
    if cross == [None, None]:
        z = ht.geodesic_intersection(lift, PlaneGeodesic(0.0, INF))
        if z is not None and 1.0 < z.imag < sp.E:
            # alpha: clockwise rotation from the direction towards y1
            down = ht.direction_to(z, 1j)
            alpha = (down - ht.direction_to(z, lift.end)) % math.pi
            distant.append(DistantIntersection(alpha))
    return total, TwistScenario(sp.h, tuple(items), tuple(distant))
