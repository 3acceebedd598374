"""Combinatorial bordered surfaces glued from right-angled hexagons.

A surface is a list of hexagons.  Each hexagon lists, in its counterclockwise
order, the three oriented arcs running along its arc sides.  An oriented arc
is a pair ``(arc, dir)`` with ``dir`` in ``{+1, -1}``; every arc occurs once
with each direction.  The boundary sides of a hexagon alternate with the arc
sides, so the side between ``x`` and the next arc in the hexagon lies on a
boundary component.

The foot of an oriented arc is its head endpoint.  Walking along a boundary
component in its positive direction, the foot following ``foot(x)`` is
``foot(reverse(next_in_hexagon(x)))``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

OrientedArc = tuple  # (arc_id, +1 | -1)

_DIRS = {"+": 1, "-": -1}
_DIR_STR = {1: "+", -1: "-"}


class SurfaceError(ValueError):
    """Raised on malformed or invalid surface descriptions."""


def reverse(x: OrientedArc) -> OrientedArc:
    return (x[0], -x[1])


def fmt(x: OrientedArc) -> str:
    return f"{x[0]}{_DIR_STR[x[1]]}"


@dataclass(frozen=True)
class Surface:
    name: str
    hexagons: tuple  # tuple of 3-tuples of oriented arcs

    @classmethod
    def from_hexagons(cls, hexagons, name: str = "surface") -> "Surface":
        hexes = []
        for h in hexagons:
            h = tuple(h)
            if len(h) != 3:
                raise SurfaceError(f"hexagon {h!r} must have exactly three arcs")
            sides = []
            for x in h:
                arc, d = x
                if isinstance(d, str):
                    if d not in _DIRS:
                        raise SurfaceError(f"direction must be '+' or '-', got {d!r}")
                    d = _DIRS[d]
                if d not in (1, -1) or isinstance(arc, bool) or not isinstance(arc, int):
                    raise SurfaceError(f"bad oriented arc {x!r}")
                sides.append((arc, d))
            hexes.append(tuple(sides))
        return cls(name, tuple(hexes))

    # -- basic counts ------------------------------------------------------

    @property
    def hexagon_count(self) -> int:
        return len(self.hexagons)

    @property
    def arc_count(self) -> int:
        return 3 * len(self.hexagons) // 2

    # -- lookups -----------------------------------------------------------

    def locate(self, x: OrientedArc) -> tuple:
        """(hexagon index, position) of an oriented arc."""
        return self._index()[x]

    def _index(self) -> dict:
        idx = getattr(self, "_idx_cache", None)
        if idx is None:
            idx = {}
            for t, h in enumerate(self.hexagons):
                for pos, x in enumerate(h):
                    idx[x] = (t, pos)
            object.__setattr__(self, "_idx_cache", idx)
        return idx

    def next_in_hexagon(self, x: OrientedArc) -> OrientedArc:
        t, pos = self.locate(x)
        return self.hexagons[t][(pos + 1) % 3]

    def prev_in_hexagon(self, x: OrientedArc) -> OrientedArc:
        t, pos = self.locate(x)
        return self.hexagons[t][(pos + 2) % 3]

    def successor(self, x: OrientedArc) -> OrientedArc:
        """Next foot along the boundary, identified by its oriented arc."""
        return reverse(self.next_in_hexagon(x))

    def oriented_arcs(self) -> list:
        return [x for h in self.hexagons for x in h]

    # -- invariants ----------------------------------------------------------

    def validate(self) -> "Surface":
        if not self.hexagons:
            raise SurfaceError("surface has no hexagons")
        if len(self.hexagons) % 2:
            raise SurfaceError(f"hexagon count {len(self.hexagons)} is odd")
        seen: dict = {}
        for t, h in enumerate(self.hexagons):
            for x in h:
                if x in seen:
                    raise SurfaceError(
                        f"oriented arc {fmt(x)} is used twice (hexagons {seen[x]} and {t})")
                seen[x] = t
        arcs = sorted({x[0] for x in seen})
        n = self.arc_count
        missing = [a for a in range(n) if a not in arcs]
        if missing:
            raise SurfaceError(f"arc ids must be 0..{n - 1}; missing arc id {missing[0]}")
        extra = [a for a in arcs if not 0 <= a < n]
        if extra:
            raise SurfaceError(f"arc id {extra[0]} out of range 0..{n - 1}")
        for a in range(n):
            for d in (1, -1):
                if (a, d) not in seen:
                    raise SurfaceError(f"arc {a} lacks direction {_DIR_STR[d]}")
        if len(self._components()) != 1:
            raise SurfaceError("surface is not connected")
        g, nb = self.genus_and_boundary()
        if g < 0 or nb < 1 or 6 * g - 6 + 3 * nb != n:
            raise SurfaceError(f"inconsistent topology: genus {g}, {nb} boundary components")
        return self

    def _components(self) -> list:
        parent = list(range(len(self.hexagons)))

        def find(i):
            while parent[i] != i:
                parent[i] = parent[parent[i]]
                i = parent[i]
            return i

        for t, h in enumerate(self.hexagons):
            for x in h:
                u = self._index().get(reverse(x))
                if u is not None:
                    parent[find(t)] = find(u[0])
        return sorted({find(i) for i in range(len(self.hexagons))})

    def boundary_cycles(self) -> list:
        """Boundary components as lists of feet (oriented arcs) in positive
        cyclic order.  Each cycle starts at its smallest foot."""
        remaining = set(self.oriented_arcs())
        cycles = []
        for start in sorted(self.oriented_arcs(), key=_sort_key):
            if start not in remaining:
                continue
            cyc = [start]
            remaining.discard(start)
            x = self.successor(start)
            while x != start:
                cyc.append(x)
                remaining.discard(x)
                x = self.successor(x)
            cycles.append(cyc)
        return cycles

    def genus_and_boundary(self) -> tuple:
        nb = len(self.boundary_cycles())
        chi = -len(self.hexagons) // 2
        g2 = 2 - nb - chi
        if g2 % 2:
            raise SurfaceError("odd Euler characteristic defect")
        return g2 // 2, nb

    def component_of(self) -> dict:
        """Map foot -> boundary component index."""
        out = {}
        for c, cyc in enumerate(self.boundary_cycles()):
            for x in cyc:
                out[x] = c
        return out

    # -- serialization ---------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "hexagons": [[{"arc": a, "dir": _DIR_STR[d]} for a, d in h] for h in self.hexagons],
        }

    @classmethod
    def from_dict(cls, data) -> "Surface":
        if not isinstance(data, dict):
            raise SurfaceError("surface document must be an object")
        unknown = set(data) - {"name", "hexagons"}
        if unknown:
            raise SurfaceError(f"unknown field(s): {', '.join(sorted(unknown))}")
        if "hexagons" not in data:
            raise SurfaceError("missing field 'hexagons'")
        name = data.get("name", "surface")
        if not isinstance(name, str):
            raise SurfaceError("field 'name' must be a string")
        hexes = []
        for h in data["hexagons"]:
            if not isinstance(h, list):
                raise SurfaceError("each hexagon must be a list")
            sides = []
            for x in h:
                if not isinstance(x, dict) or set(x) != {"arc", "dir"}:
                    raise SurfaceError(f"oriented arc must have exactly 'arc' and 'dir': {x!r}")
                sides.append((x["arc"], x["dir"]))
            hexes.append(sides)
        return cls.from_hexagons(hexes, name=name)


def _sort_key(x: OrientedArc):
    return (x[0], -x[1])


def load_surface(path) -> Surface:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as exc:
        raise SurfaceError(f"surface file is not UTF-8: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SurfaceError(f"surface file is not valid JSON: {exc}") from exc
    return Surface.from_dict(data).validate()


def dump_surface(surface: Surface, path) -> None:
    Path(path).write_text(json.dumps(surface.to_dict(), indent=2) + "\n", encoding="utf-8")


def bundled_surface(name: str) -> Surface:
    """Load one of the example surfaces shipped with the package."""
    from importlib import resources

    fname = f"{name}.json"
    ref = resources.files("wparc") / "data" / fname
    if not ref.is_file():
        raise SurfaceError(f"no bundled surface named {name!r}")
    return Surface.from_dict(json.loads(ref.read_text(encoding="utf-8"))).validate()


def one_holed_torus() -> Surface:
    return Surface.from_hexagons(
        [[(0, 1), (1, 1), (2, 1)], [(0, -1), (1, -1), (2, -1)]], name="one_holed_torus")


def pair_of_pants() -> Surface:
    return Surface.from_hexagons(
        [[(0, 1), (1, 1), (2, 1)], [(0, -1), (2, -1), (1, -1)]], name="pair_of_pants")


# ---------------------------------------------------------------------------
# Flips and canonical form
# ---------------------------------------------------------------------------

def flip_combinatorial(surface: Surface, arc: int) -> Surface:
    """Replace ``arc`` by the other diagonal of the octagon formed by its two
    hexagons.  The new arc keeps the id of the old one."""
    if not 0 <= arc < surface.arc_count:
        raise SurfaceError(f"arc {arc} out of range")
    t1, p1 = surface.locate((arc, 1))
    t2, p2 = surface.locate((arc, -1))
    if t1 == t2:
        raise SurfaceError(f"arc {arc} bounds the same hexagon on both sides; cannot flip")
    h1, h2 = surface.hexagons[t1], surface.hexagons[t2]
    x, y = h1[(p1 + 1) % 3], h1[(p1 + 2) % 3]
    u, v = h2[(p2 + 1) % 3], h2[(p2 + 2) % 3]
    hexes = list(surface.hexagons)
    hexes[t1] = ((arc, 1), y, u)
    hexes[t2] = ((arc, -1), v, x)
    out = Surface(surface.name, tuple(hexes))
    return out.validate()


def flip_octagon(surface: Surface, arc: int) -> tuple:
    """The four arcs around the octagon of ``arc`` in counterclockwise order
    (x, y, u, v): hexagons (arc, x, y) and (reverse(arc), u, v)."""
    t1, p1 = surface.locate((arc, 1))
    t2, p2 = surface.locate((arc, -1))
    h1, h2 = surface.hexagons[t1], surface.hexagons[t2]
    return h1[(p1 + 1) % 3], h1[(p1 + 2) % 3], h2[(p2 + 1) % 3], h2[(p2 + 2) % 3]


def canonical_form(surface: Surface) -> tuple:
    """Relabeling-invariant code: minimum over all starting sides of the
    breadth-first relabeling (arcs numbered by discovery, directions chosen so
    an arc is '+' where first met, hexagons rotated to start at the entry
    side)."""
    best = None
    for start in surface.oriented_arcs():
        code = _relabel_from(surface, start)
        if best is None or code < best:
            best = code
    return best


def _relabel_from(surface: Surface, start: OrientedArc) -> tuple:
    arc_map: dict = {}
    sign_map: dict = {}
    queue = [start]
    visited_hex = set()
    code = []
    while queue:
        entry = queue.pop(0)
        t, pos = surface.locate(entry)
        if t in visited_hex:
            continue
        visited_hex.add(t)
        h = surface.hexagons[t]
        row = []
        for k in range(3):
            x = h[(pos + k) % 3]
            if x[0] not in arc_map:
                arc_map[x[0]] = len(arc_map)
                sign_map[x[0]] = x[1]
            row.append((arc_map[x[0]], x[1] * sign_map[x[0]]))
            queue.append(reverse(x))
        code.append(tuple(row))
    return tuple(code)


def isomorphic(s1: Surface, s2: Surface) -> bool:
    return s1.arc_count == s2.arc_count and canonical_form(s1) == canonical_form(s2)
