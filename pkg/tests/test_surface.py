import json

import pytest

from wparc import surface as sf
from wparc.surface import Surface, SurfaceError


def names(cycles):
    return [[sf.fmt(x) for x in c] for c in cycles]


def test_torus_topology(torus):
    assert torus.genus_and_boundary() == (1, 1)
    assert torus.arc_count == 3
    assert names(torus.boundary_cycles()) == [["0+", "1-", "2+", "0-", "1+", "2-"]]


def test_pants_topology(pants):
    assert pants.genus_and_boundary() == (0, 3)
    cycles = {frozenset(c) for c in names(pants.boundary_cycles())}
    assert cycles == {frozenset({"0+", "1-"}), frozenset({"1+", "2-"}), frozenset({"2+", "0-"})}


def test_arc_used_twice_forward():
    s = Surface.from_hexagons([[(0, 1), (1, 1), (2, 1)], [(0, 1), (1, -1), (2, -1)]])
    with pytest.raises(SurfaceError, match="0\\+ is used twice"):
        s.validate()


def test_component_of_covers_all_feet(pants):
    comp = pants.component_of()
    assert len(comp) == 6 and set(comp.values()) == {0, 1, 2}


def test_successor_walk_is_a_permutation(torus):
    feet = torus.oriented_arcs()
    assert sorted(torus.successor(x) for x in feet) == sorted(feet)


def test_round_trip_file(tmp_path, torus):
    path = tmp_path / "t.json"
    sf.dump_surface(torus, path)
    back = sf.load_surface(path)
    assert back.hexagons == torus.hexagons


def test_bundled_fixtures_match_builders(torus, pants):
    assert sf.bundled_surface("one_holed_torus").hexagons == torus.hexagons
    assert sf.bundled_surface("pair_of_pants").hexagons == pants.hexagons
    with pytest.raises(SurfaceError):
        sf.bundled_surface("klein_bottle")


@pytest.mark.parametrize("doc, msg", [
    ({"hexagons": [[{"arc": 0, "dir": "+"}, {"arc": 1, "dir": "+"}, {"arc": 2, "dir": "+"}],
                   [{"arc": 0, "dir": "-"}, {"arc": 1, "dir": "-"}, {"arc": 3, "dir": "-"}]]},
     "arc id 3 out of range"),
    ({"hexagons": [], "extra": 1}, "unknown field"),
    ({"name": "x"}, "missing field"),
    ({"hexagons": [[{"arc": 0, "dir": "?"}]]}, "three arcs"),
    ({"hexagons": [[{"arc": 0, "dir": "?"}, {"arc": 1, "dir": "+"}, {"arc": 2, "dir": "+"}]]},
     "direction"),
])
def test_schema_violations(tmp_path, doc, msg):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    with pytest.raises(SurfaceError, match=msg):
        sf.load_surface(path)


def test_arc_id_gap_names_missing_id(tmp_path):
    hexes = [[{"arc": 0, "dir": "+"}, {"arc": 2, "dir": "+"}, {"arc": 3, "dir": "+"}],
             [{"arc": 0, "dir": "-"}, {"arc": 2, "dir": "-"}, {"arc": 3, "dir": "-"}]]
    path = tmp_path / "gap.json"
    path.write_text(json.dumps({"hexagons": hexes}))
    with pytest.raises(SurfaceError, match="missing arc id 1"):
        sf.load_surface(path)


def test_invalid_json_reported(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(SurfaceError, match="not valid JSON"):
        sf.load_surface(path)


@pytest.mark.parametrize("arc", [0, 1, 2])
def test_flip_keeps_topology(torus, arc):
    f = sf.flip_combinatorial(torus, arc)
    assert f.genus_and_boundary() == (1, 1)
    assert sf.isomorphic(sf.flip_combinatorial(f, arc), torus)


def test_pants_flip_and_back(pants):
    f = sf.flip_combinatorial(pants, 0)
    assert f.genus_and_boundary() == (0, 3)
    assert sf.isomorphic(sf.flip_combinatorial(f, 0), pants)


def test_isomorphic_distinguishes_torus_and_pants(torus, pants):
    assert not sf.isomorphic(torus, pants)
    relabeled = Surface.from_hexagons([[(2, 1), (0, 1), (1, 1)], [(2, -1), (0, -1), (1, -1)]])
    assert sf.isomorphic(relabeled, torus)
