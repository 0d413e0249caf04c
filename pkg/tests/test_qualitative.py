import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynspatial.geometry import Rect, footprint, gen_scene, iter_pairs, scene_from_dict
from dynspatial.intervals import AllenRel, allen_relation
from dynspatial.qualitative import (DEPTH, HORIZONTAL, AbstractionParams, MotionRel, Rcc5Rel,
                                    dump_fluents, extract_fluents, fluents_at, motion_at,
                                    orientation_at, rcc5_at)


def R(*v):
    return Rect(*map(float, v))


@pytest.mark.parametrize("a, b, rel", [
    (R(0, 0, 1, 1), R(5, 5, 6, 6), Rcc5Rel.DC),
    (R(0, 0, 2, 2), R(0, 0, 2, 2), Rcc5Rel.EQ),
    (R(1, 1, 2, 2), R(0, 0, 5, 5), Rcc5Rel.PP),
    (R(0, 0, 5, 5), R(1, 1, 2, 2), Rcc5Rel.PPi),
    (R(0, 0, 2, 2), R(1, 1, 3, 3), Rcc5Rel.PO),
    (R(0, 0, 1, 1), R(1, 0, 2, 1), Rcc5Rel.DC),        # touching edges
    (R(0, 0, 1, 1), R(0.995, 0, 2, 1), Rcc5Rel.DC),    # overlap within eps
])
def test_rcc5_examples(a, b, rel):
    assert rcc5_at(a, b) is rel


def test_orientation_examples():
    assert orientation_at(R(0, 0, 1, 1), R(3, 0, 4, 1)).horizontal == "left"
    same = orientation_at(R(0, 0, 2, 2), R(0, 0, 2, 2))
    assert (same.horizontal, same.depth) == ("horizontally_equal", "distance_equal")
    assert orientation_at(R(2, 0, 3, 1), R(0, 0, 10, 1)).horizontal == "along_left"
    assert orientation_at(R(0, 0, 1, 1), R(0, 3, 1, 4)).depth == "closer"


def _along_oracle(alo, ahi, blo, bhi, eps):
    """Endpoint predicate written out case by case."""
    inside = (blo - eps <= alo and ahi <= bhi + eps) or (alo - eps <= blo and bhi <= ahi + eps)
    if not inside:
        return None
    ca, cb = (alo + ahi) / 2, (blo + bhi) / 2
    if abs(ca - cb) <= eps:
        return 3
    return 2 if ca < cb else 5


lattice = st.integers(0, 20)

# low<->high, overlaps_low<->overlaps_high, along_low<->along_high, equal<->equal
_CONVERSE_AXIS = {0: 6, 6: 0, 1: 4, 4: 1, 2: 5, 5: 2, 3: 3}


@st.composite
def lattice_rects(draw):
    x0, x1 = sorted(draw(st.lists(lattice, min_size=2, max_size=2, unique=True)))
    y0, y1 = sorted(draw(st.lists(lattice, min_size=2, max_size=2, unique=True)))
    return R(x0 * 0.25, y0 * 0.25, x1 * 0.25, y1 * 0.25)


@settings(max_examples=300)
@given(lattice_rects(), lattice_rects())
def test_converse_coherence(a, b):
    ab, ba = rcc5_at(a, b), rcc5_at(b, a)
    assert (ab is Rcc5Rel.PP) == (ba is Rcc5Rel.PPi)
    if ab in (Rcc5Rel.DC, Rcc5Rel.PO, Rcc5Rel.EQ):
        assert ba is ab
    oab, oba = orientation_at(a, b), orientation_at(b, a)
    assert HORIZONTAL.index(oab.horizontal) == _CONVERSE_AXIS[HORIZONTAL.index(oba.horizontal)]
    assert DEPTH.index(oab.depth) == _CONVERSE_AXIS[DEPTH.index(oba.depth)]
    along = _along_oracle(a.x_min, a.x_max, b.x_min, b.x_max, 0.01)
    if along is not None:
        assert HORIZONTAL.index(oab.horizontal) == along


def test_motion_examples():
    script = {"statics": [{"id": "reg-1", "kind": "region", "color": "red", "rect": [9, -1, 11, 1]}],
              "blocks": [{"id": "obj-1", "color": "blue", "size": [0.5, 0.5],
                          "waypoints": [[0, 0], [8, 0]], "ticks": [40]},
                         {"id": "obj-2", "color": "red", "size": [0.5, 0.5],
                          "waypoints": [[0, 5], [0, 5]], "ticks": [40]}]}
    scene = gen_scene(script)
    p = AbstractionParams()
    assert motion_at(scene, "obj-1", "reg-1", 20, p) is MotionRel.APPROACHING
    assert motion_at(scene, "reg-1", "obj-1", 20, p) is MotionRel.APPROACHING
    assert motion_at(scene, "obj-2", "reg-1", 20, p) is MotionRel.STEADY
    assert motion_at(scene, "obj-1", "reg-1", 1, p) is MotionRel.STEADY   # window leaves the scene


def test_params_validation():
    with pytest.raises(ValueError):
        AbstractionParams(motion_window=0)
    with pytest.raises(ValueError):
        AbstractionParams(eps_geo=-1)
    with pytest.raises(ValueError):
        AbstractionParams.from_dict({"window": 3})
    p = AbstractionParams.from_dict({"v_eps": 0.05})
    assert AbstractionParams.from_dict(p.to_dict()) == p


def test_static_scene_fluents():
    scene = gen_scene({"statics": [{"id": "reg-1", "kind": "region", "color": "red", "rect": [0, 0, 1, 1]}],
                       "blocks": [{"id": "obj-1", "color": "blue", "size": [0.5, 0.5],
                                   "waypoints": [[3, 3], [3, 3]], "ticks": [20]}]})
    fluents = extract_fluents(scene)
    assert len(fluents) == 4
    for f in fluents:
        assert (f.interval.start, f.interval.end) == (0, 20)
    assert [f.relation for f in fluents if f.family == "motion"] == ["steady"]


def test_canonical_topology_sequence(canonical):
    topo = [f for f in extract_fluents(canonical)
            if f.args == ("obj-12", "reg-38") and f.family == "topology"]
    assert [f.relation for f in topo] == ["DC", "PO", "PP", "PO", "DC"]
    for f, g in zip(topo, topo[1:]):
        assert allen_relation(f.interval, g.interval) is AllenRel.MEETS


def test_extraction_deterministic(canonical):
    assert dump_fluents(extract_fluents(canonical)) == dump_fluents(extract_fluents(canonical))


def test_fluents_agree_with_per_tick_classifiers():
    scene = gen_scene(__import__("dynspatial.scenarios", fromlist=["x"]).canonical_script(), 0.03, seed=2)
    params = AbstractionParams()
    fluents = extract_fluents(scene, params)
    for t in range(0, scene.n_ticks, 7):
        holding = fluents_at(fluents, t)
        for a, b in iter_pairs(scene):
            here = {f.family: f.relation for f in holding if f.args == (a, b)}
            assert len([f for f in holding if f.args == (a, b)]) == 4
            ra, rb = footprint(scene, a, t), footprint(scene, b, t)
            assert here["topology"] == rcc5_at(ra, rb).value
            o = orientation_at(ra, rb)
            assert (here["horizontal"], here["depth"]) == (o.horizontal, o.depth)
            assert here["motion"] == motion_at(scene, a, b, t, params).value


def test_fluents_maximal(canonical):
    fluents = extract_fluents(gen_scene(
        __import__("dynspatial.scenarios", fromlist=["x"]).canonical_script(), 0.05, seed=9))
    groups = {}
    for f in fluents:
        groups.setdefault((f.args, f.family), []).append(f)
    for runs in groups.values():
        for f, g in zip(runs, runs[1:]):
            assert allen_relation(f.interval, g.interval) is AllenRel.MEETS
            assert f.relation != g.relation


def test_approach_covers_first_contact():
    script = {"statics": [{"id": "reg-1", "kind": "region", "color": "red", "rect": [5, -1, 7, 1]}],
              "blocks": [{"id": "obj-1", "color": "blue", "size": [0.5, 0.5],
                          "waypoints": [[0, 0], [6, 0]], "ticks": [60]}]}
    fluents = extract_fluents(gen_scene(script))
    topo = [f for f in fluents if f.family == "topology"]
    contact = topo[1].interval.start
    assert topo[0].relation == "DC" and topo[1].relation == "PO"
    assert any(f.relation == "approaching" and contact in f.interval
               for f in fluents if f.family == "motion")
