"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line
in the terminal summary."""

import math
import time

import numpy as np

from dynspatial.events import describe_scene
from dynspatial.game import Agent, run_series
from dynspatial.geometry import Rect, gen_scene, iter_pairs, load_scene
from dynspatial.grammar import enumerate_fragment, parse, produce
from dynspatial.intervals import AllenRel, TickInterval, allen_relation
from dynspatial.qualitative import AbstractionParams, MotionRel, Rcc5Rel, extract_fluents, motion_at, rcc5_at
from dynspatial.scenarios import discriminable_pairs
from dynspatial.semantics.program import canonical_text, canonicalize, clause_program

from conftest import load_fixture

NARRATIVE = [
    ("moves", "obj-12", "left"), ("moves_across", "obj-12", "reg-38"), ("moves_into", "obj-12", "reg-38"),
    ("moves_into", "obj-12", "reg-37"), ("moves_out_of", "obj-12", "reg-38"), ("moves", "obj-12", "closer"),
    ("moves_out_of", "obj-12", "reg-37"), ("moves_into", "obj-12", "reg-36"),
]


def test_1_canonical_narrative(criterion):
    t0 = time.perf_counter()
    scene = load_scene(load_fixture("canonical.json"))
    atoms = describe_scene(scene)
    elapsed = time.perf_counter() - t0
    got = [(a.predicate, a.subject, a.reference) for a in atoms]

    fluents = extract_fluents(scene)
    allen_ok = True
    for a in atoms:
        if a.predicate in ("moves_into", "moves_out_of"):
            topo = [f for f in fluents if f.args == (a.subject, a.reference) and f.family == "topology"]
            k = next(i for i, f in enumerate(topo) if f.interval == a.interval)
            allen_ok &= allen_relation(topo[k - 1].interval, a.interval) is AllenRel.MEETS
            allen_ok &= allen_relation(a.interval, topo[k + 1].interval) is AllenRel.MEETS
        if a.predicate == "moves_across":
            entry = next(x for x in atoms if x.predicate == "moves_into" and x.reference == a.reference)
            exit_ = next(x for x in atoms if x.predicate == "moves_out_of" and x.reference == a.reference)
            allen_ok &= allen_relation(entry.interval, a.interval) is AllenRel.STARTS
            allen_ok &= allen_relation(exit_.interval, a.interval) is AllenRel.FINISHES
            allen_ok &= any(m.predicate == "moves" and m.interval.covers(a.interval) for m in atoms)
    ok = got == NARRATIVE and allen_ok and elapsed < 1.0
    criterion("1 canonical narrative", ok, f"{len(atoms)} atoms, allen={allen_ok}, {elapsed:.3f}s")
    assert got == NARRATIVE
    assert allen_ok
    assert elapsed < 1.0


def test_2_sentence_fidelity(criterion):
    produced = str(produce(clause_program("yellow", "block", "across", "red", "region"))).lower()
    parsed = parse("the green block moves across the red region")
    documented = canonicalize(clause_program("green", "block", "across", "red", "region"))
    ok = produced == "the yellow block moves across the red region" and parsed == documented
    criterion("2 sentence fidelity", ok, repr(produced))
    assert produced == "the yellow block moves across the red region"
    assert canonical_text(parsed) == canonical_text(documented)


def test_3_round_trip(criterion):
    t0 = time.perf_counter()
    programs = list(enumerate_fragment())
    passed = sum(canonical_text(parse(produce(p))) == canonical_text(p) for p in programs)
    elapsed = time.perf_counter() - t0
    ok = len(programs) == 45 and passed == 45 and elapsed < 5.0
    criterion("3 fragment round trip", ok, f"{passed}/{len(programs)}, {elapsed:.2f}s")
    assert len(programs) == 45
    assert passed == 45
    assert elapsed < 5.0


def _grid_rcc5(a: np.ndarray, b: np.ndarray, points: np.ndarray) -> list[Rcc5Rel]:
    """Point-membership classification on a dense sample grid."""
    x, y = points[:, 0], points[:, 1]

    def members(r):
        return ((x[None, :] > r[:, 0:1]) & (x[None, :] < r[:, 2:3])
                & (y[None, :] > r[:, 1:2]) & (y[None, :] < r[:, 3:4]))

    in_a, in_b = members(a), members(b)
    shared = (in_a & in_b).any(axis=1)
    a_only = (in_a & ~in_b).any(axis=1)
    b_only = (in_b & ~in_a).any(axis=1)
    out = []
    for s, ao, bo in zip(shared, a_only, b_only):
        if not ao and not bo:
            out.append(Rcc5Rel.EQ)
        elif not ao:
            out.append(Rcc5Rel.PP)
        elif not bo:
            out.append(Rcc5Rel.PPi)
        else:
            out.append(Rcc5Rel.PO if s else Rcc5Rel.DC)
    return out


def _lattice_rects(rng, n, steps=20, step=0.25):
    # corners on a 0.25 m lattice: any two coordinates coincide or differ by
    # far more than eps_geo, so no pair lies within eps of a class boundary
    xs = np.sort(rng.choice(steps + 1, size=(n, 2), replace=True), axis=1)
    ys = np.sort(rng.choice(steps + 1, size=(n, 2), replace=True), axis=1)
    keep = (xs[:, 0] < xs[:, 1]) & (ys[:, 0] < ys[:, 1])
    return np.stack([xs[:, 0], ys[:, 0], xs[:, 1], ys[:, 1]], axis=1)[keep] * step


def test_4_topology_oracle(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    a, b = _lattice_rects(rng, 16000), _lattice_rects(rng, 16000)
    n = min(len(a), len(b))
    # bias a third of the pairs toward containment and equality, which uniform draws rarely hit
    b[: n // 6] = a[: n // 6]
    inner = a[n // 6: n // 3].copy()
    b[n // 6: n // 3] = np.stack([inner[:, 0] - 0.25, inner[:, 1], inner[:, 2], inner[:, 3] + 0.5], axis=1)
    a, b = a[:n], b[:n]
    # sample points at the centers of a 0.125 m grid; every lattice cell holds some
    g = (np.arange(-8, 48) + 0.5) * 0.125
    points = np.array([(px, py) for px in g for py in g])
    expected = []
    for lo in range(0, n, 1000):
        expected += _grid_rcc5(a[lo:lo + 1000], b[lo:lo + 1000], points)
    got = [rcc5_at(Rect(*ra), Rect(*rb)) for ra, rb in zip(a.tolist(), b.tolist())]
    mismatches = sum(e is not g_ for e, g_ in zip(expected, got))
    elapsed = time.perf_counter() - t0
    kinds = {r.value: sum(1 for e in expected if e is r) for r in Rcc5Rel}
    ok = n >= 10000 and mismatches == 0 and elapsed < 10.0
    criterion("4 topology oracle", ok, f"{n} pairs, {mismatches} mismatches, {kinds}, {elapsed:.2f}s")
    assert n >= 10000
    assert mismatches == 0
    assert elapsed < 10.0


def _random_scene(rng, seed):
    regions = []
    for i in range(3):
        x, y = rng.uniform(0, 8, 2)
        w, h = rng.uniform(0.5, 3, 2)
        regions.append({"id": f"reg-{i}", "kind": "region", "color": "red", "rect": [x, y, x + w, y + h]})
    blocks = []
    for i in range(2):
        pts = rng.uniform(-1, 10, (3, 2)).tolist()
        blocks.append({"id": f"obj-{i}", "color": "blue", "size": [0.5, 0.5], "waypoints": pts,
                       "ticks": [int(rng.integers(5, 60)), int(rng.integers(5, 60))]})
    return gen_scene({"statics": regions, "blocks": blocks}, noise_sigma=float(rng.uniform(0, 0.05)), seed=seed)


def test_5_motion_oracle(criterion):
    t0 = time.perf_counter()
    rng = np.random.default_rng(99)
    samples = mismatches = 0
    for k in range(20):
        scene = _random_scene(rng, k)
        params = AbstractionParams(motion_window=int(rng.integers(1, 6)), v_eps=float(rng.uniform(0, 0.05)))
        fluents = extract_fluents(scene, params)
        pairs = list(iter_pairs(scene))

        def centre(eid, t):
            e = scene.entity(eid)
            if e.track:
                return e.track[t].position
            return ((e.rect.x_min + e.rect.x_max) / 2, (e.rect.y_min + e.rect.y_max) / 2)

        for _ in range(50):
            a, b = pairs[int(rng.integers(len(pairs)))]
            if rng.random() < 0.5:
                a, b = b, a
            t = int(rng.integers(scene.n_ticks))
            w = params.motion_window
            if t - w < 0 or t + w >= scene.n_ticks:
                want = MotionRel.STEADY
            else:
                diff = math.dist(centre(a, t + w), centre(b, t + w)) - math.dist(centre(a, t - w), centre(b, t - w))
                want = (MotionRel.APPROACHING if diff < -params.v_eps
                        else MotionRel.RECEDING if diff > params.v_eps else MotionRel.STEADY)
            got = motion_at(scene, a, b, t, params)
            key = (a, b) if (a, b) in pairs else (b, a)
            fluent = next(f for f in fluents if f.args == key and f.family == "motion" and t in f.interval)
            samples += 1
            mismatches += (got is not want) + (fluent.relation != want.value)
    elapsed = time.perf_counter() - t0
    ok = samples >= 1000 and mismatches == 0 and elapsed < 5.0
    criterion("5 motion oracle", ok, f"{samples} samples, {mismatches} mismatches, {elapsed:.2f}s")
    assert samples >= 1000
    assert mismatches == 0
    assert elapsed < 5.0


def test_6_allen_exhaustive(criterion):
    t0 = time.perf_counter()
    intervals = [TickInterval(s, e) for s in range(7) for e in range(s, 7)]
    bad = 0
    for i in intervals:
        for j in intervals:
            a, b, c, d = i.start, i.end + 1, j.start, j.end + 1
            holding = [b < c, d < a, b == c, d == a, a < c < b < d, c < a < d < b, a == c and b < d,
                       a == c and d < b, c < a and b < d, a < c and d < b, b == d and c < a,
                       b == d and a < c, a == c and b == d]
            rel = allen_relation(i, j)
            bad += sum(holding) != 1 or list(AllenRel)[holding.index(True)] is not rel
            bad += allen_relation(j, i) is not rel.converse
    elapsed = time.perf_counter() - t0
    ok = bad == 0 and elapsed < 1.0
    criterion("6 allen exhaustiveness", ok, f"{len(intervals) ** 2} pairs, {bad} violations, {elapsed:.3f}s")
    assert bad == 0
    assert elapsed < 1.0


def test_7_game_success(criterion):
    t0 = time.perf_counter()
    agents = [Agent("agent-1"), Agent("agent-2")]
    clean = run_series(discriminable_pairs(21, 0.0, seed=0), agents, 42, seed=0)
    noisy = run_series(discriminable_pairs(21, 0.02, seed=0), agents, 42, seed=0)
    elapsed = time.perf_counter() - t0
    ok = clean.success_rate == 1.0 and noisy.success_rate >= 0.9 and elapsed < 30.0
    criterion("7 game success", ok,
              f"sigma=0: {clean.success_rate:.3f}, sigma=0.02: {noisy.success_rate:.3f}, {elapsed:.1f}s")
    assert clean.success_rate == 1.0
    assert noisy.success_rate >= 0.9
    assert elapsed < 30.0


def test_8_abstraction_throughput(criterion):
    rng = np.random.default_rng(8)
    statics = [{"id": f"reg-{i}", "kind": "region", "color": "white",
                "rect": [2.0 * i, 0.0, 2.0 * i + 1.5, 3.0]} for i in range(6)]
    blocks = [{"id": f"obj-{i}", "color": "green", "size": [0.5, 0.5],
               "waypoints": rng.uniform(0, 12, (5, 2)).tolist(), "ticks": [250, 250, 250, 249]}
              for i in range(4)]
    scene = gen_scene({"statics": statics, "blocks": blocks}, noise_sigma=0.01, seed=1)
    assert scene.n_ticks == 1000 and len(scene.entities) == 10
    t0 = time.perf_counter()
    fluents = extract_fluents(scene)
    elapsed = time.perf_counter() - t0
    ok = elapsed < 2.0
    criterion("8 abstraction throughput", ok, f"{len(fluents)} fluents in {elapsed:.3f}s")
    assert elapsed < 2.0
