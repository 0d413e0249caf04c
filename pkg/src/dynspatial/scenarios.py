"""Motion scripts for the shipped fixtures and the discriminable pair suite."""

from __future__ import annotations

import random
from typing import Iterator

from .geometry import Scene, ScenePair, gen_scene

SPEED = 0.1  # meters per tick for scripted blocks


def canonical_script() -> dict:
    """The green block obj-12 moves left across the yellow region reg-38,
    enters the overlapping red region reg-37, turns toward the viewer, leaves
    the red region at the bottom and stops inside the white region reg-36."""
    return {
        "dt": 0.1,
        "statics": [
            {"id": "reg-36", "kind": "region", "color": "white", "rect": [0.0, -2.5, 4.0, 0.5]},
            {"id": "reg-37", "kind": "region", "color": "red", "rect": [1.0, 2.0, 5.0, 6.0]},
            {"id": "reg-38", "kind": "region", "color": "yellow", "rect": [4.0, 4.0, 8.0, 6.0]},
        ],
        "blocks": [
            {"id": "obj-12", "color": "green", "size": [0.6, 0.6],
             "waypoints": [[10.0, 5.0], [10.0, 5.0], [2.5, 5.0], [2.5, -1.0], [2.5, -1.0]],
             "ticks": [5, 75, 60, 10]},
        ],
    }


def canonical_scene() -> Scene:
    return gen_scene(canonical_script())


def _steps(a, b) -> int:
    dist = max(abs(b[0] - a[0]), abs(b[1] - a[1]))
    return max(1, round(dist / SPEED))


def _block(bid, color, waypoints, size=0.6, lead=4, tail=6) -> dict:
    ticks = [lead] + [_steps(a, b) for a, b in zip(waypoints, waypoints[1:])] + [tail]
    path = [waypoints[0]] + list(waypoints) + [waypoints[-1]]
    return {"id": bid, "color": color, "size": [size, size], "waypoints": path, "ticks": ticks}


def _still(bid, color, at, n, size=0.6) -> dict:
    return {"id": bid, "color": color, "size": [size, size], "waypoints": [at, at], "ticks": [n]}


def _script(statics, blocks) -> dict:
    n = max(1 + sum(b["ticks"]) for b in blocks)
    for b in blocks:
        b["ticks"][-1] += n - 1 - sum(b["ticks"])
    return {"dt": 0.1, "n_ticks": n, "statics": statics, "blocks": blocks}


def _region(rid, color, cx, cy, w, h) -> dict:
    return {"id": rid, "kind": "region", "color": color,
            "rect": [cx - w / 2, cy - h / 2, cx + w / 2, cy + h / 2]}


COLORS = ("red", "green", "yellow", "white", "blue")


def crossing_pair(rng: random.Random) -> tuple[dict, dict]:
    """A block crosses one region in scene a and passes below it, across a
    second region, in scene b."""
    mover, landmark, other = rng.sample(COLORS, 3)
    cx, cy = rng.uniform(4.0, 6.0), rng.uniform(4.0, 6.0)
    statics = [_region("reg-1", landmark, cx, cy, 2.0, 2.0),
               _region("reg-2", other, cx, cy - 3.5, 2.0, 1.5)]

    def scene(y):
        y += rng.uniform(-0.3, 0.3)
        return _script(statics, [_block("obj-1", mover, [(cx + 4.0, y), (cx - 3.5, y)])])

    return scene(cy), scene(cy - 3.5)


def entering_pair(rng: random.Random) -> tuple[dict, dict]:
    """A block moves into a region in scene a and out of it in scene b."""
    mover, landmark = rng.sample(COLORS, 2)
    cx, cy = rng.uniform(3.0, 6.0), rng.uniform(3.0, 6.0)
    statics = [_region("reg-1", landmark, cx, cy, 2.5, 2.5)]
    outside = (cx + rng.uniform(-1.0, 1.0), cy - 4.0)
    inside = (cx, cy)
    into = _script(statics, [_block("obj-1", mover, [outside, inside])])
    out_of = _script(statics, [_block("obj-1", mover, [inside, outside])])
    return into, out_of


def color_pair(rng: random.Random) -> tuple[dict, dict]:
    """Two blocks of different colors; a different one crosses the region in each scene."""
    first, second, landmark = rng.sample(COLORS, 3)
    cx, cy = rng.uniform(4.0, 6.0), rng.uniform(4.0, 6.0)
    statics = [_region("reg-1", landmark, cx, cy, 2.0, 2.0)]
    y = cy + rng.uniform(-0.3, 0.3)
    path = [(cx - 4.0, y), (cx + 3.5, y)]
    park = (cx - 4.0, cy - 3.0)

    def scene(crosser):
        blocks = []
        for bid, color in (("obj-1", first), ("obj-2", second)):
            if color == crosser:
                blocks.append(_block(bid, color, path))
            else:
                blocks.append(_still(bid, color, park if bid == "obj-1" else (park[0] + 1.5, park[1]),
                                     1))
        return _script(statics, blocks)

    return scene(first), scene(second)


FAMILIES = (crossing_pair, entering_pair, color_pair)


def discriminable_pairs(n: int = 21, noise_sigma: float = 0.0, seed: int = 0) -> list[ScenePair]:
    """``n`` scene pairs cycling through the crossing, entering and color families."""
    rng = random.Random(seed)
    pairs = []
    for i in range(n):
        family = FAMILIES[i % len(FAMILIES)]
        script_a, script_b = family(rng)
        scene_seed = rng.randrange(2 ** 31)
        pairs.append(ScenePair(gen_scene(script_a, noise_sigma, scene_seed),
                               gen_scene(script_b, noise_sigma, scene_seed + 1),
                               f"{family.__name__}-{i}"))
    return pairs


def iter_scripts(n: int, seed: int) -> Iterator[tuple[str, dict, dict]]:
    rng = random.Random(seed)
    for i in range(n):
        family = FAMILIES[i % len(FAMILIES)]
        a, b = family(rng)
        yield f"{family.__name__}-{i}", a, b
