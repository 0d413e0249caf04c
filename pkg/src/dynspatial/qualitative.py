"""Qualitative abstraction of space and motion.

Per-tick classification of RCC5 topology, extrinsic orientation on both
viewer axes, and relative movement, lifted to maximal-interval fluents.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from .geometry import Rect, Scene, center_series, centroid_distance, iter_pairs, rect_series
from .intervals import TickInterval


class Rcc5Rel(str, Enum):
    DC = "DC"
    PO = "PO"
    PP = "PP"
    PPi = "PPi"
    EQ = "EQ"


class MotionRel(str, Enum):
    APPROACHING = "approaching"
    RECEDING = "receding"
    STEADY = "steady"


HORIZONTAL = ("left", "overlaps_left", "along_left", "horizontally_equal",
              "overlaps_right", "along_right", "right")
DEPTH = ("closer", "overlaps_closer", "along_closer", "distance_equal",
         "overlaps_further", "along_further", "further")

FAMILIES = ("topology", "horizontal", "depth", "motion")

_RCC5_CODES = (Rcc5Rel.DC, Rcc5Rel.PO, Rcc5Rel.PP, Rcc5Rel.PPi, Rcc5Rel.EQ)
_MOTION_CODES = (MotionRel.APPROACHING, MotionRel.RECEDING, MotionRel.STEADY)

# axis codes index into HORIZONTAL / DEPTH
_LOW, _OVERLAPS_LOW, _ALONG_LOW, _EQUAL, _OVERLAPS_HIGH, _ALONG_HIGH, _HIGH = range(7)


@dataclass(frozen=True)
class AbstractionParams:
    eps_geo: float = 0.01
    motion_window: int = 3
    v_eps: float = 0.01

    def __post_init__(self):
        if self.eps_geo < 0:
            raise ValueError("eps_geo must be >= 0")
        if isinstance(self.motion_window, bool) or not isinstance(self.motion_window, int) \
                or self.motion_window < 1:
            raise ValueError("motion_window must be an integer >= 1")
        if self.v_eps < 0:
            raise ValueError("v_eps must be >= 0")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "AbstractionParams":
        unknown = set(doc) - {"eps_geo", "motion_window", "v_eps"}
        if unknown:
            raise ValueError(f"unknown abstraction parameters: {sorted(unknown)}")
        return cls(**doc)

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class OrientRel:
    horizontal: str
    depth: str


@dataclass(frozen=True, order=True)
class Fluent:
    args: tuple[str, str]
    family: str
    interval: TickInterval
    relation: str

    def to_json(self) -> str:
        return json.dumps({"rel": self.relation, "args": list(self.args),
                           "interval": self.interval.as_list()})


# -- vectorized classifiers --------------------------------------------------

def _rcc5_codes(a: np.ndarray, b: np.ndarray, eps: float) -> np.ndarray:
    """RCC5 codes for rows of (x_min, y_min, x_max, y_max) arrays."""
    eq = np.all(np.abs(a - b) <= eps, axis=1)
    a_in_b = ((a[:, 0] >= b[:, 0] - eps) & (a[:, 1] >= b[:, 1] - eps)
              & (a[:, 2] <= b[:, 2] + eps) & (a[:, 3] <= b[:, 3] + eps))
    b_in_a = ((b[:, 0] >= a[:, 0] - eps) & (b[:, 1] >= a[:, 1] - eps)
              & (b[:, 2] <= a[:, 2] + eps) & (b[:, 3] <= a[:, 3] + eps))
    ov_x = np.minimum(a[:, 2], b[:, 2]) - np.maximum(a[:, 0], b[:, 0])
    ov_y = np.minimum(a[:, 3], b[:, 3]) - np.maximum(a[:, 1], b[:, 1])
    # interiors shrunk by eps are disjoint when the overlap on either axis is <= eps
    dc = (ov_x <= eps) | (ov_y <= eps)
    return np.select([eq, a_in_b, b_in_a, dc], [4, 2, 3, 0], default=1)


def _axis_codes(alo, ahi, blo, bhi, eps: float) -> np.ndarray:
    contained = ((alo >= blo - eps) & (ahi <= bhi + eps)) | ((blo >= alo - eps) & (bhi <= ahi + eps))
    overlap = np.minimum(ahi, bhi) - np.maximum(alo, blo)
    ca = (alo + ahi) / 2.0
    cb = (blo + bhi) / 2.0
    along = np.select([ca < cb - eps, ca > cb + eps], [_ALONG_LOW, _ALONG_HIGH], default=_EQUAL)
    apart = np.where(ca < cb, _LOW, _HIGH)
    partial = np.where(alo < blo, _OVERLAPS_LOW, _OVERLAPS_HIGH)
    return np.select([contained, overlap <= eps], [along, apart], default=partial)


def _as_row(r: Rect) -> np.ndarray:
    return np.array([[r.x_min, r.y_min, r.x_max, r.y_max]], dtype=float)


def rcc5_at(a: Rect, b: Rect, eps_geo: float = 0.01) -> Rcc5Rel:
    """RCC5 relation of rect ``a`` to rect ``b``.

    EQ when all boundaries agree within ``eps_geo``; PP/PPi for containment
    with ``eps_geo`` slack; DC when the overlap on some axis is at most
    ``eps_geo`` (touching counts as disconnected); PO otherwise.
    """
    return _RCC5_CODES[int(_rcc5_codes(_as_row(a), _as_row(b), eps_geo)[0])]


def orientation_at(a: Rect, b: Rect, eps_geo: float = 0.01) -> OrientRel:
    """Extrinsic orientation of ``a`` relative to ``b`` on both viewer axes.

    Per axis: containment of one projection in the other gives an along_*
    or *_equal relation by comparing centers; projections overlapping by at
    most ``eps_geo`` are disjoint (left/right, closer/further); anything else
    partially overlaps, named after the side on which ``a`` sticks out.
    """
    ra, rb = _as_row(a), _as_row(b)
    h = int(_axis_codes(ra[:, 0], ra[:, 2], rb[:, 0], rb[:, 2], eps_geo)[0])
    d = int(_axis_codes(ra[:, 1], ra[:, 3], rb[:, 1], rb[:, 3], eps_geo)[0])
    return OrientRel(HORIZONTAL[h], DEPTH[d])


def _motion_codes(dist: np.ndarray, window: int, v_eps: float) -> np.ndarray:
    n = len(dist)
    codes = np.full(n, 2)
    if n > 2 * window:
        delta = dist[2 * window:] - dist[:n - 2 * window]
        codes[window:n - window] = np.select([delta < -v_eps, delta > v_eps], [0, 1], default=2)
    return codes


def motion_at(scene: Scene, a: str, b: str, t: int, params: AbstractionParams) -> MotionRel:
    """Relative movement of ``a`` and ``b`` at tick ``t``.

    Compares the centroid distance at ``t + W`` against ``t - W``. Ticks whose
    window leaves the scene are steady.
    """
    scene.entity(a), scene.entity(b)
    w = params.motion_window
    if t - w < 0 or t + w >= scene.n_ticks:
        return MotionRel.STEADY
    before = centroid_distance(scene, a, b, t - w)
    after = centroid_distance(scene, a, b, t + w)
    if after < before - params.v_eps:
        return MotionRel.APPROACHING
    if after > before + params.v_eps:
        return MotionRel.RECEDING
    return MotionRel.STEADY


# -- fluent extraction -------------------------------------------------------

def _distances(scene: Scene, a: str, b: str) -> np.ndarray:
    # same float operations as centroid_distance, so thresholds agree bit-for-bit
    ca, cb = center_series(scene, a), center_series(scene, b)
    dx = (ca[:, 0] - cb[:, 0]).tolist()
    dy = (ca[:, 1] - cb[:, 1]).tolist()
    return np.fromiter(map(math.hypot, dx, dy), dtype=float, count=len(dx))


def _runs(codes: np.ndarray, labels, args, family) -> list[Fluent]:
    # maximal constant runs; equivalent to intervals_from_series(codes == c) per code
    cuts = np.flatnonzero(np.diff(codes)) + 1
    starts = [0, *cuts.tolist()]
    ends = [*(cuts - 1).tolist(), len(codes) - 1]
    return [Fluent(args, family, TickInterval(s, e), str(labels[int(codes[s])]))
            for s, e in zip(starts, ends)]


def pair_fluents(scene: Scene, a: str, b: str, params: AbstractionParams) -> list[Fluent]:
    eps = params.eps_geo
    ra, rb = rect_series(scene, a), rect_series(scene, b)
    args = (a, b)
    fluents = _runs(_rcc5_codes(ra, rb, eps), [r.value for r in _RCC5_CODES], args, "topology")
    fluents += _runs(_axis_codes(ra[:, 0], ra[:, 2], rb[:, 0], rb[:, 2], eps), HORIZONTAL,
                     args, "horizontal")
    fluents += _runs(_axis_codes(ra[:, 1], ra[:, 3], rb[:, 1], rb[:, 3], eps), DEPTH, args, "depth")
    motion = _motion_codes(_distances(scene, a, b), params.motion_window, params.v_eps)
    fluents += _runs(motion, [m.value for m in _MOTION_CODES], args, "motion")
    return fluents


def extract_fluents(scene: Scene, params: AbstractionParams | None = None) -> list[Fluent]:
    """All maximal fluents for every ordered (block, other entity) pair.

    Ordered by argument pair, relation family (topology, horizontal, depth,
    motion) and start tick.
    """
    params = params or AbstractionParams()
    fluents = []
    for a, b in iter_pairs(scene):
        fluents.extend(pair_fluents(scene, a, b, params))
    fluents.sort(key=lambda f: (f.args, FAMILIES.index(f.family), f.interval.start))
    return fluents


def fluents_at(fluents: Iterable[Fluent], t: int) -> list[Fluent]:
    return [f for f in fluents if t in f.interval]


def dump_fluents(fluents: Iterable[Fluent]) -> str:
    return "".join(f.to_json() + "\n" for f in fluents)
