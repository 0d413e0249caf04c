"""Scene data model, scene documents, and metric primitives.

The viewer frame is fixed: x grows rightward, y grows away from the viewer
(depth). Every perceived object is abstracted to an axis-aligned rectangle.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence, Union

import numpy as np

KINDS = ("block", "box", "robot", "region")
STATIC_KINDS = ("box", "robot", "region")
DEFAULT_DT = 0.1

Color = Union[str, tuple]


class SceneError(ValueError):
    """A scene document or scene query violates the scene model."""

    def __init__(self, message: str, entity: str | None = None, field: str | None = None):
        where = []
        if entity is not None:
            where.append(f"entity {entity!r}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.entity = entity
        self.field = field


@dataclass(frozen=True, slots=True)
class Rect:
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    def __post_init__(self):
        if self.x_min > self.x_max or self.y_min > self.y_max:
            raise ValueError(f"degenerate rect {self}")

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x_min + self.x_max) / 2.0, (self.y_min + self.y_max) / 2.0)

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min

    def as_list(self) -> list[float]:
        return [self.x_min, self.y_min, self.x_max, self.y_max]


@dataclass(frozen=True, slots=True)
class ObjectState:
    position: tuple[float, float]
    extent: tuple[float, float]

    def __post_init__(self):
        if not (self.extent[0] > 0 and self.extent[1] > 0):
            raise ValueError(f"extent must be strictly positive, got {self.extent}")

    def rect(self) -> Rect:
        (x, y), (w, h) = self.position, self.extent
        return Rect(x - w / 2.0, y - h / 2.0, x + w / 2.0, y + h / 2.0)


@dataclass(frozen=True, slots=True)
class Entity:
    """A tracked object or a static landmark.

    Blocks carry one ``ObjectState`` per tick in ``track``; every other kind
    is static and carries a single ``rect``.
    """

    id: str
    kind: str
    color: Color
    track: tuple[ObjectState, ...] = ()
    rect: Rect | None = None
    pose: float | None = None

    @property
    def movable(self) -> bool:
        return self.kind == "block"


@dataclass(frozen=True)
class Scene:
    dt: float
    n_ticks: int
    entities: tuple[Entity, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        index = {}
        for e in self.entities:
            if e.id in index:
                raise SceneError("duplicate id", e.id, "id")
            if e.kind == "block" and len(e.track) != self.n_ticks:
                raise SceneError(
                    f"track-length mismatch: {len(e.track)} states for n_ticks={self.n_ticks}",
                    e.id, "track")
            index[e.id] = e
        object.__setattr__(self, "_index", index)

    def entity(self, entity_id: str) -> Entity:
        try:
            return self._index[entity_id]
        except KeyError:
            raise SceneError("unknown id", entity_id) from None

    @property
    def ids(self) -> list[str]:
        return [e.id for e in self.entities]

    def of_kind(self, *kinds: str) -> list[Entity]:
        return [e for e in self.entities if e.kind in kinds]

    @property
    def blocks(self) -> list[Entity]:
        return self.of_kind("block")


@dataclass(frozen=True)
class ScenePair:
    scene_a: Scene
    scene_b: Scene
    pair_id: str = ""

    def __post_init__(self):
        if not self.scene_a.entities or not self.scene_b.entities:
            raise SceneError("both scenes of a pair must be non-empty")

    def scene(self, index: str) -> Scene:
        if index == "a":
            return self.scene_a
        if index == "b":
            return self.scene_b
        raise ValueError(f"scene index must be 'a' or 'b', got {index!r}")


# -- scene documents ---------------------------------------------------------

def _number(value, entity, fld) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise SceneError(f"expected a finite number, got {value!r}", entity, fld)
    return float(value)


def _color(value, entity) -> Color:
    if isinstance(value, str):
        return value
    if isinstance(value, (list, tuple)) and len(value) == 3:
        triple = tuple(_number(c, entity, "color") for c in value)
        if not all(0 <= c <= 255 for c in triple):
            raise SceneError("YCbCr channels must lie in [0,255]", entity, "color")
        return triple
    raise SceneError("color must be a name or a YCbCr triple", entity, "color")


def _entity_from_doc(doc: Mapping[str, Any], n_ticks: int) -> Entity:
    if not isinstance(doc, Mapping):
        raise SceneError("entity must be an object")
    eid = doc.get("id")
    if not isinstance(eid, str) or not eid:
        raise SceneError("entity id must be a non-empty string", None, "id")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SceneError(f"kind must be one of {KINDS}, got {kind!r}", eid, "kind")
    if "color" not in doc:
        raise SceneError("missing color", eid, "color")
    color = _color(doc["color"], eid)
    pose = doc.get("pose")
    if pose is not None:
        pose = _number(pose, eid, "pose")

    if kind == "block":
        track = doc.get("track")
        if not isinstance(track, list):
            raise SceneError("blocks need a track list", eid, "track")
        if len(track) != n_ticks:
            raise SceneError(
                f"track-length mismatch: {len(track)} states for n_ticks={n_ticks}", eid, "track")
        states = []
        for row in track:
            if not isinstance(row, (list, tuple)) or len(row) != 4:
                raise SceneError("track rows must be [x, y, w, h]", eid, "track")
            x, y, w, h = (_number(v, eid, "track") for v in row)
            if w <= 0 or h <= 0:
                raise SceneError("extent must be strictly positive", eid, "track")
            states.append(ObjectState((x, y), (w, h)))
        return Entity(eid, kind, color, track=tuple(states), pose=pose)

    rect = doc.get("rect")
    if not isinstance(rect, (list, tuple)) or len(rect) != 4:
        raise SceneError("static entities need rect [x1, y1, x2, y2]", eid, "rect")
    x1, y1, x2, y2 = (_number(v, eid, "rect") for v in rect)
    if x1 > x2 or y1 > y2:
        raise SceneError("rect needs x1 <= x2 and y1 <= y2", eid, "rect")
    return Entity(eid, kind, color, rect=Rect(x1, y1, x2, y2), pose=pose)


def scene_from_dict(doc: Mapping[str, Any]) -> Scene:
    if not isinstance(doc, Mapping):
        raise SceneError("scene document must be a JSON object")
    dt = _number(doc.get("dt", DEFAULT_DT), None, "dt")
    if dt <= 0:
        raise SceneError("dt must be positive", None, "dt")
    n_ticks = doc.get("n_ticks")
    if isinstance(n_ticks, bool) or not isinstance(n_ticks, int) or n_ticks < 1:
        raise SceneError("n_ticks must be a positive integer", None, "n_ticks")
    entities = doc.get("entities")
    if not isinstance(entities, list):
        raise SceneError("entities must be a list", None, "entities")
    return Scene(dt, n_ticks, tuple(_entity_from_doc(e, n_ticks) for e in entities))


def load_scene(text: str) -> Scene:
    """Parse and validate a scene document (JSON text)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"invalid JSON: {exc}") from None
    return scene_from_dict(doc)


def scene_to_dict(scene: Scene) -> dict:
    entities = []
    for e in scene.entities:
        d: dict[str, Any] = {"id": e.id, "kind": e.kind,
                             "color": e.color if isinstance(e.color, str) else list(e.color)}
        if e.pose is not None:
            d["pose"] = e.pose
        if e.kind == "block":
            d["track"] = [[s.position[0], s.position[1], s.extent[0], s.extent[1]] for s in e.track]
        else:
            d["rect"] = e.rect.as_list()
        entities.append(d)
    return {"dt": scene.dt, "n_ticks": scene.n_ticks, "entities": entities}


def dump_scene(scene: Scene) -> str:
    return json.dumps(scene_to_dict(scene))


def load_pair(text: str) -> ScenePair:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SceneError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, Mapping) or "scene_a" not in doc or "scene_b" not in doc:
        raise SceneError("pair document needs scene_a and scene_b")
    return ScenePair(scene_from_dict(doc["scene_a"]), scene_from_dict(doc["scene_b"]),
                     str(doc.get("pair_id", "")))


def dump_pair(pair: ScenePair) -> str:
    return json.dumps({"pair_id": pair.pair_id, "scene_a": scene_to_dict(pair.scene_a),
                       "scene_b": scene_to_dict(pair.scene_b)})


# -- metric primitives -------------------------------------------------------

def _check_tick(scene: Scene, entity_id: str, t: int) -> None:
    if not 0 <= t < scene.n_ticks:
        raise SceneError(f"tick {t} out of range [0, {scene.n_ticks})", entity_id)


def footprint(scene: Scene, entity_id: str, t: int) -> Rect:
    e = scene.entity(entity_id)
    _check_tick(scene, entity_id, t)
    if e.kind == "block":
        return e.track[t].rect()
    return e.rect


def centroid_distance(scene: Scene, a: str, b: str, t: int) -> float:
    ax, ay = footprint(scene, a, t).center
    bx, by = footprint(scene, b, t).center
    return math.hypot(ax - bx, ay - by)


def rect_series(scene: Scene, entity_id: str) -> np.ndarray:
    """Footprints of an entity over all ticks as an (n_ticks, 4) array."""
    e = scene.entity(entity_id)
    if e.kind == "block":
        arr = np.array([[s.position[0], s.position[1], s.extent[0], s.extent[1]] for s in e.track])
        x, y, w, h = arr.T
        return np.stack([x - w / 2.0, y - h / 2.0, x + w / 2.0, y + h / 2.0], axis=1)
    return np.tile(np.array(e.rect.as_list(), dtype=float), (scene.n_ticks, 1))


def center_series(scene: Scene, entity_id: str) -> np.ndarray:
    r = rect_series(scene, entity_id)
    return np.stack([(r[:, 0] + r[:, 2]) / 2.0, (r[:, 1] + r[:, 3]) / 2.0], axis=1)


# -- synthetic scenes --------------------------------------------------------

def _interpolate(waypoints: Sequence[Sequence[float]], ticks: Sequence[int], block_id: str) -> list:
    if not waypoints:
        raise SceneError("empty waypoint list", block_id, "waypoints")
    if len(ticks) != len(waypoints) - 1:
        raise SceneError("need one tick count per segment", block_id, "ticks")
    pts = [tuple(map(float, waypoints[0]))]
    for (a, b, n) in zip(waypoints, waypoints[1:], ticks):
        if isinstance(n, bool) or not isinstance(n, int) or n <= 0:
            raise SceneError(f"non-positive tick count {n!r}", block_id, "ticks")
        for k in range(1, n + 1):
            s = k / n
            # a*(1-s) + b*s is exact at both segment ends
            pts.append((a[0] * (1.0 - s) + b[0] * s, a[1] * (1.0 - s) + b[1] * s))
    return pts


def gen_scene(script: Mapping[str, Any], noise_sigma: float = 0.0, seed: int = 0) -> Scene:
    """Build a scene from a motion script.

    ``script`` holds ``statics`` (id/kind/color/rect) and ``blocks`` with
    ``waypoints``, per-segment ``ticks`` and a ``size``. Blocks whose motion
    ends early hold their final waypoint. Gaussian noise of ``noise_sigma``
    meters is added to every block position, drawn from a generator seeded
    with ``seed``.
    """
    if noise_sigma < 0:
        raise ValueError("noise_sigma must be non-negative")
    dt = float(script.get("dt", DEFAULT_DT))
    paths = []
    for b in script.get("blocks", []):
        paths.append(_interpolate(b.get("waypoints", []), b.get("ticks", []), b.get("id")))
    n_ticks = int(script.get("n_ticks", max((len(p) for p in paths), default=1)))
    if any(len(p) > n_ticks for p in paths):
        raise SceneError("block path longer than n_ticks", None, "n_ticks")

    rng = np.random.default_rng(seed)
    entities = []
    for s in script.get("statics", []):
        entities.append(Entity(s["id"], s.get("kind", "region"), _color(s["color"], s["id"]),
                               rect=Rect(*map(float, s["rect"])), pose=s.get("pose")))
    for b, path in zip(script.get("blocks", []), paths):
        pos = np.array(path + [path[-1]] * (n_ticks - len(path)), dtype=float)
        if noise_sigma > 0:
            pos = pos + rng.normal(0.0, noise_sigma, size=pos.shape)
        w, h = (float(v) for v in b.get("size", (0.5, 0.5)))
        track = tuple(ObjectState((float(x), float(y)), (w, h)) for x, y in pos)
        entities.append(Entity(b["id"], "block", _color(b["color"], b["id"]), track=track))
    return Scene(dt, n_ticks, tuple(entities))


def iter_pairs(scene: Scene) -> Iterable[tuple[str, str]]:
    """Ordered (block, other) id pairs that carry qualitative relations."""
    for a in scene.blocks:
        for b in scene.entities:
            if b.id != a.id:
                yield a.id, b.id
