"""Motion events composed from fluents, and scene narratives."""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Collection, Iterable, Sequence

import numpy as np

from .geometry import Scene, center_series
from .intervals import AllenRel, TickInterval, allen_relation
from .qualitative import AbstractionParams, Fluent, extract_fluents


class Direction(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    CLOSER = "closer"
    FURTHER = "further"


PREDICATES = ("moves", "moves_into", "moves_out_of", "moves_across")
_DIRECTIONS = (Direction.LEFT, Direction.RIGHT, Direction.CLOSER, Direction.FURTHER)


@dataclass(frozen=True)
class EventAtom:
    predicate: str
    subject: str
    reference: str
    interval: TickInterval

    def __post_init__(self):
        if self.predicate not in PREDICATES:
            raise ValueError(f"unknown event predicate {self.predicate!r}")

    def sort_key(self):
        return (self.interval.start, self.predicate, self.reference)

    def to_dict(self) -> dict:
        return {"pred": self.predicate, "subject": self.subject, "ref": self.reference,
                "interval": self.interval.as_list()}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self):
        kind = "direction" if self.predicate == "moves" else "region"
        return (f"{self.predicate}(object({self.subject}), {kind}({self.reference}), "
                f"[{self.interval.start},{self.interval.end}])")


def _direction_codes(centers: np.ndarray, window: int, v_eps: float) -> np.ndarray:
    n = len(centers)
    t = np.arange(n)
    lo = np.maximum(t - window, 0)
    hi = np.minimum(t + window, n - 1)
    span = np.maximum(hi - lo, 1)
    v = (centers[hi] - centers[lo]) / span[:, None]
    speed = np.hypot(v[:, 0], v[:, 1])
    horizontal = np.abs(v[:, 0]) >= np.abs(v[:, 1])  # ties go to the horizontal axis
    direction = np.where(horizontal, np.where(v[:, 0] < 0, 0, 1), np.where(v[:, 1] < 0, 2, 3))
    return np.where(speed > v_eps, direction, -1)


def segment_moves(scene: Scene, params: AbstractionParams | None = None) -> list[EventAtom]:
    """Split every block track into maximal single-direction movements.

    Velocity at tick t is the centered displacement over the motion window
    (clipped at the scene ends) divided by its length in ticks. A tick moves
    when that per-tick displacement exceeds ``v_eps``; its direction is the
    dominant axis, with ties going to the horizontal one.
    """
    params = params or AbstractionParams()
    atoms = []
    for block in scene.blocks:
        if scene.n_ticks < 2:
            continue
        codes = _direction_codes(center_series(scene, block.id), params.motion_window, params.v_eps)
        cuts = np.flatnonzero(np.diff(codes)) + 1
        starts = [0, *cuts.tolist()]
        ends = [*(cuts - 1).tolist(), len(codes) - 1]
        for s, e in zip(starts, ends):
            if codes[s] >= 0:
                atoms.append(EventAtom("moves", block.id, _DIRECTIONS[codes[s]].value,
                                       TickInterval(s, e)))
    return atoms


def _by_pair(fluents: Iterable[Fluent], family: str) -> dict[tuple[str, str], list[Fluent]]:
    out: dict[tuple[str, str], list[Fluent]] = {}
    for f in fluents:
        if f.family == family:
            out.setdefault(f.args, []).append(f)
    for group in out.values():
        group.sort(key=lambda f: f.interval.start)
    return out


def _chain(topo: Sequence[Fluent], motion: Sequence[Fluent], pattern: tuple[str, str, str],
           drive: str) -> list[TickInterval]:
    found = []
    for f1, f2, f3 in zip(topo, topo[1:], topo[2:]):
        if (f1.relation, f2.relation, f3.relation) != pattern:
            continue
        if allen_relation(f1.interval, f2.interval) is not AllenRel.MEETS:
            continue
        if allen_relation(f2.interval, f3.interval) is not AllenRel.MEETS:
            continue
        # the movement fluent must span the whole contact phase
        if any(m.relation == drive and m.interval.covers(f2.interval) for m in motion):
            found.append(f2.interval)
    return found


def detect_transitions(fluents: Iterable[Fluent],
                       references: Collection[str] | None = None) -> list[EventAtom]:
    """moves_into / moves_out_of atoms from topology and motion fluents.

    An entry is a DC, PO, PP chain of meeting topology fluents whose PO phase
    lies inside an approaching fluent; an exit mirrors it (PP, PO, DC while
    receding). The atom's interval is the PO phase. ``references`` restricts
    the second argument (usually to region ids).
    """
    fluents = list(fluents)
    topology = _by_pair(fluents, "topology")
    motion = _by_pair(fluents, "motion")
    atoms = []
    for args in sorted(topology):
        block, ref = args
        if references is not None and ref not in references:
            continue
        topo, mot = topology[args], motion.get(args, [])
        for iv in _chain(topo, mot, ("DC", "PO", "PP"), "approaching"):
            atoms.append(EventAtom("moves_into", block, ref, iv))
        for iv in _chain(topo, mot, ("PP", "PO", "DC"), "receding"):
            atoms.append(EventAtom("moves_out_of", block, ref, iv))
    atoms.sort(key=EventAtom.sort_key)
    return atoms


def detect_across(atoms: Iterable[EventAtom], fluents: Iterable[Fluent]) -> list[EventAtom]:
    """moves_across atoms from paired entries and exits.

    Each entry pairs with the nearest later exit from the same region. The
    crossing spans entry start to exit end and must lie inside a single
    ``moves`` interval of the block (shared endpoints allowed), and the block
    must stay in contact with the region throughout.
    """
    atoms = list(atoms)
    disconnected = {}
    for f in fluents:
        if f.family == "topology" and f.relation == "DC":
            disconnected.setdefault(f.args, []).append(f.interval)
    moves = [a for a in atoms if a.predicate == "moves"]
    exits = sorted((a for a in atoms if a.predicate == "moves_out_of"), key=EventAtom.sort_key)
    out = []
    for entry in sorted((a for a in atoms if a.predicate == "moves_into"), key=EventAtom.sort_key):
        later = [x for x in exits if x.subject == entry.subject and x.reference == entry.reference
                 and x.interval.start > entry.interval.end]
        if not later:
            continue
        exit_ = later[0]
        span = TickInterval(entry.interval.start, exit_.interval.end)
        if any(iv.intersects(span) for iv in disconnected.get((entry.subject, entry.reference), [])):
            continue
        if any(m.subject == entry.subject and m.interval.covers(span) for m in moves):
            out.append(EventAtom("moves_across", entry.subject, entry.reference, span))
    return out


def describe_scene(scene: Scene, params: AbstractionParams | None = None) -> list[EventAtom]:
    """Full event description of a scene, sorted by start, predicate, reference."""
    params = params or AbstractionParams()
    fluents = extract_fluents(scene, params)
    regions = {e.id for e in scene.of_kind("region")}
    atoms = segment_moves(scene, params) + detect_transitions(fluents, regions)
    atoms += detect_across(atoms, fluents)
    atoms.sort(key=EventAtom.sort_key)
    return atoms


def dump_events(atoms: Iterable[EventAtom]) -> str:
    return "".join(a.to_json() + "\n" for a in atoms)


_PHRASES = {"moves_into": "into", "moves_out_of": "out of", "moves_across": "across"}


def render_english(atoms: Iterable[EventAtom], color_of: Callable[[str], str]) -> list[str]:
    """Template sentences for human inspection, one per atom."""
    lines = []
    for a in atoms:
        subject = f"The {color_of(a.subject)} block moves"
        if a.predicate == "moves":
            lines.append(f"{subject} {a.reference}.")
        else:
            lines.append(f"{subject} {_PHRASES[a.predicate]} the {color_of(a.reference)} region.")
    return lines
