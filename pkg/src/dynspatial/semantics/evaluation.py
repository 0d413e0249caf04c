"""Evaluation of IRL programs against a pair of scenes.

Bind statements are bound first, then operations run as soon as all their
inputs are bound. ``get-context`` branches over both scenes; an operation
whose result is empty fails its branch. Every surviving branch becomes a
scored solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator

from ..events import EventAtom, describe_scene
from ..geometry import ScenePair
from ..intervals import TickInterval
from ..qualitative import AbstractionParams
from .colors import ColorPrototypes, classify_color, default_prototypes, ycbcr_distance
from .program import CogOpNode, IrlProgram, ProgramError, SemEntity, check_program

COLOR_TAU = 50.0

# which event profile each dynamic spatial relation inspects
PROFILE_FOR_RELATION = {"across": "path", "into": "goal", "out-of": "source"}
_ATOM_FOR_RELATION = {"across": "moves_across", "into": "moves_into", "out-of": "moves_out_of"}


@dataclass(frozen=True, order=True)
class MotionEvent:
    subject: str
    direction: str
    interval: TickInterval
    profile: str | None = None


@dataclass(frozen=True)
class Referents:
    scene: str
    ids: tuple[str, ...]


@dataclass(frozen=True)
class Events:
    scene: str
    events: tuple[MotionEvent, ...]


@dataclass
class Solution:
    bindings: dict
    score: float
    context: str | None = None

    def __post_init__(self):
        if not 0.0 < self.score <= 1.0:
            raise ValueError(f"score {self.score} outside (0, 1]")


@dataclass
class ScenePercept:
    """What an agent has construed from one scene."""

    atoms: list[EventAtom]
    kinds: dict[str, str]
    colors: dict[str, tuple | None]


@dataclass
class Percepts:
    scenes: dict[str, ScenePercept]
    prototypes: ColorPrototypes
    params: AbstractionParams = field(default_factory=AbstractionParams)

    @classmethod
    def build(cls, pair: ScenePair, params: AbstractionParams | None = None,
              prototypes: ColorPrototypes | None = None) -> "Percepts":
        params = params or AbstractionParams()
        prototypes = prototypes or default_prototypes()
        scenes = {}
        for index in ("a", "b"):
            scene = pair.scene(index)
            colors = {}
            for e in scene.entities:
                if isinstance(e.color, str):
                    colors[e.id] = prototypes[e.color] if e.color in prototypes else None
                else:
                    colors[e.id] = tuple(e.color)
            scenes[index] = ScenePercept(describe_scene(scene, params),
                                         {e.id: e.kind for e in scene.entities}, colors)
        return cls(scenes, prototypes, params)


# -- operations --------------------------------------------------------------
# Each returns the list of (value, confidence) outcomes; an empty list fails
# the branch.

Outcome = list


def _get_context(args, env, percepts) -> Outcome:
    return [(index, 1.0) for index in ("a", "b")]


def _apply_class(args, env, percepts) -> Outcome:
    ctx, cls = env[args[1]], env[args[2]].value
    kinds = percepts.scenes[ctx].kinds
    ids = tuple(sorted(i for i, k in kinds.items() if k == cls))
    return [(Referents(ctx, ids), 1.0)] if ids else []


def _apply_color(args, env, percepts) -> Outcome:
    source, color = env[args[1]], env[args[2]].value
    if color not in percepts.prototypes:
        return []
    proto = percepts.prototypes[color]
    colors = percepts.scenes[source.scene].colors
    kept, confidence = [], 1.0
    for i in source.ids:
        sample = colors.get(i)
        if sample is None or classify_color(sample, percepts.prototypes) != color:
            continue
        kept.append(i)
        # the worst-fitting member decides the confidence of the set
        confidence = min(confidence, math.exp(-ycbcr_distance(sample, proto) / COLOR_TAU))
    return [(Referents(source.scene, tuple(kept)), confidence)] if kept else []


def _apply_determiner(args, env, percepts) -> Outcome:
    source, selector = env[args[1]], env[args[2]].value
    if selector == "unique" and len(source.ids) == 1:
        return [(source, 1.0)]
    return []


def _apply_event(args, env, percepts) -> Outcome:
    ctx = env[args[1]]
    events = tuple(sorted(MotionEvent(a.subject, a.reference, a.interval)
                          for a in percepts.scenes[ctx].atoms if a.predicate == "moves"))
    return [(Events(ctx, events), 1.0)] if events else []


def _apply_role(args, env, percepts) -> Outcome:
    source, participants, role = env[args[1]], env[args[2]], env[args[3]].value
    if role != "mover" or source.scene != participants.scene:
        return []
    kept = tuple(e for e in source.events if e.subject in participants.ids)
    return [(Events(source.scene, kept), 1.0)] if kept else []


def _apply_profile(args, env, percepts) -> Outcome:
    source, profile = env[args[1]], env[args[2]].value
    profiled = tuple(MotionEvent(e.subject, e.direction, e.interval, profile) for e in source.events)
    return [(Events(source.scene, profiled), 1.0)]


def _apply_dsr(args, env, percepts) -> Outcome:
    source, landmarks, relation = env[args[1]], env[args[2]], env[args[3]].value
    if source.scene != landmarks.scene:
        return []
    predicate = _ATOM_FOR_RELATION[relation]
    atoms = [a for a in percepts.scenes[source.scene].atoms
             if a.predicate == predicate and a.reference in landmarks.ids]
    kept = tuple(
        e for e in source.events
        if e.profile == PROFILE_FOR_RELATION[relation]
        and any(a.subject == e.subject and a.interval.intersects(e.interval) for a in atoms))
    return [(Events(source.scene, kept), 1.0)] if kept else []


OPERATIONS: dict[str, Callable] = {
    "get-context": _get_context,
    "apply-class": _apply_class,
    "apply-color": _apply_color,
    "apply-determiner": _apply_determiner,
    "apply-event": _apply_event,
    "apply-role": _apply_role,
    "apply-profile": _apply_profile,
    "apply-dynamic-spatial-relation": _apply_dsr,
}


def _branches(nodes: list[CogOpNode], env: dict, score: float, percepts: Percepts) -> Iterator:
    if not nodes:
        yield env, score
        return
    for i, node in enumerate(nodes):
        if all(a in env for a in node.inputs):
            break
    else:
        raise ProgramError("no operation can run: unbound inputs")
    rest = nodes[:i] + nodes[i + 1:]
    for value, confidence in OPERATIONS[node.op](node.args, env, percepts):
        yield from _branches(rest, {**env, node.output: value}, score * confidence, percepts)


def _solution_key(s: Solution):
    return (-s.score, s.context or "", sorted((k, repr(v)) for k, v in s.bindings.items()))


def evaluate(program: IrlProgram, context: ScenePair | Percepts,
             params: AbstractionParams | None = None,
             prototypes: ColorPrototypes | None = None) -> list[Solution]:
    """All successful, scored solutions of ``program`` on a scene pair.

    Solutions come sorted by descending score, then by the scene bound to the
    context ('a' first).
    """
    check_program(program)
    percepts = context if isinstance(context, Percepts) else Percepts.build(context, params, prototypes)
    env: dict = {b.variable: b.entity for b in program.binds}
    context_vars = [n.output for n in program.nodes if n.op == "get-context"]
    solutions = []
    for bindings, score in _branches(sorted(program.nodes), env, 1.0, percepts):
        ctx = bindings[context_vars[0]] if context_vars else None
        solutions.append(Solution(bindings, score, ctx))
    solutions.sort(key=_solution_key)
    return solutions

