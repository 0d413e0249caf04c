"""Best-first search over IRL programs built from chunks.

Conceptualization grows programs from a root chunk until one discriminates
the topic scene. Interpretation completes a (possibly partial) parsed
program until it has a solution in at least one scene. Both share the same
expansion step: close the first open variable, either by binding a semantic
entity, by attaching a chunk whose output has the right type, or, for the
context, by reusing the single ``get-context``.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from ..geometry import ScenePair
from ..qualitative import AbstractionParams
from .colors import ColorPrototypes, classify_color
from .evaluation import (OPERATIONS, PROFILE_FOR_RELATION, Percepts, Solution, _ATOM_FOR_RELATION,
                         evaluate)
from .program import (CATEGORY_VALUES, CONTEXT, EVENTS, OBJECTS, OP_SIGNATURES, BindStatement,
                      CogOpNode, IrlProgram, ProgramError, SemEntity, canonical_text, canonicalize,
                      check_program, dangling_outputs, open_variables, parse_program, variable_types)

MAX_NODES = 12
MAX_EXPANSIONS = 5000

# slots are filled in this order so the relation is known before its profile
_SLOT_ORDER = ("dynamic-spatial-relation", "object-class", "color-category", "selector",
               "participant-role", "event-profile", EVENTS, OBJECTS, CONTEXT)


class Indiscriminable(Exception):
    """No program within budget singles out the topic scene."""


class Uninterpretable(Exception):
    """No completion of the program has a solution in either scene."""


@dataclass(frozen=True)
class Chunk:
    """A program fragment with an open output and open structural inputs."""

    name: str
    fragment: IrlProgram
    output: str
    root: bool = False

    def __post_init__(self):
        check_program(self.fragment, complete=False)
        if self.output not in self.fragment.producers():
            raise ProgramError(f"chunk {self.name}: output {self.output} is not produced")

    @property
    def output_type(self) -> str:
        return variable_types(self.fragment)[self.output]


def _chunk(name: str, text: str, output: str, root: bool = False) -> Chunk:
    return Chunk(name, parse_program(text), output, root)


def default_chunks() -> list[Chunk]:
    return [
        _chunk("context", "(get-context ?ctx)", "?ctx"),
        _chunk("determined-np",
               "(apply-class ?set ?ctx ?class) (apply-color ?colored ?set ?color)"
               " (apply-determiner ?ref ?colored ?selector)", "?ref"),
        _chunk("plain-determined-np",
               "(apply-class ?set ?ctx ?class) (apply-determiner ?ref ?set ?selector)", "?ref"),
        _chunk("motion-event",
               "(apply-event ?ev ?ctx) (apply-role ?moved ?ev ?mover ?role)", "?moved"),
        _chunk("dynamic-spatial-relation",
               "(apply-profile ?profiled ?in ?profile)"
               " (apply-dynamic-spatial-relation ?out ?profiled ?landmark ?relation)",
               "?out", root=True),
    ]


# -- expansion ---------------------------------------------------------------

def _fresh(taken: set[str], base: str) -> str:
    for k in itertools.count(1):
        name = f"?{base.lstrip('?')}-{k}"
        if name not in taken:
            taken.add(name)
            return name


def _instantiate(chunk: Chunk, taken: set[str]) -> tuple[IrlProgram, str]:
    mapping = {v: _fresh(taken, v.split("-")[0]) for v in sorted(chunk.fragment.variables)}
    return chunk.fragment.rename(mapping), mapping[chunk.output]


def _consumer_relation(program: IrlProgram, var: str) -> str | None:
    """Relation bound on the dsr node whose profiled input is ``var``'s consumer."""
    for n in program.nodes:
        if n.op == "apply-profile" and n.args[2] == var:
            for m in program.nodes:
                if m.op == "apply-dynamic-spatial-relation" and m.args[1] == n.output:
                    entity = program.bind_of(m.args[3])
                    return entity.value if entity else None
    return None


Candidates = Callable[[IrlProgram, str, str], Sequence[str]]


def _all_values(program: IrlProgram, var: str, category: str) -> Sequence[str]:
    if category == "event-profile":
        relation = _consumer_relation(program, var)
        if relation is not None:
            return [PROFILE_FOR_RELATION[relation]]
    return CATEGORY_VALUES[category]


def _topic_values(percepts: Percepts, topic: str) -> Candidates:
    scene = percepts.scenes[topic]
    present = {
        "object-class": sorted(set(scene.kinds.values()) & set(CATEGORY_VALUES["object-class"])),
        "color-category": sorted({classify_color(c, percepts.prototypes)
                                  for c in scene.colors.values() if c is not None}),
        "dynamic-spatial-relation": sorted(r for r, p in _ATOM_FOR_RELATION.items()
                                           if any(a.predicate == p for a in scene.atoms)),
    }

    def candidates(program: IrlProgram, var: str, category: str) -> Sequence[str]:
        if category in present:
            return present[category]
        return _all_values(program, var, category)

    return candidates


def _successors(program: IrlProgram, var: str, typ: str, chunks: Sequence[Chunk],
                candidates: Candidates, allow_dangling: bool) -> Iterable[IrlProgram]:
    if typ in CATEGORY_VALUES:
        for value in candidates(program, var, typ):
            yield IrlProgram(program.nodes, program.binds | {BindStatement(var, SemEntity(typ, value))})
        return
    taken = set(program.variables)
    types = variable_types(program)
    if typ == CONTEXT:
        existing = [n.output for n in program.nodes if n.op == "get-context"]
        if existing:
            yield program.rename({var: existing[0]})
            return
        # one context per program: every open context variable joins the new one
        same = {v: var for v in open_variables(program) if types.get(v) == CONTEXT}
        yield program.rename(same).merge(IrlProgram(frozenset({CogOpNode("get-context", (var,))})))
        return
    for chunk in chunks:
        if chunk.root or chunk.output_type != typ:
            continue
        fragment, out = _instantiate(chunk, taken)
        yield program.merge(fragment.rename({out: var}))
    if allow_dangling:
        for d in dangling_outputs(program):
            if types.get(d) == typ and d != var:
                yield program.rename({var: d})


def _consistent(program: IrlProgram, percepts: Percepts, scenes: Sequence[str]) -> bool:
    """True if every runnable operation succeeds in at least one of ``scenes``.

    Context variables (open or produced) are pinned to the scene under test.
    """
    types = variable_types(program)
    base = {b.variable: b.entity for b in program.binds}
    nodes = sorted(n for n in program.nodes if n.op != "get-context")
    for scene in scenes:
        env = dict(base)
        env.update({v: scene for v, t in types.items() if t == CONTEXT})
        ok, progress = True, True
        while ok and progress:
            progress = False
            for n in nodes:
                if n.output in env or not all(a in env for a in n.inputs):
                    continue
                outcomes = OPERATIONS[n.op](n.args, env, percepts)
                if not outcomes:
                    ok = False
                    break
                env[n.output] = outcomes[0][0]
                progress = True
        if ok:
            return True
    return False


def _next_open(program: IrlProgram) -> tuple[str, str] | None:
    types = variable_types(program)
    pending = open_variables(program)
    if not pending:
        return None
    var = min(pending, key=lambda v: (_SLOT_ORDER.index(types[v]), v))
    return var, types[var]


def _best_first(seeds: Iterable[IrlProgram], chunks: Sequence[Chunk], candidates: Candidates,
                goal: Callable[[IrlProgram], bool], percepts: Percepts, scenes: Sequence[str],
                allow_dangling: bool, max_nodes: int, max_expansions: int) -> IrlProgram | None:
    counter = itertools.count()
    heap = []
    for seed in seeds:
        heapq.heappush(heap, (len(seed.nodes), canonical_text(seed), next(counter), seed))
    seen = set()
    expansions = 0
    while heap:
        _, text, _, program = heapq.heappop(heap)
        if text in seen:
            continue
        seen.add(text)
        step = _next_open(program)
        if step is None:
            try:
                check_program(program)
            except ProgramError:
                continue
            if goal(program):
                return canonicalize(program)
            continue
        expansions += 1
        if expansions > max_expansions:
            return None
        for succ in _successors(program, *step, chunks, candidates, allow_dangling):
            if len(succ.nodes) > max_nodes:
                continue
            try:
                check_program(succ, complete=False)
            except ProgramError:
                continue
            if not _consistent(succ, percepts, scenes):
                continue
            heapq.heappush(heap, (len(succ.nodes), canonical_text(succ), next(counter), succ))
    return None


def _percepts(pair, params, prototypes) -> Percepts:
    return pair if isinstance(pair, Percepts) else Percepts.build(pair, params, prototypes)


def discriminates(solutions: Sequence[Solution], topic: str) -> bool:
    contexts = [s.context for s in solutions]
    return topic in contexts and all(c == topic for c in contexts)


def conceptualize(pair: ScenePair | Percepts, topic: str, chunks: Sequence[Chunk] | None = None,
                  budget: int = MAX_NODES, params: AbstractionParams | None = None,
                  prototypes: ColorPrototypes | None = None,
                  max_expansions: int = MAX_EXPANSIONS) -> IrlProgram:
    """Smallest program (then lexicographically first) that singles out ``topic``.

    Raises Indiscriminable when the node budget or expansion limit runs out.
    """
    if topic not in ("a", "b"):
        raise ValueError(f"topic must be 'a' or 'b', got {topic!r}")
    chunks = list(default_chunks() if chunks is None else chunks)
    percepts = _percepts(pair, params, prototypes)
    seeds = []
    for chunk in chunks:
        if chunk.root:
            fragment, _ = _instantiate(chunk, set())
            seeds.append(fragment)
    found = _best_first(seeds, chunks, _topic_values(percepts, topic),
                        lambda p: discriminates(evaluate(p, percepts), topic),
                        percepts, (topic,), False, budget, max_expansions)
    if found is None:
        raise Indiscriminable("indiscriminable: no discriminating program within budget")
    return found


def complete_program(program: IrlProgram, percepts: Percepts, chunks: Sequence[Chunk] | None = None,
                     budget: int = MAX_NODES, max_expansions: int = MAX_EXPANSIONS) -> IrlProgram | None:
    """First completion of ``program`` (in search order) with any solution."""
    chunks = list(default_chunks() if chunks is None else chunks)
    return _best_first([program], chunks, _all_values, lambda p: bool(evaluate(p, percepts)),
                       percepts, ("a", "b"), True, budget, max_expansions)


def interpret(program: IrlProgram, pair: ScenePair | Percepts, params: AbstractionParams | None = None,
              prototypes: ColorPrototypes | None = None, chunks: Sequence[Chunk] | None = None,
              budget: int = MAX_NODES) -> tuple[str, float]:
    """Scene index and score of the best solution of ``program`` on ``pair``.

    Partial programs are completed by the same chunk search used for
    conceptualization. Equal best scores in both scenes resolve to 'a'.
    """
    if not program:
        raise Uninterpretable("uninterpretable: empty program")
    percepts = _percepts(pair, params, prototypes)
    completed = complete_program(program, percepts, chunks, budget)
    if completed is None:
        raise Uninterpretable("uninterpretable: no completion has a solution")
    best = evaluate(completed, percepts)[0]
    return best.context, best.score
