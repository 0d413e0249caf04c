"""A small bidirectional construction grammar for English motion clauses.

One inventory of constructions serves both directions. In production a
transient structure is seeded with the program's binds and nodes; lexical
constructions turn binds into word units, functional constructions give
each word its class and claim the operations it expresses, and phrasal
constructions group adjacent constituents and fix word order. Parsing runs
the same constructions the other way: stems become word units with fresh
variables, word classes add the operations, and phrases unify the variables
of their constituents.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field, replace
from importlib import resources
from typing import Callable, Iterable, Sequence

from .semantics.evaluation import PROFILE_FOR_RELATION
from .semantics.program import BindStatement, CogOpNode, IrlProgram, SemEntity, canonicalize


class Unexpressible(Exception):
    """Part of the program has no construction that can express it."""


class Unparseable(Exception):
    """Not a single token of the input was recognized."""


class UnknownTokenWarning(UserWarning):
    pass


@dataclass(frozen=True)
class Construction:
    name: str
    kind: str                       # lexical | functional | phrasal | multiword
    stem: str | None = None         # lexical and multiword
    category: str | None = None     # semantic category of the bind it handles
    value: str | None = None        # bound value (lexical), relation (functional)
    word_class: str | None = None   # functional
    left: str | None = None         # phrasal constituents
    right: str | None = None
    parse_only: bool = False

    def __post_init__(self):
        if self.kind not in ("lexical", "functional", "phrasal", "multiword"):
            raise ValueError(f"construction {self.name}: unknown kind {self.kind!r}")
        if self.kind == "functional" and self.word_class not in _WORD_CLASSES:
            raise ValueError(f"construction {self.name}: unknown word class {self.word_class!r}")
        if self.kind == "phrasal" and self.name not in _PHRASES:
            raise ValueError(f"construction {self.name}: no phrase schema")

    @property
    def stem_tokens(self) -> tuple[str, ...]:
        return tuple(self.stem.split()) if self.stem else ()


@dataclass(frozen=True)
class Unit:
    name: str
    meaning: tuple = ()             # binds and nodes this unit expresses
    args: tuple = ()                # sorted (role, variable) pairs
    stem: str | None = None
    category: str | None = None     # category of the lexical bind
    value: str | None = None
    word_class: str | None = None
    phrase: str | None = None
    subunits: tuple[str, ...] = ()
    parent: str | None = None
    span: tuple[int, int] | None = None   # token positions, parse only
    tokens: tuple[str, ...] = ()
    ordered: bool = True            # False until a multiword stem is ordered
    applied: frozenset = frozenset()

    def arg(self, role: str) -> str | None:
        return dict(self.args).get(role)

    @property
    def constituent(self) -> str | None:
        return self.phrase or self.word_class


@dataclass
class TransientStructure:
    units: dict[str, Unit] = field(default_factory=dict)
    meaning: frozenset = frozenset()    # production: the full program
    covered: frozenset = frozenset()    # production: elements already expressed
    tokens: tuple[str, ...] = ()        # parse: the input
    consumed: frozenset = frozenset()   # parse: positions claimed by lexical units
    subst: dict = field(default_factory=dict)   # parse: variable unification
    counter: int = 0
    diagnostics: list = field(default_factory=list)

    def copy(self) -> "TransientStructure":
        return replace(self, units=dict(self.units), subst=dict(self.subst),
                       diagnostics=list(self.diagnostics))

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"?{base}-{self.counter}"

    def add(self, unit: Unit):
        self.units[unit.name] = unit

    def top_level(self) -> list[Unit]:
        return [u for u in self.units.values() if u.parent is None]

    def find(self, var: str) -> str:
        while var in self.subst:
            var = self.subst[var]
        return var

    def unify(self, a: str, b: str):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.subst[a] = b

    def token_count(self) -> int:
        return sum(len(u.tokens) for u in self.units.values() if u.stem is not None)


@dataclass(frozen=True)
class Utterance:
    tokens: tuple[str, ...]
    word_classes: tuple[str, ...] = ()

    @classmethod
    def from_text(cls, text: str) -> "Utterance":
        return cls(tuple(text.lower().split()))

    def __str__(self):
        return " ".join(self.tokens)


# -- schemas -------------------------------------------------------------------
# Functional constructions: the operations a word of each class expresses.
# "$ref" is the variable of the word's own bind; other $-names are local.

_WORD_CLASSES: dict[str, dict] = {
    "determiner": {"nodes": [("apply-determiner", ("$out", "$in", "$ref"))],
                   "args": ("out", "in")},
    "adjective": {"nodes": [("apply-color", ("$out", "$in", "$ref"))],
                  "args": ("out", "in")},
    "noun": {"nodes": [("apply-class", ("$out", "$ctx", "$ref"))],
             "args": ("out", "ctx")},
    "verb": {"nodes": [("apply-role", ("$out", "$events", "$mover", "$ref")),
                       ("apply-event", ("$events", "$ctx"))],
             "args": ("out", "mover", "ctx")},
    "preposition": {"nodes": [("apply-dynamic-spatial-relation", ("$out", "$profiled", "$landmark", "$ref")),
                              ("apply-profile", ("$profiled", "$in", "$profile"))],
                    "binds": [("$profile", "event-profile")],
                    "args": ("out", "in", "landmark")},
}

# Phrasal constructions: resulting phrase, variables shared between the
# constituents, and the roles the phrase exposes.
_PHRASES: dict[str, dict] = {
    "adjective-noun": {"phrase": "nominal", "links": [("left", "in", "right", "out")],
                       "args": {"out": ("left", "out"), "ctx": ("right", "ctx")}},
    "determined-np": {"phrase": "np", "links": [("left", "in", "right", "out")],
                      "args": {"out": ("left", "out"), "ctx": ("right", "ctx")}},
    "prepositional-phrase": {"phrase": "pp", "links": [("left", "landmark", "right", "out")],
                             "args": {"out": ("left", "out"), "in": ("left", "in"),
                                      "ctx": ("right", "ctx")}},
    "verb-phrase": {"phrase": "vp", "links": [("right", "in", "left", "out"),
                                             ("right", "ctx", "left", "ctx")],
                    "args": {"out": ("right", "out"), "mover": ("left", "mover"),
                             "ctx": ("left", "ctx")}},
    "clause": {"phrase": "clause", "links": [("left", "out", "right", "mover"),
                                            ("left", "ctx", "right", "ctx")],
               "args": {"out": ("right", "out"), "ctx": ("right", "ctx")},
               "context": True},
}

# constituent labels accepted in a phrasal slot
_FILLS = {"nominal": ("nominal", "noun")}


def _fits(unit: Unit, label: str) -> bool:
    return unit.constituent in _FILLS.get(label, (label,))


def _profile_value(c: Construction) -> str:
    return PROFILE_FOR_RELATION[c.value]


# -- manifest ------------------------------------------------------------------

def load_grammar(text: str | None = None) -> tuple[Construction, ...]:
    """Constructions from manifest text, or the shipped inventory by default."""
    if text is None:
        text = resources.files("dynspatial.data").joinpath("grammar.txt").read_text("utf-8")
    out = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        cols = [c.strip() for c in line.split("|")]
        name, kind, rest = cols[0], cols[1], cols[2:]
        flags = {c for c in rest if c == "parse-only"}
        rest = [c for c in rest if c not in flags]
        try:
            if kind == "lexical":
                stem, category, value = rest
                SemEntity(category, value)
                c = Construction(name, kind, stem=stem, category=category, value=value,
                                 parse_only=bool(flags))
            elif kind == "functional":
                c = Construction(name, kind, word_class=rest[0], category=rest[1],
                                 value=rest[2] if len(rest) > 2 else None)
            elif kind == "phrasal":
                c = Construction(name, kind, left=rest[0], right=rest[1])
            elif kind == "multiword":
                c = Construction(name, kind, stem=rest[0])
            else:
                raise ValueError(f"unknown kind {kind!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"grammar manifest line {lineno}: {exc}") from None
        out.append(c)
    names = [c.name for c in out]
    if len(set(names)) != len(names):
        raise ValueError("grammar manifest repeats a construction name")
    return tuple(out)


_DEFAULT: tuple[Construction, ...] | None = None


def default_grammar() -> tuple[Construction, ...]:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_grammar()
    return _DEFAULT


_LAYERS = {"lexical": 0, "functional": 1, "multiword": 2, "phrasal": 2}
_PARSE_LAYERS = {"multiword": 0, "lexical": 1, "functional": 2, "phrasal": 3}


# -- application ---------------------------------------------------------------

def _match_templates(templates, binds, pool, env):
    """Backtracking match of node and bind templates against ``pool``."""
    if not templates and not binds:
        yield env
        return
    if templates:
        op, pattern = templates[0]
        for node in sorted(x for x in pool if isinstance(x, CogOpNode) and x.op == op):
            new = dict(env)
            if all(new.setdefault(p, a) == a for p, a in zip(pattern, node.args)):
                yield from _match_templates(templates[1:], binds, pool - {node}, {**new, ("node", op): node})
        return
    (symbol, category, value), rest = binds[0], binds[1:]
    for b in pool:
        if (isinstance(b, BindStatement) and b.variable == env.get(symbol)
                and b.entity == SemEntity(category, value)):
            yield from _match_templates((), rest, pool - {b}, {**env, ("bind", symbol): b})


def _lexical(ts: TransientStructure, c: Construction, direction: str):
    if direction == "produce":
        entity = SemEntity(c.category, c.value)
        for b in sorted(b for b in ts.meaning - ts.covered if isinstance(b, BindStatement)):
            if b.entity == entity:
                out = ts.copy()
                name = f"{c.name}-{out.counter + 1}"
                out.counter += 1
                tokens = c.stem_tokens
                out.add(Unit(name, (b,), (("ref", b.variable),), c.stem, c.category, c.value,
                             tokens=tokens, ordered=len(tokens) == 1,
                             applied=frozenset({c.name})))
                out.covered = ts.covered | {b}
                return out
        return None
    tokens = c.stem_tokens
    if len(tokens) > 1:
        # multiword stems arrive as a grouped form unit
        for u in sorted(ts.units.values(), key=lambda u: u.name):
            if u.stem == c.stem and u.category is None and u.span is not None:
                out = ts.copy()
                var = out.fresh(c.value)
                out.add(replace(u, meaning=(BindStatement(var, SemEntity(c.category, c.value)),),
                                args=(("ref", var),), category=c.category, value=c.value,
                                applied=u.applied | {c.name}))
                return out
        return None
    for i, tok in enumerate(ts.tokens):
        if tok == tokens[0] and i not in ts.consumed:
            out = ts.copy()
            var = out.fresh(c.value)
            out.add(Unit(f"{c.name}-{i}", (BindStatement(var, SemEntity(c.category, c.value)),),
                         (("ref", var),), c.stem, c.category, c.value, span=(i, i + 1),
                         tokens=tokens, applied=frozenset({c.name})))
            out.consumed = ts.consumed | {i}
            return out
    return None


def _functional(ts: TransientStructure, c: Construction, direction: str):
    schema = _WORD_CLASSES[c.word_class]
    for u in sorted(ts.units.values(), key=lambda u: u.name):
        if u.category != c.category or (c.value is not None and u.value != c.value):
            continue
        if u.word_class is not None:
            if u.word_class != c.word_class:
                ts.diagnostics.append(f"{c.name}: {u.name} already has word class {u.word_class}")
            continue
        binds = [(s, cat, _profile_value(c)) for s, cat in schema.get("binds", ())]
        if direction == "produce":
            pool = frozenset(ts.meaning - ts.covered)
            env = next(_match_templates(schema["nodes"], binds, pool, {"$ref": u.arg("ref")}), None)
            if env is None:
                continue
            claimed = tuple(v for k, v in env.items() if isinstance(k, tuple))
            out = ts.copy()
            out.covered = ts.covered | set(claimed)
        else:
            out = ts.copy()
            env = {"$ref": u.arg("ref")}
            claimed = []
            for op, pattern in schema["nodes"]:
                for p in pattern:
                    if p not in env:
                        env[p] = out.fresh(p[1:])
                claimed.append(CogOpNode(op, tuple(env[p] for p in pattern)))
            for s, cat, val in binds:
                claimed.append(BindStatement(env[s], SemEntity(cat, val)))
            claimed = tuple(claimed)
        args = tuple(sorted({("ref", u.arg("ref"))} | {(r, env["$" + r]) for r in schema["args"]}))
        out.add(replace(u, meaning=u.meaning + claimed, args=args, word_class=c.word_class,
                        applied=u.applied | {c.name}))
        return out
    return None


def _multiword(ts: TransientStructure, c: Construction, direction: str):
    tokens = c.stem_tokens
    if direction == "produce":
        for u in sorted(ts.units.values(), key=lambda u: u.name):
            if u.stem == c.stem and not u.ordered:
                out = ts.copy()
                out.add(replace(u, ordered=True, applied=u.applied | {c.name}))
                return out
        return None
    n = len(tokens)
    for i in range(len(ts.tokens) - n + 1):
        span = set(range(i, i + n))
        if tuple(ts.tokens[i:i + n]) == tokens and not span & ts.consumed:
            out = ts.copy()
            out.add(Unit(f"{c.name}-{i}", stem=c.stem, span=(i, i + n), tokens=tokens,
                         applied=frozenset({c.name})))
            out.consumed = ts.consumed | span
            return out
    return None


def _phrasal(ts: TransientStructure, c: Construction, direction: str):
    schema = _PHRASES[c.name]
    tops = sorted(ts.top_level(), key=lambda u: u.name)
    for left, right in itertools.permutations(tops, 2):
        if not (_fits(left, c.left) and _fits(right, c.right)):
            continue
        sides = {"left": left, "right": right}
        context = None
        if direction == "produce":
            if not all(sides[a].arg(ra) == sides[b].arg(rb) for a, ra, b, rb in schema["links"]):
                continue
            out = ts.copy()
            claimed: tuple = ()
            if schema.get("context"):
                ctx = sides[schema["args"]["ctx"][0]].arg("ctx")
                context = CogOpNode("get-context", (ctx,))
                if context not in ts.meaning - ts.covered:
                    continue
                claimed = (context,)
                out.covered = ts.covered | {context}
        else:
            if left.span is None or right.span is None or left.span[1] != right.span[0]:
                continue
            out = ts.copy()
            for a, ra, b, rb in schema["links"]:
                out.unify(sides[a].arg(ra), sides[b].arg(rb))
            claimed = ()
            if schema.get("context"):
                claimed = (CogOpNode("get-context", (sides[schema["args"]["ctx"][0]].arg("ctx"),)),)
        name = f"{c.name}-{out.counter + 1}"
        out.counter += 1
        args = tuple(sorted((role, sides[side].arg(r)) for role, (side, r) in schema["args"].items()))
        span = (left.span[0], right.span[1]) if left.span and right.span else None
        out.add(Unit(name, claimed, args, phrase=schema["phrase"], subunits=(left.name, right.name),
                     span=span, applied=frozenset({c.name})))
        out.add(replace(left, parent=name))
        out.add(replace(right, parent=name))
        return out
    return None


_APPLY: dict[str, Callable] = {"lexical": _lexical, "functional": _functional,
                               "multiword": _multiword, "phrasal": _phrasal}


def apply_construction(ts: TransientStructure, c: Construction, direction: str) -> TransientStructure | None:
    """A new structure with ``c`` applied once, or None when it does not match.

    The input structure is left untouched (diagnostics aside); application only
    adds units and features.
    """
    if direction not in ("produce", "parse"):
        raise ValueError(f"direction must be 'produce' or 'parse', got {direction!r}")
    if direction == "produce" and c.parse_only:
        return None
    return _APPLY[c.kind](ts, c, direction)


def _run(ts: TransientStructure, grammar: Sequence[Construction], direction: str,
         trace: list | None = None) -> TransientStructure:
    layers = _LAYERS if direction == "produce" else _PARSE_LAYERS
    ordered = sorted(grammar, key=lambda c: layers[c.kind])
    progress = True
    while progress:
        progress = False
        for c in ordered:
            nxt = apply_construction(ts, c, direction)
            if nxt is not None:
                ts = nxt
                if trace is not None:
                    trace.append((c.name, ts.token_count()))
                progress = True
                break
    return ts


# -- production ----------------------------------------------------------------

def _linearize(ts: TransientStructure, unit: Unit) -> list[tuple[str, str]]:
    if unit.subunits:
        return [w for name in unit.subunits for w in _linearize(ts, ts.units[name])]
    if not unit.ordered:
        raise Unexpressible(f"unexpressible: no word order for {unit.stem!r}")
    return [(tok, unit.word_class) for tok in unit.tokens]


def produce(program: IrlProgram, grammar: Sequence[Construction] | None = None,
            trace: list | None = None) -> Utterance:
    """English clause expressing ``program``.

    ``trace``, when given, receives (construction, token count) after every
    application.
    """
    grammar = default_grammar() if grammar is None else grammar
    ts = TransientStructure(meaning=frozenset(program.binds) | frozenset(program.nodes))
    ts = _run(ts, grammar, "produce", trace)
    left = sorted(ts.meaning - ts.covered, key=lambda m: (isinstance(m, CogOpNode), str(m)))
    if left:
        raise Unexpressible(f"unexpressible: {left[0]}")
    tops = sorted(ts.top_level(), key=lambda u: u.name)
    if len(tops) != 1:
        stray = next((u for u in tops if u.phrase != "clause"), tops[0]) if tops else None
        what = stray.meaning[0] if stray and stray.meaning else "empty program"
        raise Unexpressible(f"unexpressible: {what}")
    words = _linearize(ts, tops[0])
    if any(cls is None for _, cls in words):
        raise Unexpressible(f"unexpressible: {words[0][0]}")
    return Utterance(tuple(w for w, _ in words), tuple(c for _, c in words))


# -- parsing -------------------------------------------------------------------

# categories tried for a word the grammar does not know
_HYPOTHESES = ("object-class", "color-category")


def _hypothesize(ts: TransientStructure, i: int, category: str) -> TransientStructure:
    out = ts.copy()
    var = out.fresh("unknown")
    out.add(Unit(f"unknown-{i}", (), (("ref", var),), ts.tokens[i], category, None,
                 span=(i, i + 1), tokens=(ts.tokens[i],)))
    out.consumed = ts.consumed | {i}
    return out


def _program(ts: TransientStructure) -> IrlProgram:
    nodes, binds = set(), set()
    for u in ts.units.values():
        for m in u.meaning:
            if isinstance(m, BindStatement):
                binds.add(BindStatement(ts.find(m.variable), m.entity))
            else:
                nodes.add(CogOpNode(m.op, tuple(ts.find(a) for a in m.args)))
    return IrlProgram(frozenset(nodes), frozenset(binds))


def parse_structure(utterance: Utterance | str, grammar: Sequence[Construction] | None = None) -> TransientStructure:
    """Transient structure after parsing, unknown tokens resolved."""
    grammar = default_grammar() if grammar is None else grammar
    if isinstance(utterance, str):
        utterance = Utterance.from_text(utterance)
    ts = _run(TransientStructure(tokens=tuple(t.lower() for t in utterance.tokens)), grammar, "parse")
    if not ts.consumed:
        raise Unparseable("unparseable: no known word in input")
    for i, tok in enumerate(ts.tokens):
        if i in ts.consumed:
            continue
        warnings.warn(f"unknown token {tok!r}", UnknownTokenWarning, stacklevel=2)
        best = replace(ts.copy(), consumed=ts.consumed | {i})
        for category in _HYPOTHESES:
            trial = _run(_hypothesize(ts, i, category), grammar, "parse")
            if len(trial.top_level()) < len(best.top_level()):
                best = trial
        ts = best
    return ts


def parse(utterance: Utterance | str, grammar: Sequence[Construction] | None = None) -> IrlProgram:
    """Program underlying ``utterance``, in canonical variable naming.

    Unknown words are skipped with a warning, or read as a noun or adjective
    of unknown meaning when that lets the rest of the clause come together;
    either way the result is a partial program.
    """
    return canonicalize(_program(parse_structure(utterance, grammar)))


# -- covered fragment ----------------------------------------------------------

FRAGMENT_COLORS = ("blue", "green", "red", "white", "yellow")
FRAGMENT_NOUNS = ("block", "box", "region")
FRAGMENT_RELATIONS = ("across", "into", "out-of")


def enumerate_fragment(landmark: tuple[str | None, str] = ("red", "region")) -> Iterable[IrlProgram]:
    """Every subject color, subject noun and relation, against one landmark."""
    from .semantics.program import clause_program

    for color, noun, relation in itertools.product(FRAGMENT_COLORS, FRAGMENT_NOUNS, FRAGMENT_RELATIONS):
        yield clause_program(color, noun, relation, *landmark)


def render(program: IrlProgram, grammar: Sequence[Construction] | None = None) -> str:
    return str(produce(program, grammar))


__all__ = ["Construction", "TransientStructure", "Unit", "Utterance", "Unexpressible", "Unparseable",
           "UnknownTokenWarning", "apply_construction", "default_grammar", "enumerate_fragment",
           "load_grammar", "parse", "parse_structure", "produce", "render"]
