"""IRL-style semantic programs: representation, validation, s-expression I/O."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

CATEGORY_VALUES: dict[str, tuple[str, ...]] = {
    "object-class": ("block", "box", "region", "robot"),
    "color-category": ("blue", "green", "red", "white", "yellow"),
    "dynamic-spatial-relation": ("across", "into", "out-of"),
    "selector": ("unique",),
    "event-profile": ("goal", "path", "source"),
    "participant-role": ("mover",),
}

# structural value types flowing between operations
CONTEXT, OBJECTS, EVENTS = "context", "objects", "events"

# argument types per operation, output first
OP_SIGNATURES: dict[str, tuple[str, ...]] = {
    "get-context": (CONTEXT,),
    "apply-class": (OBJECTS, CONTEXT, "object-class"),
    "apply-color": (OBJECTS, OBJECTS, "color-category"),
    "apply-determiner": (OBJECTS, OBJECTS, "selector"),
    "apply-event": (EVENTS, CONTEXT),
    "apply-role": (EVENTS, EVENTS, OBJECTS, "participant-role"),
    "apply-profile": (EVENTS, EVENTS, "event-profile"),
    "apply-dynamic-spatial-relation": (EVENTS, EVENTS, OBJECTS, "dynamic-spatial-relation"),
}

# base names for canonical variables produced by each operation
_OUTPUT_NAMES = {
    "get-context": "ctx",
    "apply-class": "class-set",
    "apply-color": "color-set",
    "apply-determiner": "referent",
    "apply-event": "events",
    "apply-role": "role-events",
    "apply-profile": "profiled",
    "apply-dynamic-spatial-relation": "dsr-events",
}


class ProgramError(ValueError):
    """Malformed program text or structure."""


@dataclass(frozen=True, order=True)
class SemEntity:
    category: str
    value: str

    def __post_init__(self):
        legal = CATEGORY_VALUES.get(self.category)
        if legal is None:
            raise ProgramError(f"unknown category {self.category!r}")
        if self.value not in legal:
            raise ProgramError(f"{self.value!r} is not a legal {self.category}")


@dataclass(frozen=True, order=True)
class BindStatement:
    variable: str
    entity: SemEntity

    def __str__(self):
        return f"(bind {self.entity.category} {self.variable} {self.entity.value})"


@dataclass(frozen=True, order=True)
class CogOpNode:
    op: str
    args: tuple[str, ...]

    @property
    def output(self) -> str:
        return self.args[0]

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.args[1:]

    def __str__(self):
        return f"({self.op} {' '.join(self.args)})"


@dataclass(frozen=True)
class IrlProgram:
    nodes: frozenset = field(default_factory=frozenset)
    binds: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        object.__setattr__(self, "binds", frozenset(self.binds))

    def __len__(self):
        return len(self.nodes)

    def __bool__(self):
        return bool(self.nodes or self.binds)

    def __str__(self):
        return serialize(self)

    @property
    def variables(self) -> set[str]:
        out = {b.variable for b in self.binds}
        for n in self.nodes:
            out.update(n.args)
        return out

    def producers(self) -> dict[str, object]:
        prod: dict[str, object] = {}
        for b in self.binds:
            prod[b.variable] = b
        for n in self.nodes:
            prod.setdefault(n.output, n)
        return prod

    def rename(self, mapping: Mapping[str, str]) -> "IrlProgram":
        return IrlProgram(
            frozenset(CogOpNode(n.op, tuple(mapping.get(a, a) for a in n.args)) for n in self.nodes),
            frozenset(BindStatement(mapping.get(b.variable, b.variable), b.entity) for b in self.binds))

    def merge(self, other: "IrlProgram") -> "IrlProgram":
        return IrlProgram(self.nodes | other.nodes, self.binds | other.binds)

    def bind_of(self, variable: str) -> SemEntity | None:
        for b in self.binds:
            if b.variable == variable:
                return b.entity
        return None


def variable_types(program: IrlProgram) -> dict[str, str]:
    """Type of every variable as implied by operation signatures and binds."""
    types: dict[str, str] = {}
    for b in program.binds:
        types[b.variable] = b.entity.category
    for n in program.nodes:
        sig = OP_SIGNATURES.get(n.op)
        if sig is None or len(sig) != len(n.args):
            continue
        for var, typ in zip(n.args, sig):
            types.setdefault(var, typ)
    return types


def open_variables(program: IrlProgram) -> list[str]:
    """Variables consumed by some node but produced by nothing, sorted."""
    produced = set(program.producers())
    consumed = {a for n in program.nodes for a in n.inputs}
    return sorted(consumed - produced)


def dangling_outputs(program: IrlProgram) -> list[str]:
    """Node outputs that no other node consumes."""
    consumed = {a for n in program.nodes for a in n.inputs}
    return sorted(n.output for n in program.nodes if n.output not in consumed)


def check_program(program: IrlProgram, complete: bool = True) -> None:
    """Raise ProgramError unless ``program`` is well formed.

    With ``complete=False`` open inputs and disconnected parts are tolerated
    (parser output awaiting completion).
    """
    produced: dict[str, str] = {}
    seen_bind = set()
    for b in program.binds:
        if not b.variable.startswith("?"):
            raise ProgramError(f"variable {b.variable!r} must start with '?'")
        if b.variable in seen_bind:
            raise ProgramError(f"variable {b.variable} bound twice")
        seen_bind.add(b.variable)
        produced[b.variable] = "bind"
    for n in program.nodes:
        sig = OP_SIGNATURES.get(n.op)
        if sig is None:
            raise ProgramError(f"unknown op {n.op!r}")
        if len(n.args) != len(sig):
            raise ProgramError(f"{n.op} takes {len(sig)} arguments, got {len(n.args)}")
        for a in n.args:
            if not a.startswith("?"):
                raise ProgramError(f"variable {a!r} must start with '?'")
        if n.output in produced:
            raise ProgramError(f"variable {n.output} produced more than once")
        produced[n.output] = n.op
    types: dict[str, str] = {b.variable: b.entity.category for b in program.binds}
    for n in program.nodes:
        for var, typ in zip(n.args, OP_SIGNATURES[n.op]):
            if types.setdefault(var, typ) != typ:
                raise ProgramError(f"variable {var} used as {types[var]} and {typ}")
    if complete:
        missing = open_variables(program)
        if missing:
            raise ProgramError(f"unbound input variables {missing}")
    _check_acyclic(program)
    if complete and not _connected(program):
        raise ProgramError("variable-sharing graph is not connected")


def _check_acyclic(program: IrlProgram) -> None:
    producer = {n.output: n for n in program.nodes}
    state: dict[str, int] = {}

    def visit(node: CogOpNode):
        mark = state.get(node.output)
        if mark == 1:
            raise ProgramError(f"cycle through {node.output}")
        if mark == 2:
            return
        state[node.output] = 1
        for a in node.inputs:
            if a in producer:
                visit(producer[a])
        state[node.output] = 2

    for n in sorted(program.nodes):
        visit(n)


def _connected(program: IrlProgram) -> bool:
    items = [set(n.args) for n in program.nodes] + [{b.variable} for b in program.binds]
    if not items:
        return True
    reached = set(items[0])
    remaining = items[1:]
    changed = True
    while changed and remaining:
        changed = False
        for group in list(remaining):
            if group & reached:
                reached |= group
                remaining.remove(group)
                changed = True
    return not remaining


# -- s-expression text -------------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_program(text: str) -> IrlProgram:
    """Read ``(bind <category> ?var <value>)`` and ``(<op> ?out ?in ...)`` forms."""
    tokens = _TOKEN.findall(text)
    forms, stack = [], []
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if not stack:
                raise ProgramError("unbalanced ')'")
            form = stack.pop()
            if stack:
                stack[-1].append(form)
            else:
                forms.append(form)
        elif not stack:
            raise ProgramError(f"stray token {tok!r} outside a form")
        else:
            stack[-1].append(tok)
    if stack:
        raise ProgramError("unbalanced '('")
    # tolerate one outer wrapping list: ((bind ...) (op ...))
    if len(forms) == 1 and forms[0] and all(isinstance(f, list) for f in forms[0]):
        forms = forms[0]
    nodes, binds = [], []
    for form in forms:
        if not form or any(isinstance(x, list) for x in form):
            raise ProgramError(f"malformed form {form!r}")
        if form[0] == "bind":
            if len(form) != 4:
                raise ProgramError(f"bind needs category, variable and value: {form!r}")
            binds.append(BindStatement(form[2], SemEntity(form[1], form[3])))
        else:
            nodes.append(CogOpNode(form[0], tuple(form[1:])))
    return IrlProgram(frozenset(nodes), frozenset(binds))


def serialize(program: IrlProgram) -> str:
    """Binds before nodes, each group sorted by text."""
    lines = sorted(str(b) for b in program.binds) + sorted(str(n) for n in program.nodes)
    return "\n".join(lines)


def _shape(var: str, producer: dict, memo: dict) -> str:
    if var in memo:
        return memo[var]
    memo[var] = "?"  # guards cycles
    p = producer.get(var)
    if p is None:
        s = "open"
    elif isinstance(p, BindStatement):
        s = f"bind:{p.entity.category}:{p.entity.value}"
    else:
        s = f"{p.op}(" + ",".join(_shape(a, producer, memo) for a in p.inputs) + ")"
    memo[var] = s
    return s


def canonicalize(program: IrlProgram) -> IrlProgram:
    """Rename variables independently of their original names.

    Variables are discovered depth-first from the program's roots (outputs
    nobody consumes), following producers through their inputs in argument
    order, and named after what produces them.
    """
    producer = program.producers()
    consumed = {a for n in program.nodes for a in n.inputs}
    memo: dict[str, str] = {}
    roots = [v for v in producer if v not in consumed]
    roots.sort(key=lambda v: (isinstance(producer[v], BindStatement), _shape(v, producer, memo)))
    counters: dict[str, int] = {}
    names: dict[str, str] = {}

    def fresh(base: str) -> str:
        counters[base] = counters.get(base, 0) + 1
        return f"?{base}-{counters[base]}"

    def visit(var: str) -> None:
        if var in names:
            return
        p = producer.get(var)
        if p is None:
            names[var] = fresh("open")
            return
        if isinstance(p, BindStatement):
            names[var] = fresh(p.entity.value)
            return
        names[var] = fresh(_OUTPUT_NAMES.get(p.op, "var"))
        for a in p.inputs:
            visit(a)

    for r in roots:
        visit(r)
    for v in sorted(program.variables - set(names)):  # only reachable through cycles
        visit(v)
    return program.rename(names)


def canonical_text(program: IrlProgram) -> str:
    return serialize(canonicalize(program))


def equivalent(p: IrlProgram, q: IrlProgram) -> bool:
    return canonical_text(p) == canonical_text(q)


def make_binds(pairs: Iterable[tuple[str, str, str]]) -> frozenset:
    return frozenset(BindStatement(v, SemEntity(c, val)) for c, v, val in pairs)


def clause_program(mover_color: str | None, mover_class: str, relation: str,
                   landmark_color: str | None, landmark_class: str) -> IrlProgram:
    """Program for "the [color] <class> moves <relation> the [color] <class>".

    A color of None leaves the noun phrase without an ``apply-color`` step.
    """
    from .evaluation import PROFILE_FOR_RELATION

    parts = ["(get-context ?ctx)",
             "(apply-event ?events ?ctx)",
             "(apply-role ?moved ?events ?mover ?role) (bind participant-role ?role mover)",
             "(apply-profile ?profiled ?moved ?profile)",
             f"(bind event-profile ?profile {PROFILE_FOR_RELATION[relation]})",
             "(apply-dynamic-spatial-relation ?out ?profiled ?landmark ?rel)",
             f"(bind dynamic-spatial-relation ?rel {relation})"]
    for tag, color, cls in (("mover", mover_color, mover_class),
                            ("landmark", landmark_color, landmark_class)):
        parts.append(f"(apply-class ?{tag}-set ?ctx ?{tag}-class)"
                     f" (bind object-class ?{tag}-class {cls})")
        source = f"?{tag}-set"
        if color is not None:
            parts.append(f"(apply-color ?{tag}-colored ?{tag}-set ?{tag}-color)"
                         f" (bind color-category ?{tag}-color {color})")
            source = f"?{tag}-colored"
        parts.append(f"(apply-determiner ?{tag} {source} ?{tag}-selector)"
                     f" (bind selector ?{tag}-selector unique)")
    return parse_program(" ".join(parts))
