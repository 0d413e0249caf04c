import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dynspatial.grammar import enumerate_fragment
from dynspatial.semantics.program import (IrlProgram, ProgramError, SemEntity, canonical_text, canonicalize,
                                          check_program, clause_program, dangling_outputs, equivalent,
                                          open_variables, parse_program, serialize)

EXAMPLE = clause_program("yellow", "block", "across", "red", "region")


def test_example_program_shape():
    check_program(EXAMPLE)
    assert len(EXAMPLE.nodes) == 11 and len(EXAMPLE.binds) == 9
    assert dangling_outputs(EXAMPLE) == ["?out"]


def test_text_round_trip():
    assert parse_program(serialize(EXAMPLE)) == EXAMPLE
    wrapped = "(" + " ".join(str(n) for n in EXAMPLE.nodes) + " " + " ".join(str(b) for b in EXAMPLE.binds) + ")"
    assert parse_program(wrapped) == EXAMPLE


@pytest.mark.parametrize("text, message", [
    ("(frobnicate ?x)", "unknown op"),
    ("(get-context ?c ?d)", "takes 1"),
    ("(get-context ?c) (get-context ?c)", None),
    ("(get-context ?c) (apply-event ?c ?c)", "more than once"),
    ("(get-context ?c) (apply-class ?s ?c ?k) (bind color-category ?k red)", "used as"),
    ("(get-context ?c) (apply-class ?s ?c ?k)", "unbound"),
    ("(apply-color ?a ?b ?k) (apply-color ?b ?a ?k) (bind color-category ?k red)", "cycle"),
    ("(get-context ?c) (get-context ?d)", "connected"),
    ("(bind object-class ?k robot) (bind object-class ?k box)", "bound twice"),
])
def test_check_program_errors(text, message):
    program = parse_program(text)
    if message is None:
        check_program(program)   # the set of nodes collapses duplicates
        return
    with pytest.raises(ProgramError, match=message):
        check_program(program)


@pytest.mark.parametrize("text", ["(get-context ?c", "(get-context ?c))", "get-context",
                                  "(bind color-category ?k purple)", "(bind ?k)"])
def test_parse_errors(text):
    with pytest.raises(ProgramError):
        parse_program(text)


def test_sem_entity_validation():
    with pytest.raises(ProgramError):
        SemEntity("shape", "round")


def test_partial_programs():
    partial = parse_program("(apply-class ?s ?c ?k) (bind object-class ?k block)")
    check_program(partial, complete=False)
    assert open_variables(partial) == ["?c"]


def test_canonical_naming():
    text = canonical_text(EXAMPLE)
    assert "(apply-dynamic-spatial-relation ?dsr-events-1 ?profiled-1 ?referent-2 ?across-1)" in text
    assert "(get-context ?ctx-1)" in text


def _renamed(program: IrlProgram, rng: random.Random) -> IrlProgram:
    names = sorted(program.variables)
    shuffled = [f"?v{i}" for i in range(len(names))]
    rng.shuffle(shuffled)
    return program.rename(dict(zip(names, shuffled)))


@settings(max_examples=30)
@given(st.integers(0, 44), st.randoms(use_true_random=False))
def test_canonical_form_ignores_names(index, rng):
    program = list(enumerate_fragment())[index]
    other = _renamed(program, rng)
    assert canonicalize(other) == canonicalize(program)
    assert equivalent(other, program)


def test_equivalence_sees_structure():
    swapped = clause_program("red", "block", "across", "yellow", "region")
    assert not equivalent(swapped, EXAMPLE)
    assert len({canonical_text(p) for p in enumerate_fragment()}) == 45
