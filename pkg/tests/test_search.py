import pytest

from dynspatial.geometry import ScenePair
from dynspatial.scenarios import discriminable_pairs
from dynspatial.semantics.evaluation import Percepts, evaluate
from dynspatial.semantics.program import IrlProgram, check_program, parse_program
from dynspatial.semantics.search import (Indiscriminable, complete_program, conceptualize, default_chunks,
                                         discriminates, interpret)


def test_crossing_topic_uses_across(crossing):
    program = conceptualize(crossing, "a")
    values = {b.entity.value for b in program.binds}
    assert "across" in values
    assert any(n.op == "apply-dynamic-spatial-relation" for n in program.nodes)
    assert len(program.nodes) <= 12


def test_identical_scenes_are_indiscriminable(crossing):
    same = ScenePair(crossing.scene_a, crossing.scene_a)
    with pytest.raises(Indiscriminable, match="indiscriminable"):
        conceptualize(same, "a")


def test_bad_topic(crossing):
    with pytest.raises(ValueError):
        conceptualize(crossing, "c")


def test_budget_too_small(crossing):
    with pytest.raises(Indiscriminable):
        conceptualize(crossing, "a", budget=6)


@pytest.mark.parametrize("pair", discriminable_pairs(6, seed=4), ids=lambda p: p.pair_id)
def test_conceptualization_replays(pair):
    percepts = Percepts.build(pair)
    for topic in "ab":
        program = conceptualize(percepts, topic)
        check_program(program)
        assert discriminates(evaluate(program, percepts), topic)
        assert interpret(program, percepts)[0] == topic


def test_conceptualize_is_deterministic(entering):
    assert conceptualize(entering, "b") == conceptualize(entering, "b")


def test_completion_fills_missing_class(crossing):
    percepts = Percepts.build(crossing)
    topic_program = conceptualize(percepts, "a")
    partial = IrlProgram(topic_program.nodes, frozenset(
        b for b in topic_program.binds if b.entity.category != "object-class" or b.entity.value != "block"))
    completed = complete_program(partial, percepts)
    assert completed is not None
    assert any(b.entity.value == "block" for b in completed.binds)


def test_chunks_are_well_formed():
    chunks = default_chunks()
    assert [c.name for c in chunks if c.root] == ["dynamic-spatial-relation"]
    assert {c.output_type for c in chunks} == {"context", "objects", "events"}
