"""Semantic programs: representation, evaluation, conceptualization, interpretation."""

from .colors import ColorPrototypes, classify_color, default_prototypes, load_prototypes
from .evaluation import Events, MotionEvent, Percepts, Referents, Solution, evaluate
from .program import (BindStatement, CogOpNode, IrlProgram, ProgramError, SemEntity, canonical_text, clause_program,
                      canonicalize, check_program, equivalent, parse_program, serialize)
from .search import (Chunk, Indiscriminable, Uninterpretable, complete_program, conceptualize,
                     default_chunks, interpret)

__all__ = [
    "BindStatement", "Chunk", "CogOpNode", "ColorPrototypes", "Events", "Indiscriminable",
    "IrlProgram", "MotionEvent", "Percepts", "ProgramError", "Referents", "SemEntity", "Solution",
    "Uninterpretable", "canonical_text", "canonicalize", "clause_program", "check_program", "classify_color",
    "complete_program", "conceptualize", "default_chunks", "default_prototypes", "equivalent",
    "evaluate", "interpret", "load_prototypes", "parse_program", "serialize",
]
