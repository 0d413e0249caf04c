"""Two-agent language games over scene pairs.

The speaker picks a topic scene, conceptualizes a discriminating program and
verbalizes it; the hearer parses the utterance, interprets it against both
scenes and points at one. Feedback is the topic's scene index.
"""

from __future__ import annotations

import json
import logging
import random
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .geometry import ScenePair
from .grammar import Construction, Unexpressible, Unparseable, default_grammar, parse, produce
from .qualitative import AbstractionParams
from .semantics.colors import ColorPrototypes, default_prototypes
from .semantics.evaluation import Percepts
from .semantics.search import Chunk, Indiscriminable, Uninterpretable, conceptualize, default_chunks, interpret

log = logging.getLogger(__name__)

OUTCOMES = ("success", "failure", "speaker-abort", "hearer-abort")


@dataclass(frozen=True)
class Agent:
    id: str
    chunks: tuple[Chunk, ...] = field(default_factory=lambda: tuple(default_chunks()))
    grammar: tuple[Construction, ...] = field(default_factory=default_grammar)
    prototypes: ColorPrototypes = field(default_factory=default_prototypes)
    params: AbstractionParams = field(default_factory=AbstractionParams)

    def __post_init__(self):
        object.__setattr__(self, "chunks", tuple(self.chunks))
        object.__setattr__(self, "grammar", tuple(self.grammar))
        if not self.chunks:
            raise ValueError(f"agent {self.id}: no chunks")
        if not self.grammar:
            raise ValueError(f"agent {self.id}: empty grammar")

    def perceive(self, pair: ScenePair) -> Percepts:
        return Percepts.build(pair, self.params, self.prototypes)


@dataclass(frozen=True)
class GameRecord:
    speaker: str
    hearer: str
    pair_id: str
    topic: str
    utterance: str | None
    hearer_choice: str | None
    outcome: str

    def __post_init__(self):
        if self.outcome not in OUTCOMES:
            raise ValueError(f"unknown outcome {self.outcome!r}")
        if self.outcome.endswith("abort") and self.hearer_choice is not None:
            raise ValueError("an aborted game has no hearer choice")
        if (self.outcome == "success") != (self.hearer_choice == self.topic):
            raise ValueError("outcome disagrees with the hearer's choice")

    def to_dict(self) -> dict:
        return asdict(self)


def hearer_choice(utterance: str, pair: ScenePair, hearer: Agent) -> str:
    """Scene the hearer points at. Sees only the utterance, the pair and its own knowledge.

    Raises Unparseable or Uninterpretable when the hearer cannot decide.
    """
    program = parse(utterance, hearer.grammar)
    scene, _ = interpret(program, hearer.perceive(pair), chunks=hearer.chunks)
    return scene


def play_game(pair: ScenePair, speaker: Agent, hearer: Agent, seed: int) -> GameRecord:
    topic = random.Random(seed).choice("ab")

    def record(utterance=None, choice=None, outcome="failure"):
        rec = GameRecord(speaker.id, hearer.id, pair.pair_id, topic, utterance, choice, outcome)
        log.debug("game %s", rec)
        return rec

    try:
        program = conceptualize(speaker.perceive(pair), topic, chunks=speaker.chunks)
        utterance = str(produce(program, speaker.grammar))
    except (Indiscriminable, Unexpressible):
        return record(outcome="speaker-abort")
    try:
        choice = hearer_choice(utterance, pair, hearer)
    except (Unparseable, Uninterpretable):
        return record(utterance, outcome="hearer-abort")
    return record(utterance, choice, "success" if choice == topic else "failure")


@dataclass
class SeriesStats:
    games_played: int
    successes: int
    failures: int
    aborts: dict[str, int]
    records: list[GameRecord] = field(default_factory=list, repr=False)

    @property
    def success_rate(self) -> float:
        return self.successes / self.games_played if self.games_played else 0.0

    def summary(self) -> dict:
        return {"games_played": self.games_played, "successes": self.successes,
                "failures": self.failures, "success_rate": self.success_rate,
                "aborts": dict(self.aborts)}

    def report(self) -> dict:
        return {"games": [r.to_dict() for r in self.records], "stats": self.summary()}

    def to_json(self) -> str:
        return json.dumps(self.report(), indent=2)


def summarize(records: Sequence[GameRecord]) -> SeriesStats:
    outcomes = [r.outcome for r in records]
    return SeriesStats(len(records), outcomes.count("success"), outcomes.count("failure"),
                       {k: outcomes.count(k) for k in ("speaker-abort", "hearer-abort")},
                       list(records))


def run_series(pairs: Sequence[ScenePair], agents: Sequence[Agent], n: int, seed: int) -> SeriesStats:
    """``n`` games, each between two distinct agents on a randomly drawn pair."""
    if len(agents) < 2:
        raise ValueError("a series needs at least two agents")
    if n < 1:
        raise ValueError("a series needs at least one game")
    if not pairs:
        raise ValueError("no scene pairs to play on")
    rng = random.Random(seed)
    records = []
    for i in range(n):
        speaker, hearer = rng.sample(list(agents), 2)
        pair = pairs[rng.randrange(len(pairs))]
        records.append(play_game(pair, speaker, hearer, rng.randrange(2 ** 32)))
        log.info("game %d: %s", i, records[-1].outcome)
    return summarize(records)
