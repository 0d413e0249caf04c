"""Command-line entry point.

Exit status: 0 on success, 1 when the pipeline itself fails on valid input
(nothing recognized, nothing discriminates, ...), 2 on usage and input
document errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .events import describe_scene, dump_events, render_english
from .game import Agent, run_series
from .geometry import SceneError, dump_pair, dump_scene, load_pair, load_scene
from .grammar import Unexpressible, Unparseable, parse, produce
from .qualitative import AbstractionParams, dump_fluents, extract_fluents
from .scenarios import canonical_scene, discriminable_pairs
from .semantics.colors import classify_color, default_prototypes
from .semantics.program import ProgramError, parse_program, serialize
from .semantics.search import Indiscriminable, Uninterpretable, conceptualize, interpret

DOMAIN_ERRORS = (Unparseable, Unexpressible, Indiscriminable, Uninterpretable)


class UsageError(Exception):
    pass


def _read(path: str | None, flag: str) -> str:
    if path is None:
        raise UsageError(f"{flag} is required")
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"{flag}: cannot read {path}: {exc.strerror}") from None


def _params(args) -> AbstractionParams:
    if args.params is None:
        return AbstractionParams()
    try:
        return AbstractionParams.from_dict(json.loads(_read(args.params, "--params")))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--params: {exc}") from None


def _need(value, flag):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def _color_name(scene):
    protos = default_prototypes()

    def color_of(entity_id):
        color = scene.entity(entity_id).color
        return color if isinstance(color, str) else classify_color(color, protos)

    return color_of


def cmd_abstract(args) -> str:
    scene = load_scene(_read(args.scene, "--scene"))
    return dump_fluents(extract_fluents(scene, _params(args)))


def cmd_describe(args) -> str:
    scene = load_scene(_read(args.scene, "--scene"))
    atoms = describe_scene(scene, _params(args))
    # the English gloss is for people; stdout stays machine-readable
    for line in render_english(atoms, _color_name(scene)):
        print(line, file=sys.stderr)
    return dump_events(atoms)


def cmd_produce(args) -> str:
    program = parse_program(_need(args.text, "--text"))
    return str(produce(program)) + "\n"


def cmd_parse(args) -> str:
    return serialize(parse(_need(args.text, "--text"))) + "\n"


def cmd_interpret(args) -> str:
    pair = load_pair(_read(args.pair, "--pair"))
    program = parse(_need(args.text, "--text"))
    scene, score = interpret(program, pair, _params(args))
    return json.dumps({"scene": scene, "score": score}) + "\n"


def cmd_conceptualize(args) -> str:
    pair = load_pair(_read(args.pair, "--pair"))
    return serialize(conceptualize(pair, _need(args.topic, "--topic"), params=_params(args))) + "\n"


def cmd_game(args) -> str:
    if args.pair is not None:
        pairs = [load_pair(_read(args.pair, "--pair"))]
    else:
        pairs = discriminable_pairs(args.count, args.noise, args.seed)
    params = _params(args)
    agents = [Agent("agent-1", params=params), Agent("agent-2", params=params)]
    if args.games < 1:
        raise UsageError("--games must be at least 1")
    return run_series(pairs, agents, args.games, args.seed).to_json() + "\n"


def cmd_gen_scenes(args) -> str:
    if args.canonical:
        return dump_scene(canonical_scene()) + "\n"
    if args.count < 1:
        raise UsageError("--count must be at least 1")
    return "".join(dump_pair(p) + "\n" for p in discriminable_pairs(args.count, args.noise, args.seed))


COMMANDS = {
    "abstract": (cmd_abstract, "fluents of a scene as JSON lines"),
    "describe": (cmd_describe, "event atoms of a scene as JSON lines"),
    "produce": (cmd_produce, "English clause for a program"),
    "parse": (cmd_parse, "program for an English clause"),
    "interpret": (cmd_interpret, "scene an utterance refers to"),
    "conceptualize": (cmd_conceptualize, "program singling out the topic scene"),
    "game": (cmd_game, "run a series of language games"),
    "gen-scenes": (cmd_gen_scenes, "generate scene pair documents"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dynspatial",
                                     description="Dynamic spatial scenes, events and language games.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scene", metavar="FILE", help="scene document")
        p.add_argument("--pair", metavar="FILE", help='pair document {"scene_a": ..., "scene_b": ...}')
        p.add_argument("--text", help="utterance or program text")
        p.add_argument("--topic", choices=("a", "b"))
        p.add_argument("--games", type=int, default=20, metavar="N")
        p.add_argument("--seed", type=int, default=0, metavar="N")
        p.add_argument("--params", metavar="FILE", help="abstraction parameter overrides (JSON)")
        p.add_argument("--out", metavar="FILE", help="write output here instead of stdout")
        p.add_argument("--count", type=int, default=21, metavar="N", help="generated pairs")
        p.add_argument("--noise", type=float, default=0.0, metavar="SIGMA",
                       help="track noise for generated scenes, in meters")
        p.add_argument("--canonical", action="store_true", help="gen-scenes: emit the canonical scene")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    handler = COMMANDS[args.command][0]
    try:
        output = handler(args)
    except DOMAIN_ERRORS as exc:
        print(f"dynspatial: {exc}", file=sys.stderr)
        return 1
    except (UsageError, SceneError, ProgramError) as exc:
        print(f"dynspatial {args.command}: {exc}", file=sys.stderr)
        return 2
    if args.out:
        try:
            Path(args.out).write_text(output, encoding="utf-8")
        except OSError as exc:
            print(f"dynspatial {args.command}: --out: {exc.strerror}", file=sys.stderr)
            return 2
    else:
        sys.stdout.write(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
