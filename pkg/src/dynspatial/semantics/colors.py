"""Nearest-prototype color categorization in YCbCr."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Mapping, Sequence

REQUIRED_COLORS = ("blue", "green", "red", "white", "yellow")


@dataclass(frozen=True)
class ColorPrototypes:
    table: tuple[tuple[str, tuple[float, float, float]], ...]

    def __post_init__(self):
        for name, triple in self.table:
            if len(triple) != 3 or not all(0 <= c <= 255 for c in triple):
                raise ValueError(f"prototype {name!r} is not a YCbCr triple in [0,255]")

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, Sequence[float]]) -> "ColorPrototypes":
        return cls(tuple(sorted((name, tuple(float(c) for c in triple))
                                for name, triple in mapping.items())))

    def __getitem__(self, name: str) -> tuple[float, float, float]:
        for n, triple in self.table:
            if n == name:
                return triple
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(n == name for n, _ in self.table)

    def __len__(self):
        return len(self.table)

    @property
    def names(self) -> list[str]:
        return [n for n, _ in self.table]


def ycbcr_distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.sqrt(sum((x - y) ** 2 for x, y in zip(a, b)))


def classify_color(sample: Sequence[float], prototypes: ColorPrototypes) -> str:
    """Name of the nearest prototype; ties go to the lexicographically smallest name."""
    if not len(prototypes):
        raise ValueError("empty prototype map")
    return min((ycbcr_distance(sample, triple), name) for name, triple in prototypes.table)[1]


def load_prototypes(text: str | None = None) -> ColorPrototypes:
    """Prototypes from JSON text, or the shipped defaults when ``text`` is None."""
    if text is None:
        text = resources.files("dynspatial.data").joinpath("colors.json").read_text("utf-8")
    protos = ColorPrototypes.from_mapping(json.loads(text))
    missing = [c for c in REQUIRED_COLORS if c not in protos]
    if missing:
        raise ValueError(f"prototype table lacks {missing}")
    return protos


def default_prototypes() -> ColorPrototypes:
    return load_prototypes()
