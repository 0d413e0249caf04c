"""Allen interval algebra over closed integer tick intervals."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Sequence


@dataclass(frozen=True, order=True, slots=True)
class TickInterval:
    start: int
    end: int

    def __post_init__(self):
        if self.start > self.end:
            raise ValueError(f"interval start {self.start} > end {self.end}")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def __contains__(self, t: int) -> bool:
        return self.start <= t <= self.end

    def covers(self, other: "TickInterval") -> bool:
        """True when ``other`` lies inside this interval, shared endpoints allowed."""
        return self.start <= other.start and other.end <= self.end

    def intersects(self, other: "TickInterval") -> bool:
        return self.start <= other.end and other.start <= self.end

    def as_list(self) -> list[int]:
        return [self.start, self.end]


class AllenRel(str, Enum):
    BEFORE = "before"
    AFTER = "after"
    MEETS = "meets"
    MET_BY = "met_by"
    OVERLAPS = "overlaps"
    OVERLAPPED_BY = "overlapped_by"
    STARTS = "starts"
    STARTED_BY = "started_by"
    DURING = "during"
    CONTAINS = "contains"
    FINISHES = "finishes"
    FINISHED_BY = "finished_by"
    EQUAL = "equal"

    @property
    def converse(self) -> "AllenRel":
        return _CONVERSE[self]


_CONVERSE = {
    AllenRel.BEFORE: AllenRel.AFTER,
    AllenRel.MEETS: AllenRel.MET_BY,
    AllenRel.OVERLAPS: AllenRel.OVERLAPPED_BY,
    AllenRel.STARTS: AllenRel.STARTED_BY,
    AllenRel.DURING: AllenRel.CONTAINS,
    AllenRel.FINISHES: AllenRel.FINISHED_BY,
    AllenRel.EQUAL: AllenRel.EQUAL,
}
_CONVERSE.update({v: k for k, v in list(_CONVERSE.items())})


def allen_relation(i: TickInterval, j: TickInterval) -> AllenRel:
    """Allen relation of ``i`` to ``j``.

    A closed tick range [s, e] is read as the real interval [s, e + 1), so two
    runs with ``i.end + 1 == j.start`` meet.
    """
    s1, e1 = i.start, i.end + 1
    s2, e2 = j.start, j.end + 1
    if e1 < s2:
        return AllenRel.BEFORE
    if e2 < s1:
        return AllenRel.AFTER
    if e1 == s2:
        return AllenRel.MEETS
    if e2 == s1:
        return AllenRel.MET_BY
    if s1 == s2 and e1 == e2:
        return AllenRel.EQUAL
    if s1 == s2:
        return AllenRel.STARTS if e1 < e2 else AllenRel.STARTED_BY
    if e1 == e2:
        return AllenRel.FINISHES if s1 > s2 else AllenRel.FINISHED_BY
    if s2 < s1 and e1 < e2:
        return AllenRel.DURING
    if s1 < s2 and e2 < e1:
        return AllenRel.CONTAINS
    return AllenRel.OVERLAPS if s1 < s2 else AllenRel.OVERLAPPED_BY


def intervals_from_series(series: Sequence[bool]) -> list[TickInterval]:
    """Maximal runs of true values, in increasing order."""
    runs = []
    start = None
    for t, value in enumerate(series):
        if value and start is None:
            start = t
        elif not value and start is not None:
            runs.append(TickInterval(start, t - 1))
            start = None
    if start is not None:
        runs.append(TickInterval(start, len(series) - 1))
    return runs
