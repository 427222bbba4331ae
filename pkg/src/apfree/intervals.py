"""Exact rational arithmetic and canonical interval unions on [0,1].

All coordinates are `fractions.Fraction`; nothing here ever rounds.
Unions are kept canonical (sorted, disjoint, touching components merged)
so equality and serialization are deterministic.
"""
from __future__ import annotations

from bisect import bisect_right
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

from .errors import MalformedInput

Rat = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


def parse_rat(s) -> Fraction:
    """Parse a rational from its canonical string form ("2/3", "-1/8", "0")."""
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError, TypeError) as exc:
        raise MalformedInput(f"not a rational: {s!r}") from exc


def rat_str(q: Fraction) -> str:
    """Canonical string form; round-trips bit-exactly through parse_rat."""
    return str(Fraction(q))


class ClosedInterval(NamedTuple):
    lo: Fraction
    hi: Fraction

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x: Fraction) -> bool:
        return self.lo <= x <= self.hi


def _check_interval(iv: ClosedInterval) -> ClosedInterval:
    lo, hi = Fraction(iv[0]), Fraction(iv[1])
    if not (ZERO <= lo <= hi <= ONE):
        raise MalformedInput(f"interval [{lo},{hi}] not within [0,1] or lo > hi")
    return ClosedInterval(lo, hi)


class IntervalUnion:
    """Canonical finite union of disjoint closed rational intervals in [0,1].

    Immutable after construction.  Components are sorted and strictly
    separated (touching intervals merge), so two unions with equal point
    sets compare equal structurally.
    """

    __slots__ = ("components", "_los", "_his")

    def __init__(self, raw: Sequence[ClosedInterval] = ()):
        checked = sorted((_check_interval(iv) for iv in raw), key=lambda iv: (iv.lo, iv.hi))
        merged: list[ClosedInterval] = []
        for iv in checked:
            if merged and iv.lo <= merged[-1].hi:
                if iv.hi > merged[-1].hi:
                    merged[-1] = ClosedInterval(merged[-1].lo, iv.hi)
            else:
                merged.append(iv)
        self.components: tuple[ClosedInterval, ...] = tuple(merged)
        # parallel endpoint lists for bisection
        self._los = [iv.lo for iv in merged]
        self._his = [iv.hi for iv in merged]

    def __eq__(self, other) -> bool:
        return isinstance(other, IntervalUnion) and self.components == other.components

    def __hash__(self):
        return hash(self.components)

    def __repr__(self):
        body = ",".join(f"[{rat_str(iv.lo)},{rat_str(iv.hi)}]" for iv in self.components)
        return f"IntervalUnion({body})"

    def __len__(self):
        return len(self.components)

    def __bool__(self):
        return bool(self.components)

    def measure(self) -> Fraction:
        return sum((iv.length for iv in self.components), ZERO)

    def contains(self, x: Fraction) -> bool:
        i = bisect_right(self._los, x) - 1
        return i >= 0 and x <= self._his[i]

    def clip(self, window: ClosedInterval) -> "IntervalUnion":
        """Intersection with a closed interval, as a canonical union."""
        out = []
        for iv in self.components:
            lo = max(iv.lo, window.lo)
            hi = min(iv.hi, window.hi)
            if lo <= hi:
                out.append(ClosedInterval(lo, hi))
        return IntervalUnion(out)

    def hull(self) -> Optional[ClosedInterval]:
        if not self.components:
            return None
        return ClosedInterval(self.components[0].lo, self.components[-1].hi)

    def gap_point_in(self, window: ClosedInterval) -> Optional[Fraction]:
        """Midpoint of the widest (leftmost on ties) open gap of window \\ self.

        Returns None when window \\ self has empty interior.  Absence is an
        ordinary result, not an error.
        """
        if window.lo >= window.hi:
            raise MalformedInput("window must be non-degenerate")
        gaps: list[tuple[Fraction, Fraction]] = []
        cursor = window.lo
        for iv in self.components:
            if iv.hi < cursor:
                continue
            if iv.lo > window.hi:
                break
            if iv.lo > cursor:
                gaps.append((cursor, min(iv.lo, window.hi)))
            cursor = max(cursor, iv.hi)
            if cursor >= window.hi:
                break
        if cursor < window.hi:
            gaps.append((cursor, window.hi))
        best = None
        for lo, hi in gaps:
            if hi <= lo:
                continue
            if best is None or hi - lo > best[1] - best[0]:
                best = (lo, hi)
        if best is None:
            return None
        return (best[0] + best[1]) / 2

    # -- serialization ----------------------------------------------------

    def to_jsonable(self) -> list[list[str]]:
        return [[rat_str(iv.lo), rat_str(iv.hi)] for iv in self.components]

    @classmethod
    def from_jsonable(cls, data) -> "IntervalUnion":
        if not isinstance(data, list):
            raise MalformedInput("interval union must be a JSON array of [lo, hi] pairs")
        raw = []
        for pair in data:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise MalformedInput(f"bad interval entry: {pair!r}")
            raw.append(ClosedInterval(parse_rat(pair[0]), parse_rat(pair[1])))
        return cls(raw)


def normalize(raw: Sequence[tuple]) -> IntervalUnion:
    """Canonical union of raw closed intervals (overlap and touch merge)."""
    return IntervalUnion([ClosedInterval(Fraction(a), Fraction(b)) for a, b in raw])
