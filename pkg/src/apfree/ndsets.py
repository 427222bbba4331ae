"""Nowhere-dense compact subsets of [0,1] presented as cover generators.

A generator yields a refining sequence of interval-union covers together
with a gap-scale bound: every closed window of that length contains a
point outside the cover.  That bound is the computable surrogate for
"the set is nowhere dense" and drives the cut-selection step of the
construction.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import MalformedInput, RefinementExhausted
from .intervals import ONE, ZERO, ClosedInterval, IntervalUnion, parse_rat, rat_str


class NDGenerator:
    """Base class; subclasses implement _cover and gap_scale."""

    def __init__(self):
        self._memo: dict[int, IntervalUnion] = {}

    def cover(self, g: int) -> IntervalUnion:
        if g < 0:
            raise MalformedInput("generation must be non-negative")
        if g not in self._memo:
            self._memo[g] = self._cover(g)
        return self._memo[g]

    def _cover(self, g: int) -> IntervalUnion:
        raise NotImplementedError

    def gap_scale(self, g: int) -> Fraction:
        raise NotImplementedError

    def refine_until(self, window_len: Fraction, max_gen: int) -> int:
        """Smallest generation whose gap scale fits inside window_len."""
        window_len = Fraction(window_len)
        if window_len <= 0:
            raise MalformedInput("window length must be positive")
        for g in range(max_gen + 1):
            if self.gap_scale(g) <= window_len:
                return g
        raise RefinementExhausted(
            f"no generation <= {max_gen} reaches gap scale {window_len}")

    def to_config(self) -> dict:
        raise NotImplementedError

    @staticmethod
    def from_config(data) -> "NDGenerator":
        if not isinstance(data, dict) or "kind" not in data:
            raise MalformedInput("generator config must be an object with a 'kind'")
        kind = data["kind"]
        if kind == "cantor":
            return CantorGen(parse_rat(data["ratio"]))
        if kind == "points":
            return PointsGen([parse_rat(v) for v in data["values"]])
        if kind == "union":
            return UnionGen([NDGenerator.from_config(c) for c in data["children"]])
        raise MalformedInput(f"unknown generator kind {kind!r}")


class CantorGen(NDGenerator):
    """Cantor-type set: each interval keeps its two outer pieces, removing
    the open middle portion of relative length `ratio`."""

    def __init__(self, ratio: Fraction):
        super().__init__()
        self.ratio = Fraction(ratio)
        if not (0 < self.ratio < 1):
            raise MalformedInput("cantor ratio must lie strictly between 0 and 1")
        self._keep = (1 - self.ratio) / 2

    def _cover(self, g: int) -> IntervalUnion:
        if g == 0:
            return IntervalUnion([ClosedInterval(ZERO, ONE)])
        prev = self.cover(g - 1)
        out = []
        for iv in prev.components:
            w = iv.length * self._keep
            out.append(ClosedInterval(iv.lo, iv.lo + w))
            out.append(ClosedInterval(iv.hi - w, iv.hi))
        return IntervalUnion(out)

    def gap_scale(self, g: int) -> Fraction:
        # component length at generation g, doubled: any window that long
        # overlaps a removed middle portion
        return 2 * self._keep ** g

    def to_config(self) -> dict:
        return {"kind": "cantor", "ratio": rat_str(self.ratio)}


class PointsGen(NDGenerator):
    """A finite point set; already its own closure, covers do not refine."""

    def __init__(self, points: Sequence[Fraction]):
        super().__init__()
        pts = sorted(set(Fraction(p) for p in points))
        if not pts:
            raise MalformedInput("point generator needs at least one point")
        if pts[0] < 0 or pts[-1] > 1:
            raise MalformedInput("points must lie in [0,1]")
        self.points = tuple(pts)

    def _cover(self, g: int) -> IntervalUnion:
        return IntervalUnion([ClosedInterval(p, p) for p in self.points])

    def gap_scale(self, g: int) -> Fraction:
        # twice the smallest spacing of the points together with 0 and 1;
        # constant in g (nothing refines)
        anchors = sorted(set(self.points) | {ZERO, ONE})
        if len(anchors) == 1:
            return Fraction(1, 2)
        min_gap = min(b - a for a, b in zip(anchors, anchors[1:]) if b > a)
        return 2 * min_gap

    def to_config(self) -> dict:
        return {"kind": "points", "values": [rat_str(p) for p in self.points]}


class UnionGen(NDGenerator):
    """Finite union of generators; still nowhere dense."""

    def __init__(self, children: Sequence[NDGenerator]):
        super().__init__()
        if not children:
            raise MalformedInput("union generator needs at least one child")
        self.children = tuple(children)

    def _cover(self, g: int) -> IntervalUnion:
        out = []
        for child in self.children:
            out.extend(child.cover(g).components)
        return IntervalUnion(out)

    def gap_scale(self, g: int) -> Fraction:
        # a window of the summed length contains a sub-window avoiding
        # each child in turn; conservative but provable
        return sum((child.gap_scale(g) for child in self.children), Fraction(0))

    def to_config(self) -> dict:
        return {"kind": "union", "children": [c.to_config() for c in self.children]}
