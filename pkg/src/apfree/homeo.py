"""Increasing piecewise-linear homeomorphisms of [0,1] with rational breakpoints.

The representable maps are exactly the increasing PL bijections fixing 0
and 1.  The breakpoint list is kept minimal (no collinear triples), so
structural equality coincides with functional equality.
"""
from __future__ import annotations

import random
from bisect import bisect_right
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import MalformedInput
from .intervals import ONE, ZERO, ClosedInterval, IntervalUnion, parse_rat, rat_str


def _canonical(points: Sequence[tuple[Fraction, Fraction]]) -> tuple:
    pts = [(Fraction(x), Fraction(y)) for x, y in points]
    if not pts or pts[0] != (ZERO, ZERO) or pts[-1] != (ONE, ONE):
        raise MalformedInput("breakpoints must start at (0,0) and end at (1,1)")
    for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
        if x1 <= x0 or y1 <= y0:
            raise MalformedInput("breakpoints must be strictly increasing in x and y")
    out = [pts[0]]
    for p in pts[1:]:
        while len(out) >= 2:
            (x0, y0), (x1, y1) = out[-2], out[-1]
            # drop middle point of exactly collinear triples
            if (y1 - y0) * (p[0] - x1) == (p[1] - y1) * (x1 - x0):
                out.pop()
            else:
                break
        out.append(p)
    return tuple(out)


class PLHomeo:
    """An increasing PL homeomorphism of [0,1], immutable."""

    __slots__ = ("points", "_xs", "_ys")

    def __init__(self, points: Iterable[tuple[Fraction, Fraction]]):
        self.points = _canonical(list(points))
        self._xs = [p[0] for p in self.points]
        self._ys = [p[1] for p in self.points]

    @classmethod
    def identity(cls) -> "PLHomeo":
        return cls([(ZERO, ZERO), (ONE, ONE)])

    def __eq__(self, other) -> bool:
        return isinstance(other, PLHomeo) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __repr__(self):
        body = ",".join(f"({rat_str(x)},{rat_str(y)})" for x, y in self.points)
        return f"PLHomeo[{body}]"

    def __call__(self, x: Fraction) -> Fraction:
        x = Fraction(x)
        if not (ZERO <= x <= ONE):
            raise MalformedInput(f"argument {x} outside [0,1]")
        i = bisect_right(self._xs, x) - 1
        if i == len(self._xs) - 1:
            return self._ys[-1]
        x0, y0 = self.points[i]
        x1, y1 = self.points[i + 1]
        return y0 + (y1 - y0) * (x - x0) / (x1 - x0)

    def compose(self, inner: "PLHomeo") -> "PLHomeo":
        """The map x -> self(inner(x))."""
        inv = inner.invert()
        xs = set(inner._xs)
        xs.update(inv(x) for x in self._xs)
        grid = sorted(xs)
        return PLHomeo([(x, self(inner(x))) for x in grid])

    def invert(self) -> "PLHomeo":
        return PLHomeo([(y, x) for x, y in self.points])

    def sup_dist(self, other: "PLHomeo") -> Fraction:
        """Exact sup-norm distance; the PL difference peaks at a breakpoint."""
        grid = sorted(set(self._xs) | set(other._xs))
        return max(abs(self(x) - other(x)) for x in grid)

    def image(self, union: IntervalUnion) -> IntervalUnion:
        return IntervalUnion(
            [ClosedInterval(self(iv.lo), self(iv.hi)) for iv in union.components]
        )

    def perturb(self, bound: Fraction, seed: int) -> "PLHomeo":
        """A nearby distinct homeomorphism, deterministic in (self, bound, seed).

        Interior breakpoint heights are jittered within half the adjacent
        height gaps, so strict monotonicity survives; the sup distance to
        self is positive and strictly below bound.
        """
        bound = Fraction(bound)
        if bound <= 0:
            raise MalformedInput("perturbation bound must be positive")
        pts = list(self.points)
        if len(pts) == 2:
            mid = (pts[0][0] + pts[1][0]) / 2
            pts.insert(1, (mid, self(mid)))
        rng = random.Random(seed)
        out = [pts[0]]
        for i in range(1, len(pts) - 1):
            x, y = pts[i]
            margin = min(y - pts[i - 1][1], pts[i + 1][1] - y)
            cap = min(margin, bound) / 2
            k = rng.randint(1, 2**30)
            sign = 1 if rng.random() < 0.5 else -1
            out.append((x, y + sign * cap * Fraction(k, 2**31)))
        out.append(pts[-1])
        return PLHomeo(out)

    # -- serialization ----------------------------------------------------

    def to_jsonable(self) -> list[list[str]]:
        return [[rat_str(x), rat_str(y)] for x, y in self.points]

    @classmethod
    def from_jsonable(cls, data) -> "PLHomeo":
        if not isinstance(data, list):
            raise MalformedInput("homeomorphism must be a JSON array of [x, y] pairs")
        pts = []
        for pair in data:
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise MalformedInput(f"bad breakpoint entry: {pair!r}")
            pts.append((parse_rat(pair[0]), parse_rat(pair[1])))
        return cls(pts)
