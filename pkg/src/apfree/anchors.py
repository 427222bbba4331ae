"""AP-free anchor point sets constrained to prescribed cells.

pick_apfree fixes 0 and 1, then walks each interior cell through the
dyadic relative positions 1/2, 1/4, 3/4, 1/8, ... and takes the first
point that completes no 3-term AP with any two already-chosen points.
The forbidden values form a finite set while the candidates are dense in
the cell, so the walk terminates.

Large configurations are screened first (modular residues for the pair
check, float64 for the defect minimum); every screen hit is re-checked
in exact arithmetic, so the results are identical to the plain check.
"""
from __future__ import annotations

from bisect import bisect_left
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import MalformedInput
from .intervals import ONE, ZERO, ClosedInterval, parse_rat, rat_str

_FAST_THRESHOLD = 512
_DEFECT_FAST_THRESHOLD = 256
# word-size primes for the residue screen; both checked, so a false hit
# needs a simultaneous collision
_P1 = 67108859
_P2 = 67108837
_INV2_P1 = pow(2, -1, _P1)
_INV2_P2 = pow(2, -1, _P2)


class PointConfig(NamedTuple):
    points: tuple[Fraction, ...]
    defect: Fraction

    def to_jsonable(self) -> dict:
        return {"points": [rat_str(p) for p in self.points],
                "defect": rat_str(self.defect)}

    @classmethod
    def from_jsonable(cls, data) -> "PointConfig":
        return cls(tuple(parse_rat(s) for s in data["points"]),
                   parse_rat(data["defect"]))


def _defect_exact(pts: Sequence[Fraction]) -> Fraction:
    best: Optional[Fraction] = None
    n = len(pts)
    for m in range(n - 2):
        for mid in range(m + 1, n - 1):
            target = 2 * pts[mid] - pts[m]
            # nearest successor value to the target decides this pair
            k = bisect_left(pts, target, mid + 1, n)
            for kk in (k - 1, k):
                if mid < kk < n:
                    val = abs(pts[m] + pts[kk] - 2 * pts[mid])
                    if val == 0:
                        raise MalformedInput(
                            f"points contain an exact AP at indices ({m},{mid},{kk})")
                    if best is None or val < best:
                        best = val
    return best


def _defect_screened(pts: Sequence[Fraction]) -> Fraction:
    n = len(pts)
    pf = np.array([float(p) for p in pts])
    margin = 1e-12

    def sweep(thresh):
        """Return (min float value, candidate (m, mid) pairs below thresh)."""
        best = np.inf
        cands = []
        for m in range(n - 2):
            targets = 2.0 * pf[m + 1:n - 1] - pf[m]
            idx = np.searchsorted(pf, targets)
            mids = np.arange(m + 1, n - 1)
            vals = np.full(len(mids), np.inf)
            for off in (-1, 0):
                k = idx + off
                ok = (k > mids) & (k < n)
                if ok.any():
                    vals[ok] = np.minimum(vals[ok], np.abs(pf[k[ok]] - targets[ok]))
            lo = vals.min(initial=np.inf)
            if lo < best:
                best = lo
            if thresh is not None:
                for mi in np.nonzero(vals <= thresh)[0]:
                    cands.append((m, int(mids[mi])))
        return best, cands

    float_min, _ = sweep(None)
    _, pairs = sweep(float_min + margin)
    best: Optional[Fraction] = None
    for m, mid in pairs:
        target = 2 * pts[mid] - pts[m]
        k = bisect_left(pts, target, mid + 1, n)
        for kk in range(max(mid + 1, k - 2), min(n, k + 3)):
            val = abs(pts[m] + pts[kk] - 2 * pts[mid])
            if val == 0:
                raise MalformedInput(
                    f"points contain an exact AP at indices ({m},{mid},{kk})")
            if best is None or val < best:
                best = val
    assert best is not None
    return best


def defect(points: Sequence[Fraction]) -> Fraction:
    """Exact minimum of |p_m + p_k - 2 p_n| over all index triples m<n<k."""
    pts = [Fraction(p) for p in points]
    if len(pts) < 3:
        raise MalformedInput("need at least 3 points")
    if any(b <= a for a, b in zip(pts, pts[1:])):
        raise MalformedInput("points must be strictly increasing")
    if len(pts) < _DEFECT_FAST_THRESHOLD:
        return _defect_exact(pts)
    return _defect_screened(pts)


def _dyadic_walk():
    """Relative positions 1/2, 1/4, 3/4, 1/8, 3/8, 5/8, 7/8, ..."""
    level = 2
    while True:
        for num in range(1, level, 2):
            yield Fraction(num, level)
        level *= 2


def _residues(p: Fraction) -> tuple[int, int]:
    n, d = p.numerator, p.denominator
    r1 = (n % _P1) * pow(d % _P1, -1, _P1) % _P1 if d % _P1 else -1
    r2 = (n % _P2) * pow(d % _P2, -1, _P2) % _P2 if d % _P2 else -1
    return r1, r2


class _APFreeSet:
    """Incrementally grown AP-free set with an exact forbidden-pair check."""

    def __init__(self, initial: Sequence[Fraction]):
        self.points: list[Fraction] = []
        self.pset: set[Fraction] = set()
        self._n = 0
        self._res1 = np.empty(1024, np.int64)
        self._res2 = np.empty(1024, np.int64)
        self._bad = np.empty(1024, bool)
        self._present1 = None
        self._present2 = None
        for p in initial:
            self.add(p)

    def add(self, p: Fraction) -> None:
        self.points.append(p)
        self.pset.add(p)
        r1, r2 = _residues(p)
        if self._n == len(self._res1):
            grow = lambda a: np.concatenate([a, np.empty_like(a)])
            self._res1, self._res2 = grow(self._res1), grow(self._res2)
            self._bad = grow(self._bad)
        self._res1[self._n] = max(r1, 0)
        self._res2[self._n] = max(r2, 0)
        self._bad[self._n] = r1 < 0 or r2 < 0
        self._n += 1
        if self._present1 is not None and r1 >= 0 and r2 >= 0:
            self._present1[r1] = True
            self._present2[r2] = True

    def _forbidden_exact(self, p: Fraction, candidates) -> bool:
        for a in candidates:
            if (p + a) / 2 in self.pset or 2 * p - a in self.pset:
                return True
        return False

    def forbidden(self, p: Fraction) -> bool:
        """True iff p forms a 3-term AP with two existing points, i.e. p lies
        in the forbidden set {2b-a, 2a-b, (a+b)/2} of some existing pair."""
        if self._n < _FAST_THRESHOLD:
            return self._forbidden_exact(p, self.points)
        if self._present1 is None:
            self._present1 = np.zeros(_P1, bool)
            self._present2 = np.zeros(_P2, bool)
            self._present1[self._res1[:self._n][~self._bad[:self._n]]] = True
            self._present2[self._res2[:self._n][~self._bad[:self._n]]] = True
        rp1, rp2 = _residues(p)
        if rp1 < 0 or rp2 < 0:
            return self._forbidden_exact(p, self.points)
        res1 = self._res1[:self._n]
        res2 = self._res2[:self._n]
        hit = self._bad[:self._n].copy()
        mid1 = (rp1 + res1) * _INV2_P1 % _P1
        mid2 = (rp2 + res2) * _INV2_P2 % _P2
        hit |= self._present1[mid1] & self._present2[mid2]
        refl1 = (2 * rp1 - res1) % _P1
        refl2 = (2 * rp2 - res2) % _P2
        hit |= self._present1[refl1] & self._present2[refl2]
        idx = np.nonzero(hit)[0]
        if not len(idx):
            return False
        return self._forbidden_exact(p, [self.points[i] for i in idx])


def pick_apfree(cells: Sequence[ClosedInterval]) -> PointConfig:
    """Choose one point per cell so the whole set has no 3-term AP.

    The first and last cells must contain 0 and 1, which are fixed as the
    first and last points; interior points follow the deterministic
    dyadic candidate walk.
    """
    cells = [ClosedInterval(Fraction(c[0]), Fraction(c[1])) for c in cells]
    r = len(cells)
    if r < 3:
        raise MalformedInput("need at least 3 cells")
    for prev, nxt in zip(cells, cells[1:]):
        if prev.hi >= nxt.lo:
            raise MalformedInput("cells must be pairwise disjoint and increasing")
    if not cells[0].contains(ZERO):
        raise MalformedInput("first cell must contain 0")
    if not cells[-1].contains(ONE):
        raise MalformedInput("last cell must contain 1")
    for c in cells[1:-1]:
        if c.lo >= c.hi:
            raise MalformedInput("interior cells must be non-degenerate")
    chosen = _APFreeSet([ZERO, ONE])
    interior: list[Fraction] = []
    for cell in cells[1:-1]:
        width = cell.hi - cell.lo
        for rel in _dyadic_walk():
            p = cell.lo + rel * width
            if not chosen.forbidden(p):
                chosen.add(p)
                interior.append(p)
                break
    points = (ZERO, *interior, ONE)
    return PointConfig(points, defect(points))


def stanley_points(r: int) -> PointConfig:
    """First r terms of the greedy 3-AP-free integer sequence 0,1,3,4,9,...
    rescaled so the last term is 1."""
    if r < 3:
        raise MalformedInput("need at least 3 points")
    seq: list[int] = []
    members: set[int] = set()
    candidate = 0
    while len(seq) < r:
        ok = True
        for a in seq:
            # candidate as largest element: the midpoint must be absent
            if (candidate + a) % 2 == 0 and (candidate + a) // 2 in members:
                ok = False
                break
        if ok:
            seq.append(candidate)
            members.add(candidate)
        candidate += 1
    top = seq[-1]
    points = tuple(Fraction(t, top) for t in seq)
    return PointConfig(points, defect(points))
