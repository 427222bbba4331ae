"""Exact decision procedures for 3-term AP content of interval unions.

has_ap3 answers "is there an AP x, x+d, x+2d inside U with d >= eps" by
eliminating the two unknowns (start, step) over every ordered component
triple; min_defect computes the least value of |x1+x3-2x2| over triples
with both gaps >= eps.  Both are exact; brute_force_ap3 is the
independent grid oracle used to cross-validate them.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import MalformedInput, VacuousDefect
from .intervals import IntervalUnion, parse_rat, rat_str


class APWitness(NamedTuple):
    start: Fraction
    step: Fraction
    length: int

    def terms(self) -> list[Fraction]:
        return [self.start + k * self.step for k in range(self.length)]

    def to_jsonable(self) -> dict:
        return {"start": rat_str(self.start), "step": rat_str(self.step),
                "length": self.length}

    @classmethod
    def from_jsonable(cls, data) -> "APWitness":
        return cls(parse_rat(data["start"]), parse_rat(data["step"]), int(data["length"]))


class DefectReport(NamedTuple):
    gamma: Fraction
    achiever: tuple[Fraction, Fraction, Fraction]

    def to_jsonable(self) -> dict:
        return {"gamma": rat_str(self.gamma),
                "achiever": [rat_str(x) for x in self.achiever]}

    @classmethod
    def from_jsonable(cls, data) -> "DefectReport":
        x1, x2, x3 = (parse_rat(s) for s in data["achiever"])
        return cls(parse_rat(data["gamma"]), (x1, x2, x3))


def has_ap3(union: IntervalUnion, eps: Fraction, strict: bool = False) -> Optional[APWitness]:
    """Witness of a 3-term AP in U with step >= eps (> eps when strict), or None.

    The returned witness is the lexicographically smallest feasible
    (step, start) over all component triples; in strict mode, when only
    the open step range (eps, dhi] is feasible for a triple, the
    deterministic representative step (eps + dhi)/2 is used.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise MalformedInput("eps must be positive")
    comps = union.components
    m = len(comps)
    los = [iv.lo for iv in comps]
    his = [iv.hi for iv in comps]
    best: Optional[tuple[Fraction, Fraction]] = None
    for i in range(m):
        a1, b1 = comps[i]
        for k in range(i, m):
            a3, b3 = comps[k]
            span = (b3 - a1) / 2
            if span < eps or (strict and span <= eps):
                continue
            dmin_pair = max(eps, (a3 - b1) / 2)
            if best is not None and dmin_pair > best[0]:
                continue
            # x2 = (x1+x3)/2 must land in component j
            mid_lo = (a1 + a3) / 2
            mid_hi = (b1 + b3) / 2
            j_lo = max(i, bisect_left(his, mid_lo))
            j_hi = min(k, bisect_right(los, mid_hi) - 1)
            for j in range(j_lo, j_hi + 1):
                a2, b2 = comps[j]
                dlo = max(eps, a2 - b1, (a3 - b1) / 2, a3 - b2)
                dhi = min(b2 - a1, span, b3 - a2)
                if dlo > dhi:
                    continue
                if strict and dlo <= eps:
                    if dhi <= eps:
                        continue
                    d = (eps + dhi) / 2
                else:
                    d = dlo
                x1 = max(a1, a2 - d, a3 - 2 * d)
                cand = (d, x1)
                if best is None or cand < best:
                    best = cand
    if best is None:
        return None
    return APWitness(best[1], best[0], 3)


def _lmin_triple(a1, b1, a2, b2, a3, b3, eps):
    """Exact min of x1+x3-2*x2 over the box-and-gaps polytope, or None.

    Constraints: xi in [ai,bi], x2-x1 >= eps, x3-x2 >= eps.  The minimum
    sits at x1=a1, x2 as high as allowed, x3 as low as allowed.
    """
    hi2 = min(b2, b3 - eps)
    lo2 = max(a2, a1 + eps)
    if lo2 > hi2:
        return None
    x1 = a1
    x2 = hi2
    x3 = max(a3, x2 + eps)
    return (x1 + x3 - 2 * x2, (x1, x2, x3))


def min_defect(union: IntervalUnion, eps: Fraction) -> DefectReport:
    """Exact minimum of |x1+x3-2x2| over triples of U with both gaps >= eps.

    Precondition: U has no 3-term AP of step >= eps (otherwise the
    minimum would be 0 and an error is raised).  Raises VacuousDefect
    when no triple satisfies the gap constraints.
    """
    eps = Fraction(eps)
    if eps <= 0:
        raise MalformedInput("eps must be positive")
    comps = union.components
    m = len(comps)
    los = [iv.lo for iv in comps]
    his = [iv.hi for iv in comps]
    best: Optional[Fraction] = None
    best_achiever = None
    for i in range(m):
        a1, b1 = comps[i]
        for k in range(i, m):
            a3, b3 = comps[k]
            if b3 - a1 < 2 * eps:
                continue
            # feasibility of some x2: b2 >= a1+eps and a2 <= b3-eps
            j_lo = max(i, bisect_left(his, a1 + eps))
            j_hi = min(k, bisect_right(los, b3 - eps) - 1)
            if best is not None:
                # a triple can only improve when its unconstrained defect
                # range reaches inside (-best, best)
                j_lo = max(j_lo, bisect_left(his, (a1 + a3 - best) / 2))
                j_hi = min(j_hi, bisect_right(los, (b1 + b3 + best) / 2) - 1)
            for j in range(j_lo, j_hi + 1):
                a2, b2 = comps[j]
                lmin = _lmin_triple(a1, b1, a2, b2, a3, b3, eps)
                if lmin is None:
                    continue
                # max of L by reflection x -> -x
                lmax_ref = _lmin_triple(-b3, -a3, -b2, -a2, -b1, -a1, eps)
                val_min, ach_min = lmin
                val_max = -lmax_ref[0]
                if val_min <= 0 <= val_max:
                    raise MalformedInput(
                        "union contains a 3-term AP of step >= eps; "
                        "min_defect precondition violated")
                if val_min > 0:
                    cand, ach = val_min, ach_min
                else:
                    z1, z2, z3 = lmax_ref[1]
                    cand, ach = -val_max, (-z3, -z2, -z1)
                if best is None or cand < best:
                    best = cand
                    best_achiever = ach
    if best is None:
        raise VacuousDefect("no triple with both gaps >= eps exists in U")
    return DefectReport(best, best_achiever)


def stability_radius(union: IntervalUnion, eps: Fraction) -> Fraction:
    """The radius min(eps/2, gamma/5) below which perturbations of the map
    whose image U is cannot create 3-term APs of step exceeding 2*eps.

    A vacuous gap-constrained triple set drops the gamma term.
    """
    eps = Fraction(eps)
    try:
        gamma = min_defect(union, eps).gamma
    except VacuousDefect:
        return eps / 2
    return min(eps / 2, gamma / 5)


def ap_witness_long(union: IntervalUnion, n: int) -> Optional[APWitness]:
    """Length-n AP inside the widest positive-length component (leftmost on
    ties); None exactly when U has measure zero."""
    if n < 3:
        raise MalformedInput("AP length must be at least 3")
    widest = None
    for iv in union.components:
        if iv.length > 0 and (widest is None or iv.length > widest.length):
            widest = iv
    if widest is None:
        return None
    return APWitness(widest.lo, widest.length / (n - 1), n)


def brute_force_ap3(union: IntervalUnion, eps: Fraction,
                    denom_bound: int) -> Optional[APWitness]:
    """Exhaustive oracle over the grid of rationals with denominator dividing
    denom_bound; sound always, complete relative to the grid only."""
    eps = Fraction(eps)
    if eps <= 0:
        raise MalformedInput("eps must be positive")
    if denom_bound < 2:
        raise MalformedInput("denominator bound must be at least 2")
    N = denom_bound
    member = [union.contains(Fraction(j, N)) for j in range(N + 1)]
    d_start = max(1, math.ceil(eps * N))
    for dn in range(d_start, N // 2 + 1):
        for j in range(0, N - 2 * dn + 1):
            if member[j] and member[j + dn] and member[j + 2 * dn]:
                return APWitness(Fraction(j, N), Fraction(dn, N), 3)
    return None
