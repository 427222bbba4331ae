"""AP decision procedures against small hand-checked instances."""
import random
from fractions import Fraction as F

import pytest

from apfree.apsearch import (ap_witness_long, brute_force_ap3, has_ap3,
                             min_defect, stability_radius)
from apfree.errors import MalformedInput, VacuousDefect
from apfree.intervals import IntervalUnion, normalize


THREE_BLOCKS = IntervalUnion.from_jsonable(
    [["0", "1/10"], ["9/20", "11/20"], ["9/10", "1"]])


def test_has_ap3_finds_known_witness():
    w = has_ap3(THREE_BLOCKS, F(2, 5))
    assert w is not None
    # lexicographically smallest (step, start): terms 1/10, 1/2, 9/10
    assert (w.step, w.start) == (F(2, 5), F(1, 10))
    assert w.terms() == [F(1, 10), F(1, 2), F(9, 10)]
    for t in w.terms():
        assert THREE_BLOCKS.contains(t)


def test_has_ap3_endpoint_step():
    # the only AP of step >= 1/2 is 0, 1/2, 1 exactly at the boundary
    w = has_ap3(THREE_BLOCKS, F(1, 2))
    assert w == (F(0), F(1, 2), 3)
    assert has_ap3(THREE_BLOCKS, F(1, 2), strict=True) is None


def test_has_ap3_strict_representative_step():
    u = normalize([(F(0), F(1))])
    w = has_ap3(u, F(1, 4), strict=True)
    assert w is not None
    assert F(1, 4) < w.step
    for t in w.terms():
        assert u.contains(t)


def test_has_ap3_none_on_sparse_points():
    u = normalize([(F(0), F(0)), (F(1, 9), F(1, 9)), (F(1, 3), F(1, 3)),
                   (F(4, 9), F(4, 9)), (F(1), F(1))])
    assert has_ap3(u, F(1, 100)) is None


def test_has_ap3_single_interval():
    u = normalize([(F(1, 4), F(3, 4))])
    w = has_ap3(u, F(1, 8))
    assert w == (F(1, 4), F(1, 8), 3)
    assert has_ap3(u, F(1, 4)) == (F(1, 4), F(1, 4), 3)
    assert has_ap3(u, F(1, 3)) is None


def test_has_ap3_rejects_bad_eps():
    with pytest.raises(MalformedInput):
        has_ap3(THREE_BLOCKS, F(0))


def test_min_defect_known_value():
    u = normalize([(F(0), F(0)), (F(3, 10), F(3, 10)), (F(1), F(1))])
    rep = min_defect(u, F(3, 10))
    assert rep.gamma == F(2, 5)
    assert rep.achiever == (F(0), F(3, 10), F(1))
    assert stability_radius(u, F(3, 10)) == F(2, 25)


def test_min_defect_achiever_is_feasible():
    rng = random.Random(21)
    for _ in range(100):
        pts = sorted(rng.sample(range(65), rng.randint(3, 7)))
        u = normalize([(F(p, 64), F(p, 64)) for p in pts])
        eps = F(1, 64)
        if has_ap3(u, eps) is not None:
            with pytest.raises(MalformedInput):
                min_defect(u, eps)
            continue
        try:
            rep = min_defect(u, eps)
        except VacuousDefect:
            continue
        x1, x2, x3 = rep.achiever
        assert all(u.contains(x) for x in rep.achiever)
        assert x2 - x1 >= eps and x3 - x2 >= eps
        assert abs(x1 + x3 - 2 * x2) == rep.gamma > 0
        # no grid triple does better
        best = min(abs(F(a, 64) + F(c, 64) - 2 * F(b, 64))
                   for a in pts for b in pts for c in pts
                   if b - a >= 1 and c - b >= 1)
        assert rep.gamma <= best


def test_min_defect_vacuous():
    u = normalize([(F(0), F(1, 100))])
    with pytest.raises(VacuousDefect):
        min_defect(u, F(1, 4))
    assert stability_radius(u, F(1, 4)) == F(1, 8)


def test_stability_radius_formula():
    u = normalize([(F(0), F(0)), (F(3, 10), F(3, 10)), (F(1), F(1))])
    # gamma/5 = 2/25 < eps/2 = 3/20
    assert stability_radius(u, F(3, 10)) == min(F(3, 20), F(2, 5) / 5)


def test_ap_witness_long():
    u = normalize([(F(0), F(1, 8)), (F(1, 4), F(3, 4)), (F(7, 8), F(1))])
    w = ap_witness_long(u, 11)
    assert w.length == 11
    assert w.start == F(1, 4) and w.step == F(1, 20)
    for t in w.terms():
        assert u.contains(t)
    assert ap_witness_long(normalize([(F(1, 2), F(1, 2))]), 5) is None
    with pytest.raises(MalformedInput):
        ap_witness_long(u, 2)


def test_brute_force_oracle_small():
    w = brute_force_ap3(THREE_BLOCKS, F(2, 5), 20)
    assert w is not None
    assert (w.step, w.start) == (F(2, 5), F(1, 10))
    assert brute_force_ap3(normalize([(F(0), F(1, 10))]), F(1, 4), 20) is None


def test_has_ap3_agrees_with_oracle_on_grid_unions():
    """On unions with denominator-64 endpoints, a grid-64 AP found by the
    oracle must also be found exactly, and exact absence implies grid
    absence (the grid is a subset of the reals)."""
    rng = random.Random(22)
    for _ in range(150):
        raw = []
        for _ in range(rng.randint(1, 4)):
            a = rng.randint(0, 64)
            b = min(64, a + rng.randint(0, 10))
            raw.append((F(a, 64), F(b, 64)))
        u = normalize(raw)
        for eps in (F(1, 4), F(1, 8)):
            exact = has_ap3(u, eps)
            grid = brute_force_ap3(u, eps, 64)
            if exact is None:
                assert grid is None
            if grid is not None:
                assert exact is not None
                assert exact.step <= grid.step
                for t in exact.terms():
                    assert u.contains(t)
