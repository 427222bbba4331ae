"""Canonical interval unions: normalization, queries, serialization."""
import random
from fractions import Fraction as F

import pytest

from apfree.errors import MalformedInput
from apfree.intervals import (ClosedInterval, IntervalUnion, normalize,
                              parse_rat, rat_str)


def test_parse_rat_roundtrip():
    for s in ["0", "1", "2/3", "-1/8", "355/113"]:
        assert rat_str(parse_rat(s)) == s


def test_parse_rat_rejects_garbage():
    for bad in ["", "x", "1/0", None]:
        with pytest.raises(MalformedInput):
            parse_rat(bad)


def test_merge_touching_and_overlapping():
    u = normalize([(F(0), F(1, 4)), (F(1, 4), F(1, 2)), (F(3, 4), F(1))])
    assert u.to_jsonable() == [["0", "1/2"], ["3/4", "1"]]
    v = normalize([(F(0), F(1, 3)), (F(1, 4), F(1, 2))])
    assert v.to_jsonable() == [["0", "1/2"]]


def test_degenerate_components_kept():
    u = normalize([(F(1, 2), F(1, 2)), (F(0), F(1, 4))])
    assert len(u) == 2
    assert u.contains(F(1, 2))
    assert not u.contains(F(3, 8))


def test_rejects_out_of_range():
    with pytest.raises(MalformedInput):
        normalize([(F(-1, 2), F(1, 2))])
    with pytest.raises(MalformedInput):
        normalize([(F(1, 2), F(1, 4))])


def test_measure_and_hull():
    u = normalize([(F(0), F(1, 4)), (F(1, 2), F(3, 4))])
    assert u.measure() == F(1, 2)
    assert u.hull() == ClosedInterval(F(0), F(3, 4))
    assert IntervalUnion().hull() is None
    assert not IntervalUnion()


def test_contains_at_endpoints():
    u = normalize([(F(1, 4), F(1, 2))])
    assert u.contains(F(1, 4)) and u.contains(F(1, 2))
    assert not u.contains(F(1, 8)) and not u.contains(F(3, 4))


def test_clip():
    u = normalize([(F(0), F(1, 4)), (F(1, 2), F(3, 4))])
    c = u.clip(ClosedInterval(F(1, 8), F(5, 8)))
    assert c.to_jsonable() == [["1/8", "1/4"], ["1/2", "5/8"]]
    assert u.clip(ClosedInterval(F(3, 8), F(7, 16))).to_jsonable() == []


def test_gap_point_widest_leftmost():
    u = normalize([(F(1, 4), F(5, 16)), (F(5, 8), F(3, 4))])
    # gaps in [0,1]: (0,1/4), (5/16,5/8), (3/4,1); widest is the middle
    p = u.gap_point_in(ClosedInterval(F(0), F(1)))
    assert p == F(15, 32)
    assert not u.contains(p)
    # on width ties the leftmost gap wins
    v = normalize([(F(1, 4), F(3, 8)), (F(5, 8), F(3, 4))])
    assert v.gap_point_in(ClosedInterval(F(0), F(1))) == F(1, 8)


def test_gap_point_none_when_covered():
    u = normalize([(F(0), F(1))])
    assert u.gap_point_in(ClosedInterval(F(1, 4), F(3, 4))) is None
    with pytest.raises(MalformedInput):
        u.gap_point_in(ClosedInterval(F(1, 2), F(1, 2)))


def test_gap_point_randomized_is_outside():
    rng = random.Random(7)
    for _ in range(200):
        raw = []
        for _ in range(rng.randint(1, 6)):
            a = F(rng.randint(0, 63), 64)
            b = min(F(1), a + F(rng.randint(0, 8), 64))
            raw.append((a, b))
        u = normalize(raw)
        lo = F(rng.randint(0, 31), 64)
        hi = lo + F(rng.randint(1, 32), 64)
        p = u.gap_point_in(ClosedInterval(lo, min(hi, F(1))))
        if p is not None:
            assert lo < p < min(hi, F(1)) or lo <= p <= min(hi, F(1))
            assert not u.contains(p)


def test_json_roundtrip():
    u = normalize([(F(0), F(1, 3)), (F(2, 3), F(2, 3))])
    assert IntervalUnion.from_jsonable(u.to_jsonable()) == u
    with pytest.raises(MalformedInput):
        IntervalUnion.from_jsonable({"lo": "0"})
    with pytest.raises(MalformedInput):
        IntervalUnion.from_jsonable([["0"]])


def test_equality_is_structural():
    a = normalize([(F(0), F(1, 2)), (F(1, 4), F(1, 2))])
    b = normalize([(F(0), F(1, 2))])
    assert a == b and hash(a) == hash(b)
