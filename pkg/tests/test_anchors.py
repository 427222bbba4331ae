"""AP-free anchor selection and the greedy progression-free sequence."""
import random
from fractions import Fraction as F

import pytest

from apfree.anchors import defect, pick_apfree, stanley_points
from apfree.errors import MalformedInput
from apfree.intervals import ClosedInterval


def brute_defect(pts):
    return min(abs(pts[m] + pts[k] - 2 * pts[n])
               for m in range(len(pts))
               for n in range(m + 1, len(pts))
               for k in range(n + 1, len(pts)))


def test_defect_matches_brute_force():
    rng = random.Random(31)
    for _ in range(100):
        vals = sorted(rng.sample(range(0, 512), rng.randint(3, 12)))
        pts = [F(v, 512) for v in vals]
        if brute_defect(pts) == 0:
            with pytest.raises(MalformedInput):
                defect(pts)
        else:
            assert defect(pts) == brute_defect(pts)


def test_defect_screened_path_matches_exact():
    # force the screened branch with > 256 points and compare to the
    # exact all-pairs implementation on the same input
    from apfree.anchors import _defect_exact
    rng = random.Random(32)
    vals = sorted(rng.sample(range(0, 10**6), 300))
    pts = [F(v, 10**6) for v in vals]
    try:
        expected = _defect_exact(pts)
    except MalformedInput:
        expected = None
    if expected is None:
        with pytest.raises(MalformedInput):
            defect(pts)
    else:
        assert defect(pts) == expected


def test_defect_input_validation():
    with pytest.raises(MalformedInput):
        defect([F(0), F(1)])
    with pytest.raises(MalformedInput):
        defect([F(0), F(1, 2), F(1, 2)])
    with pytest.raises(MalformedInput):
        defect([F(0), F(1, 2), F(1)])  # exact AP


def test_stanley_prefix():
    cfg = stanley_points(5)
    assert cfg.points == (F(0), F(1, 9), F(1, 3), F(4, 9), F(1))
    assert cfg.defect == brute_defect(cfg.points) > 0


@pytest.mark.parametrize("r", [3, 4, 8, 16, 64])
def test_stanley_is_ap_free(r):
    cfg = stanley_points(r)
    assert len(cfg.points) == r
    assert cfg.points[0] == 0 and cfg.points[-1] == 1
    assert all(b > a for a, b in zip(cfg.points, cfg.points[1:]))
    assert cfg.defect > 0


def test_pick_apfree_small():
    cells = [ClosedInterval(F(0), F(1, 16)),
             ClosedInterval(F(3, 8), F(7, 16)),
             ClosedInterval(F(15, 16), F(1))]
    cfg = pick_apfree(cells)
    assert cfg.points[0] == 0 and cfg.points[-1] == 1
    for p, c in zip(cfg.points, cells):
        assert c.contains(p)
    assert cfg.defect == brute_defect(cfg.points) > 0


def test_pick_apfree_deterministic_and_randomized():
    rng = random.Random(33)
    for _ in range(25):
        r = rng.randint(3, 12)
        # r disjoint cells on a fine grid, first at 0, last at 1
        edges = sorted(rng.sample(range(1, 4096), 2 * r - 2))
        cells = [ClosedInterval(F(0), F(edges[0], 4096))]
        for i in range(1, r - 1):
            cells.append(ClosedInterval(F(edges[2 * i - 1], 4096),
                                        F(edges[2 * i], 4096)))
        cells.append(ClosedInterval(F(edges[-1], 4096), F(1)))
        if any(b.lo <= a.hi for a, b in zip(cells, cells[1:])):
            continue
        cfg = pick_apfree(cells)
        assert cfg == pick_apfree(cells)
        assert len(cfg.points) == r
        for p, c in zip(cfg.points, cells):
            assert c.contains(p)
        assert cfg.defect == brute_defect(cfg.points) > 0


def test_pick_apfree_dodges_midpoint_collision():
    # the midpoint of the middle cell completes an AP with 0 and 1, so
    # the walk must move off 1/2
    cells = [ClosedInterval(F(0), F(0)),
             ClosedInterval(F(15, 32), F(17, 32)),
             ClosedInterval(F(1), F(1))]
    cfg = pick_apfree(cells)
    assert cfg.points[1] != F(1, 2)
    assert cfg.defect > 0


def test_pick_apfree_validates_cells():
    with pytest.raises(MalformedInput):
        pick_apfree([ClosedInterval(F(0), F(1, 4)),
                     ClosedInterval(F(1, 8), F(1, 2)),
                     ClosedInterval(F(3, 4), F(1))])
    with pytest.raises(MalformedInput):
        pick_apfree([ClosedInterval(F(1, 8), F(1, 4)),
                     ClosedInterval(F(1, 2), F(5, 8)),
                     ClosedInterval(F(3, 4), F(1))])
    with pytest.raises(MalformedInput):
        pick_apfree([ClosedInterval(F(0), F(1, 4)),
                     ClosedInterval(F(1, 2), F(1, 2)),
                     ClosedInterval(F(3, 4), F(1))])


def test_residue_screen_matches_plain_path():
    """Grow past the screening threshold and confirm the same points come
    out as with the threshold effectively disabled."""
    import apfree.anchors as anchors
    cells = []
    n = 600
    for i in range(n):
        lo = F(2 * i, 2 * n)
        hi = lo + F(1, 4 * n)
        cells.append(ClosedInterval(lo, hi))
    cells[-1] = ClosedInterval(F(2 * (n - 1), 2 * n), F(1))
    fast = pick_apfree(cells)
    old = anchors._FAST_THRESHOLD
    anchors._FAST_THRESHOLD = 10**9
    try:
        slow_points = pick_apfree(cells).points
    finally:
        anchors._FAST_THRESHOLD = old
    assert fast.points == slow_points
