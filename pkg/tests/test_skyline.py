"""Unit tests for the dynamic 3-sided range-maxima index."""

import random

import pytest

from skyq.oracle import naive_maxima, naive_query3
from skyq.skyline import SkylineIndex, skyline_key


def test_key_orders_by_descending_y_breaking_ties_right():
    assert skyline_key((1, 5)) < skyline_key((2, 3))
    # equal heights: the right point wins, so it must sort first
    assert skyline_key((4, 3)) < skyline_key((2, 3))
    assert sorted([(1, 5), (2, 3), (3, 8)], key=skyline_key) == [(3, 8), (1, 5), (2, 3)]


def test_equal_heights_keep_only_rightmost():
    pts = [(1, 7), (3, 7), (5, 7)]
    idx = SkylineIndex(pts)
    assert idx.maxima() == [(5, 7)]
    assert idx.query3(0, 10, 0) == [(5, 7)]
    # a band that cuts the dominating point off resurrects the left ones
    assert idx.query3(0, 4, 0) == [(3, 7)]
    assert idx.query3(0, 2, 0) == [(1, 7)]


def test_empty_index():
    idx = SkylineIndex()
    assert len(idx) == 0
    assert idx.maxima() == []
    assert idx.query3(0, 100, 0) == []
    assert (1, 1) not in idx


def test_hand_case_maxima():
    pts = [(1, 5), (2, 3), (3, 8), (4, 1), (5, 6)]
    idx = SkylineIndex(pts)
    assert len(idx) == 5
    assert idx.maxima() == [(3, 8), (5, 6)]
    for p in pts:
        assert p in idx
    assert (9, 9) not in idx


def test_hand_case_queries():
    pts = [(1, 5), (2, 3), (3, 8), (4, 1), (5, 6)]
    idx = SkylineIndex(pts)
    assert idx.query3(1, 5, 0) == [(3, 8), (5, 6)]
    assert idx.query3(1, 2, 0) == [(1, 5), (2, 3)]
    assert idx.query3(1, 5, 7) == [(3, 8)]
    assert idx.query3(4, 4, 2) == []
    assert idx.query3(6, 9, 0) == []


def test_query_output_is_x_ordered():
    rng = random.Random(3)
    pts = [(x, rng.randrange(1000)) for x in rng.sample(range(5000), 400)]
    idx = SkylineIndex(pts)
    for _ in range(50):
        lo = rng.randrange(5000)
        hi = lo + rng.randrange(1, 5000 - lo + 1)
        out = idx.query3(lo, hi, rng.randrange(1000))
        assert out == sorted(out)
    pts_sorted = sorted(pts)
    for _ in range(100):
        lo = rng.randrange(5000)
        hi = lo + rng.randrange(1, 5000 - lo + 1)
        ym = rng.randrange(1000)
        assert idx.query3(lo, hi, ym) == naive_query3(pts_sorted, lo, hi, ym)


def test_maxima_matches_oracle_random():
    rng = random.Random(4)
    pts = [(x, rng.randrange(10_000)) for x in rng.sample(range(50_000), 700)]
    idx = SkylineIndex(pts)
    assert idx.maxima() == naive_maxima(sorted(pts))


def test_insert_then_query():
    idx = SkylineIndex()
    live = []
    rng = random.Random(5)
    xs = rng.sample(range(10_000), 300)
    for x in xs:
        p = (x, rng.randrange(1000))
        idx.insert(p)
        live.append(p)
        if len(live) % 50 == 0:
            assert idx.maxima() == naive_maxima(sorted(live))
    assert len(idx) == 300
    live.sort()
    for _ in range(60):
        lo = rng.randrange(10_000)
        hi = lo + rng.randrange(1, 10_000 - lo + 1)
        ym = rng.randrange(1000)
        assert idx.query3(lo, hi, ym) == naive_query3(live, lo, hi, ym)


def test_delete_and_requery():
    rng = random.Random(6)
    pts = [(x, rng.randrange(500)) for x in rng.sample(range(2000), 200)]
    idx = SkylineIndex(pts)
    live = sorted(pts)
    rng.shuffle(pts)
    for i, p in enumerate(pts[:150]):
        assert idx.delete(p)
        live.remove(p)
        if i % 25 == 0:
            assert idx.maxima() == naive_maxima(live)
            lo = rng.randrange(2000)
            hi = lo + rng.randrange(1, 2000 - lo + 1)
            assert idx.query3(lo, hi, 0) == naive_query3(live, lo, hi, 0)
    assert len(idx) == 50


def test_delete_missing_point_returns_false():
    idx = SkylineIndex([(1, 1), (2, 2)])
    assert not idx.delete((5, 5))
    assert not idx.delete((1, 2))  # same x, different y
    assert len(idx) == 2
    assert idx.delete((1, 1))
    assert len(idx) == 1


def test_delete_to_empty_and_rebuild():
    idx = SkylineIndex([(i, i % 7) for i in range(60)])
    for i in range(60):
        assert idx.delete((i, i % 7))
    assert len(idx) == 0
    assert idx.maxima() == []
    idx.insert((5, 5))
    assert idx.maxima() == [(5, 5)]


def test_mixed_update_query_stream_matches_oracle():
    rng = random.Random(7)
    idx = SkylineIndex()
    live = {}
    next_x = iter(rng.sample(range(1_000_000), 5000))
    for step in range(1200):
        r = rng.random()
        if r < 0.55 or not live:
            x = next(next_x)
            p = (x, rng.randrange(100_000))
            idx.insert(p)
            live[x] = p
        elif r < 0.75:
            x = rng.choice(list(live))
            assert idx.delete(live.pop(x))
        else:
            lo = rng.randrange(1_000_000)
            hi = lo + rng.randrange(1, 1_000_000 - lo + 1)
            ym = rng.randrange(100_000)
            assert idx.query3(lo, hi, ym) == naive_query3(
                sorted(live.values()), lo, hi, ym
            )
    assert len(idx) == len(live)


def test_duplicate_x_rejected():
    idx = SkylineIndex([(1, 1)])
    with pytest.raises(ValueError):
        idx.insert((1, 9))


def test_counters_move_under_queries():
    rng = random.Random(8)
    pts = [(x, rng.randrange(10_000)) for x in rng.sample(range(100_000), 3000)]
    idx = SkylineIndex(pts)
    before = idx.counters().snapshot()
    for _ in range(20):
        lo = rng.randrange(100_000)
        hi = lo + rng.randrange(1, 100_000 - lo + 1)
        idx.query3(lo, hi, rng.randrange(10_000))
    after = idx.counters().snapshot()
    assert after.reads > before.reads
