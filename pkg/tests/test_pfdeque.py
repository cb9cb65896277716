"""Unit tests for the persistent catenable deque."""

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from skyq.pfdeque import EmptyDequeError, PDeque


def test_empty():
    d = PDeque.empty()
    assert len(d) == 0
    assert not d
    assert list(d) == []
    with pytest.raises(EmptyDequeError):
        d.first()
    with pytest.raises(EmptyDequeError):
        d.last()
    with pytest.raises(EmptyDequeError):
        d.pop()
    with pytest.raises(EmptyDequeError):
        d.eject()


def test_of_and_iter():
    d = PDeque.of([1, 2, 3])
    assert list(d) == [1, 2, 3]
    assert len(d) == 3
    assert d.first() == 1
    assert d.last() == 3


def test_push_pop_fifo_lifo():
    d = PDeque.empty()
    for i in range(10):
        d = d.inject(i)
    assert list(d) == list(range(10))
    front, rest = d.pop()
    assert front == 0
    assert list(rest) == list(range(1, 10))
    back, head = d.eject()
    assert back == 9
    assert list(head) == list(range(9))


def test_push_prepends():
    d = PDeque.of([5, 6])
    d2 = d.push(4)
    assert list(d2) == [4, 5, 6]
    # the original version is untouched
    assert list(d) == [5, 6]


def test_get_indexing():
    items = list(range(50))
    d = PDeque.of(items)
    for i in range(50):
        assert d.get(i) == i
    with pytest.raises(IndexError):
        d.get(50)


def test_catenate():
    a = PDeque.of([1, 2])
    b = PDeque.of([3, 4, 5])
    c = a.catenate(b)
    assert list(c) == [1, 2, 3, 4, 5]
    # operands survive
    assert list(a) == [1, 2]
    assert list(b) == [3, 4, 5]


def test_catenate_empty_sides():
    a = PDeque.of([1])
    e = PDeque.empty()
    assert list(a.catenate(e)) == [1]
    assert list(e.catenate(a)) == [1]
    assert list(e.catenate(e)) == []


def test_rest_front():
    d = PDeque.of([7, 8, 9])
    assert list(d.rest()) == [8, 9]
    assert list(d.front()) == [7, 8]


def test_persistence_under_mutation_sequence():
    versions = [PDeque.empty()]
    for i in range(64):
        versions.append(versions[-1].inject(i))
    for i, v in enumerate(versions):
        assert list(v) == list(range(i))


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(), max_size=60), st.lists(st.integers(), max_size=60))
def test_catenate_matches_list_concat(xs, ys):
    assert list(PDeque.of(xs).catenate(PDeque.of(ys))) == xs + ys


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(), min_size=1, max_size=80), st.data())
def test_get_matches_list(xs, data):
    d = PDeque.of(xs)
    i = data.draw(st.integers(min_value=0, max_value=len(xs) - 1))
    assert d.get(i) == xs[i]


def test_balance_height_logarithmic():
    d = PDeque.of(range(4096))
    # a height-balanced tree over 4096 leaves stays shallow
    assert d._root.height <= 24


def test_random_op_equivalence():
    rng = random.Random(9)
    d = PDeque.empty()
    ref = []
    for _ in range(2000):
        pick = rng.randrange(6)
        if pick == 0:
            x = rng.randrange(1000)
            d = d.push(x)
            ref.insert(0, x)
        elif pick == 1:
            x = rng.randrange(1000)
            d = d.inject(x)
            ref.append(x)
        elif pick == 2 and ref:
            front, d = d.pop()
            assert front == ref.pop(0)
        elif pick == 3 and ref:
            back, d = d.eject()
            assert back == ref.pop()
        elif pick == 4:
            other = [rng.randrange(1000) for _ in range(rng.randrange(5))]
            d = d.catenate(PDeque.of(other))
            ref.extend(other)
        elif pick == 5 and ref:
            i = rng.randrange(len(ref))
            assert d.get(i) == ref[i]
        assert len(d) == len(ref)
    assert list(d) == ref
