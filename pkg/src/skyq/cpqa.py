"""Persistent catenable priority queues with attrition, in block-transfer cost.

A queue is an immutable version of an ordered element sequence whose logical
contents are the elements strictly smaller than everything that follows them:
appending a run whose minimum key is e atomically deletes (attrites) every
earlier element with key >= e. Deletion is lazy. Attrited elements may linger
in buffers as zombies until some operation happens to cut the run they sit in,
but they are never reported and never affect the minimum.

Representation. A version holds three groups of record deques:

    C    clean deque: all elements alive, records simple
    Bq   buffer deque: records simple, may hold zombies in their tails
    D    dirty deques D_1 .. D_k: records may hold zombies anywhere and may
         carry a child queue holding elements that sit between this record's
         buffer and the next record

A record is an immutable (buffer, child) pair. Buffers are strictly
increasing element runs of at most 5b words, stored as views into shared
append-only backings so that cutting or extending a run never copies what it
keeps. The physical element order of a version is C, Bq, D_1 .. D_k, each
record contributing its buffer and then its child's elements. Queues holding
fewer than b elements are a single short simple record in C.

Ordering facts maintained across operations (checked by validate):

    - each buffer is strictly increasing, and within one deque consecutive
      records are strictly increasing across their boundary;
    - a record's buffer lies strictly below its child's minimum;
    - the last clean record lies strictly below the first buffered record and
      strictly below the first dirty record;
    - the first dirty record's first element is the minimum of everything in
      the dirty deques;
    - the structure counter delta(Q) = |C| - sum |D_i| - k + 1 is nonnegative
      between operations. Operations may lower it by a bounded amount; bias
      raises it by at least one, touching O(1) records near deque ends.

The first element of the first record is therefore the global minimum; every
version caches it, which makes find_min free.

Cost model. Every public operation runs in an account operation scope.
Reading a record's contents charges ceil(size / B) block reads unless the
record is resident: pinned, carried in from an operand version's working set,
or created during this operation. Record fence keys (min/max), sizes and the
per-version cached minimum are maintained metadata and free. When the
outermost operation exits, buffers that were resident or created but did not
stay in any result version's working set are written back, ceil(words / B)
block writes per backing run above its flushed watermark; buffers shorter
than b words live in the version's guaranteed memory allowance and are never
flushed.
"""

from __future__ import annotations

import itertools
import threading
from bisect import bisect_left
from contextlib import contextmanager
from fractions import Fraction
from operator import attrgetter
from typing import Any, Iterator, NamedTuple

from .blockio import IoAccount
from .pfdeque import PDeque

__all__ = [
    "Element",
    "EmptyQueueError",
    "ConfigMismatchError",
    "PreconditionViolatedError",
    "StructureError",
    "Queue",
    "Record",
    "empty",
    "singleton",
    "find_min",
    "delete_min",
    "insert_and_attrite",
    "catenate_and_attrite",
    "concat_sequence",
    "bias",
    "delta",
    "potential",
    "total_potential",
    "critical_records",
    "logical_elements",
    "size_elements",
    "record_count",
    "total_records",
    "drain",
    "validate",
    "ValidationCache",
    "dump",
]


class EmptyQueueError(Exception):
    """Raised by find_min/delete_min on an empty queue."""


class ConfigMismatchError(Exception):
    """Raised when operands charge different accounts."""


class PreconditionViolatedError(Exception):
    """Raised by concat_sequence when a queue's delta is too low."""


class StructureError(AssertionError):
    """Internal contract violation; message carries a structure dump."""


class Element(NamedTuple):
    key: Any
    payload: Any = None


_next_rid = itertools.count(1).__next__
_next_qid = itertools.count(1).__next__
_elkey = attrgetter("key")


def _as_element(e) -> Element:
    return e if isinstance(e, Element) else Element(e, None)


# -- buffers ----------------------------------------------------------------


class _Backing(list):
    """Append-only element run shared by the buffer views cut from it.

    flushed is the write-back watermark: words below it have already been
    charged as block writes and are never charged again.
    """

    __slots__ = ("flushed", "lock")

    def __init__(self, items=()):
        super().__init__(items)
        self.flushed = 0
        self.lock = threading.Lock()


class _Buf:
    """Immutable view [start:stop) of a backing run."""

    __slots__ = ("backing", "start", "stop")

    def __init__(self, backing: _Backing, start: int, stop: int):
        self.backing = backing
        self.start = start
        self.stop = stop

    @classmethod
    def of(cls, items) -> "_Buf":
        backing = _Backing(items)
        return cls(backing, 0, len(backing))

    def __len__(self) -> int:
        return self.stop - self.start

    def __iter__(self) -> Iterator[Element]:
        backing = self.backing
        for i in range(self.start, self.stop):
            yield backing[i]

    def reversed(self) -> Iterator[Element]:
        backing = self.backing
        for i in range(self.stop - 1, self.start - 1, -1):
            yield backing[i]

    @property
    def first(self) -> Element:
        return self.backing[self.start]

    @property
    def last(self) -> Element:
        return self.backing[self.stop - 1]

    @property
    def min_key(self):
        return self.backing[self.start].key

    @property
    def max_key(self):
        return self.backing[self.stop - 1].key

    def tolist(self) -> list[Element]:
        return self.backing[self.start : self.stop]

    def cut_lt(self, key) -> "_Buf":
        """Prefix view of the elements with key strictly below the given key."""
        i = bisect_left(self.backing, key, self.start, self.stop, key=_elkey)
        return _Buf(self.backing, self.start, i)

    def prefix(self, n: int) -> "_Buf":
        return _Buf(self.backing, self.start, self.start + n)

    def drop_front(self, n: int) -> "_Buf":
        return _Buf(self.backing, self.start + n, self.stop)

    def extend_tip(self, items: list[Element]) -> "_Buf":
        """Append items, sharing the backing when this view is its tip."""
        backing = self.backing
        with backing.lock:
            if len(backing) == self.stop:
                backing.extend(items)
                return _Buf(backing, self.start, self.stop + len(items))
        return _Buf.of(self.tolist() + items)


class Record:
    """One structural node: an increasing element run plus an optional child."""

    __slots__ = ("buf", "child", "rid")

    def __init__(self, buf: _Buf, child: "Queue | None" = None):
        self.buf = buf
        self.child = child
        self.rid = _next_rid()

    @property
    def size(self) -> int:
        return self.buf.stop - self.buf.start

    @property
    def min_key(self):
        return self.buf.min_key

    @property
    def max_key(self):
        return self.buf.max_key

    @property
    def simple(self) -> bool:
        return self.child is None

    def __repr__(self) -> str:
        child = "-" if self.child is None else "q%d" % self.child.qid
        return "(%r..%r,n=%d,child=%s)" % (self.min_key, self.max_key, self.size, child)


def _cover(scope, buf: _Buf) -> None:
    bid = id(buf.backing)
    box = scope.backings.get(bid)
    if box is None:
        scope.backings[bid] = (buf.start, buf.stop)
    else:
        lo, hi = box
        if buf.start < lo or buf.stop > hi:
            scope.backings[bid] = (min(lo, buf.start), max(hi, buf.stop))


def _new_record(account: IoAccount, buf: _Buf, child: "Queue | None" = None) -> Record:
    rec = Record(buf, child)
    account.register(rec.rid, len(buf))
    scope = account.current_op()
    if scope is not None:
        scope.created[rec.rid] = rec
        scope.context.add(rec.rid)
        _cover(scope, buf)
    return rec


def _load(account: IoAccount, rec: Record) -> None:
    """Bring a record's contents into memory for this operation."""
    scope = account.current_op()
    if scope is None:
        return
    rid = rec.rid
    if rid in scope.context:
        return
    buf = rec.buf
    box = scope.backings.get(id(buf.backing))
    if (box is not None and box[0] <= buf.start and buf.stop <= box[1]) or account.is_pinned(rid):
        scope.context.add(rid)
        _cover(scope, buf)
        return
    account.register(rid, rec.size)
    account.charge_read_words(rec.size)
    scope.context.add(rid)
    _cover(scope, buf)


# -- versions ---------------------------------------------------------------


def _focal_records(C: PDeque, Bq: PDeque, D: tuple[PDeque, ...]) -> tuple[Record, ...]:
    # The records any single operation may need: both ends of C plus its
    # second record, the head of Bq, and the ends of the dirty fringe.
    out: list[Record] = []
    if C:
        out.append(C.first())
        if len(C) > 1:
            out.append(C.get(1))
            out.append(C.last())
    if Bq:
        out.append(Bq.first())
    if D:
        dk = D[-1]
        out.append(D[0].first())
        out.append(dk.last())
        if len(dk) > 1:
            out.append(dk.get(len(dk) - 2))
        elif len(D) > 1:
            out.append(D[-2].last())
    seen: set[int] = set()
    uniq: list[Record] = []
    for rec in out:
        if rec.rid not in seen:
            seen.add(rec.rid)
            uniq.append(rec)
    return tuple(uniq)


class Queue:
    """One immutable queue version. Build with empty()/singleton() and the ops."""

    __slots__ = ("account", "C", "Bq", "D", "cached_min", "qid", "resident", "_focal")

    def __init__(
        self,
        account: IoAccount,
        C: PDeque,
        Bq: PDeque,
        D: tuple[PDeque, ...],
        cached_min: Element | None,
    ):
        self.account = account
        self.C = C
        self.Bq = Bq
        self.D = D
        self.cached_min = cached_min
        self.qid = _next_qid()
        self._focal = _focal_records(C, Bq, D)
        for rec in self._focal:
            account.register(rec.rid, rec.size)
        scope = account.current_op()
        if scope is None:
            self.resident = frozenset(r.rid for r in self._focal)
        else:
            ctx = scope.context
            self.resident = frozenset(r.rid for r in self._focal if r.rid in ctx)

    def is_empty(self) -> bool:
        return self.cached_min is None

    def __repr__(self) -> str:
        if self.cached_min is None:
            return "<Queue q%d empty>" % self.qid
        return "<Queue q%d min=%r delta=%d>" % (self.qid, self.cached_min.key, delta(self))


def _panic(Q: Queue, msg: str):
    raise StructureError(msg + "\n" + dump(Q))


@contextmanager
def _op(account: IoAccount, *operands: "Queue | None"):
    """Operation scope: seeds operand working sets, writes back displaced runs."""
    with account.operation() as scope:
        for q in operands:
            if q is None:
                continue
            res = q.resident
            if not res:
                continue
            scope.context.update(res)
            for rec in q._focal:
                if rec.rid in res:
                    scope.pre_resident.setdefault(rec.rid, rec)
                    _cover(scope, rec.buf)
        try:
            yield scope
        finally:
            if account.depth() == 1:
                _writeback(account, scope)


def _keep(account: IoAccount, Q: Queue) -> Queue:
    """Mark Q as an operation result: its working set stays in memory."""
    scope = account.current_op()
    if scope is not None:
        scope.kept.append(Q)
    return Q


def _writeback(account: IoAccount, scope) -> None:
    b = account.cfg.b
    protected: set[int] = set()
    cover: dict[int, int] = {}
    for q in scope.kept:
        for rec in q._focal:
            if rec.rid in q.resident:
                protected.add(rec.rid)
                bid = id(rec.buf.backing)
                if cover.get(bid, -1) < rec.buf.stop:
                    cover[bid] = rec.buf.stop
    candidates = dict(scope.pre_resident)
    candidates.update(scope.created)
    for rid, rec in candidates.items():
        if rid in protected or account.is_pinned(rid):
            continue
        buf = rec.buf
        if len(buf) < b:
            continue
        if cover.get(id(buf.backing), -1) >= buf.stop:
            continue  # a longer view of the same run stays resident
        backing = buf.backing
        with backing.lock:
            lo = backing.flushed
            if buf.start > lo:
                lo = buf.start
            words = buf.stop - lo
            if words > 0:
                backing.flushed = buf.stop
        if words > 0:
            account.charge_write_words(words)


def _front_element(C: PDeque, Bq: PDeque, D: tuple[PDeque, ...]) -> Element | None:
    for dq in (C, Bq) + D:
        if dq:
            return dq.first().buf.first
    return None


def _is_small_rep(Q: Queue) -> bool:
    return (
        bool(Q.C)
        and len(Q.C) == 1
        and not Q.Bq
        and not Q.D
        and Q.C.first().simple
        and Q.C.first().size < Q.account.cfg.b
    )


# -- construction and observation -------------------------------------------


def empty(account: IoAccount) -> Queue:
    return Queue(account, PDeque.empty(), PDeque.empty(), (), None)


def singleton(account: IoAccount, e) -> Queue:
    e = _as_element(e)
    with _op(account):
        rec = _new_record(account, _Buf.of([e]))
        return _keep(account, Queue(account, PDeque.of([rec]), PDeque.empty(), (), e))


def find_min(Q: Queue) -> Element:
    if Q.cached_min is None:
        raise EmptyQueueError("find_min on empty queue")
    return Q.cached_min


def delta(Q: Queue) -> int:
    return len(Q.C) - sum(len(d) for d in Q.D) - len(Q.D) + 1


def critical_records(Q: Queue) -> tuple[Record, ...]:
    """The records an operation on this version may touch; pin these to
    keep the version's operations free of cold reads."""
    return Q._focal


# -- attrition surgery helpers ----------------------------------------------


def _tail_records(Q: Queue):
    """(last record, second to last record or None) without copying."""
    deques = [Q.C, Q.Bq, *Q.D]
    deques = [d for d in deques if d]
    last_dq = deques[-1]
    r_last = last_dq.last()
    if len(last_dq) > 1:
        r_prev = last_dq.get(len(last_dq) - 2)
    elif len(deques) > 1:
        r_prev = deques[-2].last()
    else:
        r_prev = None
    return r_last, r_prev


def _eject_tail(C: PDeque, Bq: PDeque, D: tuple[PDeque, ...]):
    """Remove the physically last record. Returns (rec, C, Bq, D, slot)."""
    if D:
        rec, rest = D[-1].eject()
        if rest:
            return rec, C, Bq, D[:-1] + (rest,), "D"
        return rec, C, Bq, D[:-1], "D"
    if Bq:
        rec, rest = Bq.eject()
        return rec, C, rest, D, "B"
    rec, rest = C.eject()
    return rec, rest, Bq, D, "C"


def _inject_tail(C: PDeque, Bq: PDeque, D: tuple[PDeque, ...], slot: str, recs):
    """Append records at the tail of the deque kind the last ejection hit."""
    if slot == "C":
        for r in recs:
            C = C.inject(r)
    elif slot == "B":
        for r in recs:
            Bq = Bq.inject(r)
    else:
        if D:
            d = D[-1]
            for r in recs:
                d = d.inject(r)
            D = D[:-1] + (d,)
        else:
            D = (PDeque.of(recs),)
    return C, Bq, D


# -- catenation --------------------------------------------------------------


def catenate_and_attrite(Q1: Queue, Q2: Queue, *, _seq: bool = False) -> Queue:
    if Q1.account is not Q2.account:
        raise ConfigMismatchError("queues charge different accounts")
    account = Q1.account
    with _op(account, Q1, Q2):
        return _keep(account, _catenate(account, Q1, Q2, _seq))


def insert_and_attrite(Q: Queue, e) -> Queue:
    e = _as_element(e)
    account = Q.account
    with _op(account, Q):
        return _keep(account, _catenate(account, Q, singleton(account, e), False))


def _catenate(account: IoAccount, Q1: Queue, Q2: Queue, seq: bool) -> Queue:
    if Q2.cached_min is None:
        return Q1
    if Q1.cached_min is None:
        return Q2
    e = Q2.cached_min.key
    if e <= Q1.cached_min.key:
        return Q2  # Q1 is fully attrited
    new_min = Q1.cached_min
    b = account.cfg.b
    if _is_small_rep(Q1):
        return _cat_small_left(account, Q1, Q2, e, new_min, b)
    if _is_small_rep(Q2):
        res = _cat_small_right(account, Q1, Q2, e, new_min, b)
        if res is not None:
            return res
        # oversize merges fall through to the general machinery
    return _cat_general(account, Q1, Q2, e, new_min, b, seq)


def _cat_small_left(account, Q1, Q2, e, new_min, b):
    # Q1 is one short simple record: fold its survivors into Q2's first record.
    r1 = Q1.C.first()
    _load(account, r1)
    keep = r1.buf.cut_lt(e).tolist()
    if not keep:
        return Q2
    r2 = Q2.C.first()
    _load(account, r2)
    if len(keep) + r2.size <= 4 * b:
        merged = _new_record(account, _Buf.of(keep + r2.buf.tolist()), r2.child)
        newC = Q2.C.rest().push(merged)
        return Queue(account, newC, Q2.Bq, Q2.D, new_min)
    # keep the head record at exactly 2b, leave the remainder behind it
    take = 2 * b - len(keep)
    head = _new_record(account, _Buf.of(keep + r2.buf.prefix(take).tolist()))
    tail = _new_record(account, r2.buf.drop_front(take), r2.child)
    newC = Q2.C.rest().push(tail).push(head)
    return Queue(account, newC, Q2.Bq, Q2.D, new_min)


def _cat_small_right(account, Q1, Q2, e, new_min, b):
    # Q2 is one short simple run: absorb it at Q1's tail when the fences
    # allow, so short runs do not pile up as one-record deques.
    rq2 = Q2.C.first()
    cap = 5 * b
    r_last, r_prev = _tail_records(Q1)
    if e <= r_last.min_key:
        # the whole tail record dies (its child too, which sits above it)
        if r_prev is None or e <= r_prev.min_key:
            return None  # attrition reaches deeper, general dispatch
        _, C1, B1, D1, slot1 = _eject_tail(Q1.C, Q1.Bq, Q1.D)
        if e > r_prev.max_key:
            rec = _new_record(account, rq2.buf)
            C1, B1, D1 = _inject_tail(C1, B1, D1, slot1, [rec])
            return Queue(account, C1, B1, D1, new_min)
        _, C2, B2, D2, slot2 = _eject_tail(C1, B1, D1)
        _load(account, r_prev)
        keep = r_prev.buf.cut_lt(e)
        if len(keep) + rq2.size > cap:
            return None
        _load(account, rq2)
        merged = _new_record(account, _Buf.of(keep.tolist() + rq2.buf.tolist()))
        C2, B2, D2 = _inject_tail(C2, B2, D2, slot2, [merged])
        return Queue(account, C2, B2, D2, new_min)
    if e <= r_last.max_key:
        # partial cut kills the tail's upper run and its child
        _load(account, r_last)
        keep = r_last.buf.cut_lt(e)
        if len(keep) + rq2.size > cap:
            return None
        _load(account, rq2)
        _, C1, B1, D1, slot1 = _eject_tail(Q1.C, Q1.Bq, Q1.D)
        merged = _new_record(account, _Buf.of(keep.tolist() + rq2.buf.tolist()))
        C1, B1, D1 = _inject_tail(C1, B1, D1, slot1, [merged])
        return Queue(account, C1, B1, D1, new_min)
    if r_last.child is not None:
        return None  # the new run must land after the live child
    if r_last.size + rq2.size > cap:
        return None
    _load(account, r_last)
    _load(account, rq2)
    grown = _new_record(account, r_last.buf.extend_tip(rq2.buf.tolist()))
    _, C1, B1, D1, slot1 = _eject_tail(Q1.C, Q1.Bq, Q1.D)
    C1, B1, D1 = _inject_tail(C1, B1, D1, slot1, [grown])
    return Queue(account, C1, B1, D1, new_min)


def _behead(account: IoAccount, Q2: Queue) -> tuple[Record, Queue | None]:
    """Split Q2 into its first clean record and the remaining version."""
    l2rec = Q2.C.first()
    C2r = Q2.C.rest()
    if not C2r and not Q2.Bq and not Q2.D:
        return l2rec, None
    rest = Queue(account, C2r, Q2.Bq, Q2.D, _front_element(C2r, Q2.Bq, Q2.D))
    return l2rec, rest


def _cat_general(account, Q1, Q2, e, new_min, b, seq):
    C1, B1, D1 = Q1.C, Q1.Bq, Q1.D
    if not C1:
        _panic(Q1, "catenate on a version with an empty clean deque")
    l2rec, rest = _behead(account, Q2)
    if rest is not None:
        if not seq:
            rest = bias(rest, _seq=False)
        elif delta(rest) < 0:
            rest = bias(rest, _seq=True)

    bdead = bool(B1) and e <= B1.first().min_key
    if e <= C1.last().max_key:
        # attrition reaches into C: C becomes the zombie buffer, everything
        # behind it dies outright
        newrec = _new_record(account, l2rec.buf, rest)
        res = Queue(account, PDeque.empty(), C1, (PDeque.of([newrec]),), new_min)
    elif not D1 or e <= D1[0].first().min_key:
        # every dirty element dies; the buffer deque survives unless dead too
        newrec = _new_record(account, l2rec.buf, rest)
        keepB = PDeque.empty() if (bdead or not B1) else B1
        res = Queue(account, C1, keepB, (PDeque.of([newrec]),), new_min)
    else:
        # some dirty elements survive: open a new dirty deque at the tail
        newD = D1
        keep_items: list[Element] = []
        dk = newD[-1]
        tail = dk.last()
        if tail.size < b:
            # short simple tail: cut it into the new deque
            _load(account, tail)
            _, rest_dk = dk.eject()
            newD = newD[:-1] + (rest_dk,) if rest_dk else newD[:-1]
            keep_items = tail.buf.cut_lt(e).tolist()
        if keep_items and len(keep_items) + l2rec.size <= 4 * b:
            _load(account, l2rec)
            recs = [_new_record(account, _Buf.of(keep_items + l2rec.buf.tolist()), rest)]
        elif keep_items:
            take = 2 * b - len(keep_items)
            _load(account, l2rec)
            head = _new_record(account, _Buf.of(keep_items + l2rec.buf.prefix(take).tolist()))
            recs = [head, _new_record(account, l2rec.buf.drop_front(take), rest)]
        else:
            recs = [_new_record(account, l2rec.buf, rest)]
        newD = newD + (PDeque.of(recs),)
        keepB = PDeque.empty() if bdead else B1
        res = Queue(account, C1, keepB, newD, new_min)
        if not seq:
            res = bias(res)
    if seq:
        while delta(res) < 1:
            res = bias(res, _seq=True)
    else:
        res = bias(res)
        while delta(res) < 0:
            res = bias(res)
    return res


# -- minimum extraction -------------------------------------------------------


def delete_min(Q: Queue) -> tuple[Element, Queue]:
    if Q.cached_min is None:
        raise EmptyQueueError("delete_min on empty queue")
    account = Q.account
    b = account.cfg.b
    with _op(account, Q):
        guard = 0
        while not Q.C:
            Q = bias(Q)
            guard += 1
            if guard > 64:
                _panic(Q, "could not surface a clean record")
        C, Bq, D = Q.C, Q.Bq, Q.D
        r = C.first()
        _load(account, r)
        el = r.buf.first
        if el.key != Q.cached_min.key:
            _panic(Q, "cached minimum does not match the first element")
        rest_buf = r.buf.drop_front(1)
        if len(C) == 1 and not Bq and not D:
            if len(rest_buf) == 0:
                return el, _keep(account, Queue(account, PDeque.empty(), PDeque.empty(), (), None))
            rec = _new_record(account, rest_buf)
            return el, _keep(account, Queue(account, PDeque.of([rec]), PDeque.empty(), (), rest_buf.first))
        C2 = C.rest()
        aggravated = 0
        if len(rest_buf) >= b:
            newC = C2.push(_new_record(account, rest_buf))
            res = Queue(account, newC, Bq, D, rest_buf.first)
        else:
            # refill the head so it stays at b..3b words
            parts = rest_buf.tolist()
            guard = 0
            while True:
                guard += 1
                if guard > 64:
                    _panic(Q, "head refill did not terminate")
                if C2:
                    nxt = C2.first()
                    _load(account, nxt)
                    if nxt.size <= 2 * b:
                        parts = parts + nxt.buf.tolist()
                        C2 = C2.rest()
                        aggravated += 1
                        if parts and (len(parts) >= b or not (C2 or Bq or D)):
                            break
                        continue
                    if nxt.size <= 3 * b:
                        parts = parts + nxt.buf.prefix(b).tolist()
                        C2 = C2.rest().push(_new_record(account, nxt.buf.drop_front(b)))
                    else:
                        parts = parts + nxt.buf.prefix(2 * b).tolist()
                        C2 = C2.rest().push(_new_record(account, nxt.buf.drop_front(2 * b)))
                    break
                if Bq or D:
                    tmp = Queue(account, C2, Bq, D, _front_element(C2, Bq, D))
                    tmp = bias(tmp)
                    C2, Bq, D = tmp.C, tmp.Bq, tmp.D
                    continue
                break
            if not parts:
                return el, _keep(account, Queue(account, PDeque.empty(), PDeque.empty(), (), None))
            headrec = _new_record(account, _Buf.of(parts))
            res = Queue(account, C2.push(headrec), Bq, D, headrec.buf.first)
        for _ in range(aggravated):
            res = bias(res)
        while delta(res) < 0:
            res = bias(res)
        return el, _keep(account, res)


def drain(Q: Queue, *, charged: bool = True) -> list[Element]:
    """All live elements in increasing key order; Q itself stays valid."""
    out: list[Element] = []
    if charged:
        while Q.cached_min is not None:
            el, Q = delete_min(Q)
            out.append(el)
        return out
    with Q.account.suspended():
        while Q.cached_min is not None:
            el, Q = delete_min(Q)
            out.append(el)
    return out


# -- rebalancing --------------------------------------------------------------


def bias(Q: Queue, *, _seq: bool = False) -> Queue:
    """Raise delta(Q) by at least one. No-op on all-clean or empty versions."""
    if Q.cached_min is None or (not Q.Bq and not Q.D):
        return Q
    account = Q.account
    with _op(account, Q):
        target = delta(Q) + 1
        res = _bias_step(account, Q, 0, _seq)
        guard = 0
        while delta(res) < target and (res.Bq or res.D):
            res = _bias_step(account, res, 0, _seq)
            guard += 1
            if guard > 64:
                _panic(res, "bias failed to make progress")
        return _keep(account, res)


def _bias_step(account: IoAccount, Q: Queue, depth: int, seq: bool) -> Queue:
    if depth > 3:
        _panic(Q, "bias recursion exceeded its bound")
    if Q.cached_min is None:
        return Q
    b = account.cfg.b
    C, Bq, D = Q.C, Q.Bq, Q.D
    nm = Q.cached_min
    if len(D) > 1:
        return _bias_dirty_pair(account, Q, C, Bq, D, nm, b)
    if Bq and D:
        return _bias_buffer(account, Q, C, Bq, D, nm, b, depth, seq)
    if Bq:
        # no dirty deques, so nothing behind Bq attrites it: fold it clean
        return Queue(account, C.catenate(Bq), PDeque.empty(), (), nm)
    if D:
        return _bias_absorb(account, Q, C, D, nm, b, depth, seq)
    return Q


def _combine_pair(account, l1p: list[Element], r2: Record, b: int, allow_takes: bool):
    """Attach a surviving run l1p just below record r2.

    Returns (kind, replacement_for_r2, standalone_record). kind "prepend"
    merges into r2's buffer; "standalone" leaves r2 (possibly shortened) and
    emits a separate simple record that goes below it. Taking elements out of
    r2 is only allowed when the caller can place them next to r2's deque
    without putting live elements above older zombies.
    """
    n1 = len(l1p)
    n2 = r2.size
    if n1 == 0:
        if allow_takes and n2 > 2 * b:
            _load(account, r2)
            stand = _new_record(account, r2.buf.prefix(b))
            return "standalone", _new_record(account, r2.buf.drop_front(b), r2.child), stand
        return "prepend", r2, None
    if n1 < b and allow_takes:
        _load(account, r2)
        if n2 <= 2 * b:
            return "prepend", _new_record(account, _Buf.of(l1p + r2.buf.tolist()), r2.child), None
        stand = _new_record(account, _Buf.of(l1p + r2.buf.prefix(b).tolist()))
        return "standalone", _new_record(account, r2.buf.drop_front(b), r2.child), stand
    if n1 < 2 * b and n2 <= 2 * b and n1 + n2 <= 3 * b:
        _load(account, r2)
        return "prepend", _new_record(account, _Buf.of(l1p + r2.buf.tolist()), r2.child), None
    if allow_takes and n1 < 2 * b:
        _load(account, r2)
        if n2 <= 2 * b:
            comb = l1p + r2.buf.tolist()
            stand = _new_record(account, _Buf.of(comb[: 2 * b]))
            return "standalone", _new_record(account, _Buf.of(comb[2 * b :]), r2.child), stand
        stand = _new_record(account, _Buf.of(l1p + r2.buf.prefix(b).tolist()))
        return "standalone", _new_record(account, r2.buf.drop_front(b), r2.child), stand
    return "standalone", r2, _new_record(account, _Buf.of(l1p))


def _bias_buffer(account, Q, C, Bq, D, nm, b, depth, seq):
    # Move the head of Bq out: its survivors either prepend onto the first
    # dirty record or become a clean record. Runs only when k == 1, so
    # elements taken out of the first dirty record are sound in C.
    r1, Brest = Bq.pop()
    d1 = D[0]
    r2 = d1.first()
    e = r2.min_key
    _load(account, r1)
    keep = r1.buf.cut_lt(e)
    attrited = len(keep) < r1.size
    b_gone = attrited or not Brest
    kind, r2new, stand = _combine_pair(account, keep.tolist(), r2, b, b_gone)
    newB = PDeque.empty() if b_gone else Brest
    newD = (d1.rest().push(r2new),) + D[1:]
    if kind == "prepend":
        return _bias_step(account, Queue(account, C, newB, newD, nm), depth + 1, seq)
    return Queue(account, C.inject(stand), newB, newD, nm)


def _bias_dirty_pair(account, Q, C, Bq, D, nm, b):
    # Shrink the dirty fringe by resolving the boundary between the last two
    # deques. All movement stays inside dirty territory.
    left = D[-2]
    right = D[-1]
    e = right.first().min_key
    r1 = left.last()
    if e <= r1.min_key:
        # the boundary record and its child die outright
        rest = left.front()
        newD = D[:-2] + (rest, right) if rest else D[:-2] + (right,)
        return Queue(account, C, Bq, newD, nm)
    if e <= r1.max_key:
        _load(account, r1)
        keep = r1.buf.cut_lt(e)
        rest = left.front()
        kind, r2new, stand = _combine_pair(account, keep.tolist(), right.first(), b, True)
        right2 = right.rest().push(r2new)
        if stand is not None:
            right2 = right2.push(stand)
        merged = rest.catenate(right2)
        return Queue(account, C, Bq, D[:-2] + (merged,), nm)
    return Queue(account, C, Bq, D[:-2] + (left.catenate(right),), nm)


def _bias_absorb(account, Q, C, D, nm, b, depth, seq):
    # k == 1 and no buffer deque: surface the first dirty buffer as a clean
    # record and splice its child in, attrited by what remains dirty.
    d1 = D[0]
    r, d1rest = d1.pop()
    moved = _new_record(account, r.buf)
    newC = C.inject(moved)
    Dres: tuple[PDeque, ...] = (d1rest,) if d1rest else ()
    emin = d1rest.first().min_key if d1rest else None
    child = r.child
    if child is None or child.cached_min is None:
        res = Queue(account, newC, PDeque.empty(), Dres, nm)
    elif emin is not None and emin <= child.cached_min.key:
        res = Queue(account, newC, PDeque.empty(), Dres, nm)  # child fully dead
    else:
        Cc, Bc, Dc = child.C, child.Bq, child.D
        if not Cc:
            _panic(child, "child version with an empty clean deque")
        if emin is not None and emin <= Cc.last().max_key:
            res = Queue(account, newC, Cc, Dres, nm)
        elif not Dc or (emin is not None and emin <= Dc[0].first().min_key):
            keepB = Bc if (Bc and (emin is None or Bc.first().min_key < emin)) else PDeque.empty()
            res = Queue(account, newC.catenate(Cc), keepB, Dres, nm)
        else:
            res = Queue(account, newC.catenate(Cc), Bc, Dc + Dres, nm)
    if not C and r.size <= 2 * b:
        res = _repair_head(account, res, moved, nm, b, depth, seq)
    return res


def _repair_head(account, res, moved, nm, b, depth, seq):
    # A short record was surfaced to the very front: merge it with its
    # successor so the head stays comfortably sized.
    first_rec, Crest = res.C.pop()
    if first_rec is not moved:
        _panic(res, "surfaced record is not at the front")
    if not Crest and not res.Bq and not res.D:
        return res  # nothing to merge with
    sub = Queue(account, Crest, res.Bq, res.D, _front_element(Crest, res.Bq, res.D))
    if not sub.C:
        sub = _bias_step(account, sub, depth + 1, seq)
    if not sub.C:
        _panic(sub, "repair could not surface a successor record")
    r2, Crest2 = sub.C.pop()
    _load(account, moved)
    _load(account, r2)
    comb = moved.buf.tolist() + r2.buf.tolist()
    if len(comb) > 3 * b:
        head = _new_record(account, _Buf.of(comb[: 2 * b]))
        tail = _new_record(account, _Buf.of(comb[2 * b :]), r2.child)
        newC = Crest2.push(tail).push(head)
    else:
        newC = Crest2.push(_new_record(account, _Buf.of(comb), r2.child))
    return Queue(account, newC, sub.Bq, sub.D, nm)


# -- folding a pinned sequence -------------------------------------------------


def concat_sequence(queues: list[Queue]) -> Queue:
    """Fold catenate_and_attrite right to left over an ordered sequence.

    Every queue must arrive rebalanced: delta >= 2, or delta >= 1 when it
    holds exactly one record. With each queue's critical records pinned, the
    whole fold then runs without cold record reads.
    """
    if not queues:
        raise PreconditionViolatedError("empty sequence")
    account = queues[0].account
    for q in queues:
        if q.account is not account:
            raise ConfigMismatchError("queues charge different accounts")
        if q.cached_min is None:
            continue
        d = delta(q)
        if d >= 2:
            continue
        if d >= 1 and record_count(q) == 1:
            continue
        raise PreconditionViolatedError(
            "queue q%d has delta %d with %d records" % (q.qid, d, record_count(q))
        )
    with _op(account, *queues):
        acc = queues[-1]
        for q in reversed(queues[:-1]):
            acc = _catenate(account, q, acc, True)
            while delta(acc) < 1 and (acc.Bq or acc.D):
                acc = bias(acc, _seq=True)
        return _keep(account, acc)


# -- measures -----------------------------------------------------------------


def record_count(Q: Queue) -> int:
    return len(Q.C) + len(Q.Bq) + sum(len(d) for d in Q.D)


def _iter_queue_records(Q: Queue) -> Iterator[Record]:
    for dq in (Q.C, Q.Bq, *Q.D):
        for rec in dq:
            yield rec


def total_records(Q: Queue) -> int:
    """Records reachable from this version, children included."""
    seen_q: set[int] = set()
    seen_r: set[int] = set()
    stack = [Q]
    while stack:
        q = stack.pop()
        if q.qid in seen_q:
            continue
        seen_q.add(q.qid)
        for rec in _iter_queue_records(q):
            if rec.rid not in seen_r:
                seen_r.add(rec.rid)
                if rec.child is not None:
                    stack.append(rec.child)
    return len(seen_r)


def _clamp(x: int, lo: int, hi: int) -> int:
    return lo if x < lo else hi if x > hi else x


def _phi_first(x: int, b: int) -> Fraction:
    x = _clamp(x, b, 4 * b)
    if x < 2 * b:
        return 3 - Fraction(x, b)
    if x < 3 * b:
        return Fraction(1)
    return Fraction(2 * x, b) - 5


def _phi_last(x: int, b: int) -> Fraction:
    x = _clamp(x, 0, 5 * b)
    if x < 4 * b:
        return Fraction(0)
    return Fraction(3 * x, b) - 12


def potential(Q: Queue) -> Fraction:
    """Diagnostic charge stored in a version's record layout."""
    b = Q.account.cfg.b
    if Q.cached_min is None:
        return Fraction(0)
    if _is_small_rep(Q):
        return Fraction(3 * Q.C.first().size, b)
    recs = total_records(Q)
    first_rec = (Q.C or Q.Bq or Q.D[0]).first()
    r_last, _ = _tail_records(Q)
    middle = recs - 2
    if middle < 0:
        middle = 0
    return _phi_first(first_rec.size, b) + middle + _phi_last(r_last.size, b)


def total_potential(queues) -> Fraction:
    total = Fraction(0)
    for q in queues:
        total += potential(q)
        if q.cached_min is not None and not _is_small_rep(q):
            total += 1
    return total


def logical_elements(Q: Queue) -> list[Element]:
    """Live elements in increasing key order, by one reverse sweep."""
    out: list[Element] = []
    best = None
    stack: list[tuple[str, Any]] = [("q", Q)]
    while stack:
        kind, val = stack.pop()
        if kind == "q":
            if val.cached_min is None:
                continue
            if best is not None and val.cached_min.key >= best:
                continue
            for dq in (val.C, val.Bq, *val.D):
                for rec in dq:
                    stack.append(("r", rec))
        elif kind == "r":
            if best is not None and val.min_key >= best:
                continue
            stack.append(("b", val.buf))
            if val.child is not None:
                stack.append(("q", val.child))
        else:
            for el in val.reversed():
                if best is None or el.key < best:
                    out.append(el)
                    best = el.key
    out.reverse()
    return out


def size_elements(Q: Queue) -> int:
    """Number of live elements. Walks the version; attrition keeps this
    uncomputable in constant time."""
    return len(logical_elements(Q))


# -- validation ----------------------------------------------------------------


class _Summary:
    __slots__ = (
        "count",
        "first",
        "last",
        "chain_ok",
        "all_simple",
        "min_key",
        "max_size",
        "has_empty",
        "children",
    )

    def __init__(self, count, first, last, chain_ok, all_simple, min_key, max_size, has_empty, children):
        self.count = count
        self.first = first
        self.last = last
        self.chain_ok = chain_ok
        self.all_simple = all_simple
        self.min_key = min_key
        self.max_size = max_size
        self.has_empty = has_empty
        self.children = children


class ValidationCache:
    """Memoizes per-version and per-spine-node results across validate calls."""

    def __init__(self):
        self.ok: set[int] = set()
        self.nodes: dict[int, _Summary] = {}
        self.keep: list = []  # holds spine nodes alive so ids stay unique


def _summarize(node, cache: ValidationCache) -> _Summary:
    memo = cache.nodes
    got = memo.get(id(node))
    if got is not None:
        return got
    stack = [(node, False)]
    while stack:
        nd, expanded = stack.pop()
        if id(nd) in memo:
            continue
        if nd.height == 1:
            rec: Record = nd.item
            buf_ok = rec.size > 0
            memo[id(nd)] = _Summary(
                1,
                rec,
                rec,
                buf_ok,
                rec.child is None,
                rec.min_key if rec.size else None,
                rec.size,
                rec.size == 0,
                (rec,) if rec.child is not None else (),
            )
            cache.keep.append(nd)
            continue
        if not expanded:
            stack.append((nd, True))
            stack.append((nd.left, False))
            stack.append((nd.right, False))
            continue
        ls = memo[id(nd.left)]
        rs = memo[id(nd.right)]
        chain = (
            ls.chain_ok
            and rs.chain_ok
            and ls.last.size > 0
            and rs.first.size > 0
            and ls.last.max_key < rs.first.min_key
        )
        min_key = ls.min_key
        if rs.min_key is not None and (min_key is None or rs.min_key < min_key):
            min_key = rs.min_key
        memo[id(nd)] = _Summary(
            ls.count + rs.count,
            ls.first,
            rs.last,
            chain,
            ls.all_simple and rs.all_simple,
            min_key,
            ls.max_size if ls.max_size > rs.max_size else rs.max_size,
            ls.has_empty or rs.has_empty,
            ls.children + rs.children,
        )
        cache.keep.append(nd)
    return memo[id(node)]


def _validate_one(q: Queue, cache: ValidationCache, b: int) -> tuple[list[str], list[Queue]]:
    bad: list[str] = []
    children: list[Queue] = []
    if q.cached_min is None:
        if q.C or q.Bq or q.D:
            bad.append("shape: empty version holds records")
        return bad, children
    if not q.C:
        bad.append("shape: no clean records on a nonempty version")
    for dq in q.D:
        if not dq:
            bad.append("shape: empty dirty deque")
            return bad, children
    summaries = []
    names = ["C", "B"] + ["D%d" % (i + 1) for i in range(len(q.D))]
    for name, dq in zip(names, (q.C, q.Bq, *q.D)):
        if not dq:
            summaries.append(None)
            continue
        s = _summarize(dq._root, cache)
        summaries.append(s)
        if s.has_empty:
            bad.append("buffer-empty: %s holds a record with no elements" % name)
        if not s.chain_ok:
            bad.append("record-order: %s records are not strictly increasing" % name)
        if s.max_size > 5 * b:
            bad.append("buffer-bounds: %s holds a record above 5b words" % name)
        children.extend(rec.child for rec in s.children if rec.child is not None)
    sC, sB = summaries[0], summaries[1]
    sD = summaries[2:]
    if sC is not None and not sC.all_simple:
        bad.append("child-placement: clean record carries a child")
    if sB is not None and not sB.all_simple:
        bad.append("child-placement: buffered record carries a child")
    if sC is not None:
        if sB is not None and not (sC.last.size and sB.first.size and sC.last.max_key < sB.first.min_key):
            bad.append("record-order: clean tail not below buffer head")
        if sD and sD[0] is not None and not (sC.last.size and sD[0].first.size and sC.last.max_key < sD[0].first.min_key):
            bad.append("record-order: clean tail not below first dirty record")
    if sD:
        lead = sD[0].first.min_key if sD[0].first.size else None
        for s in sD:
            if lead is None or (s.min_key is not None and s.min_key < lead):
                bad.append("dirty-min: first dirty record does not hold the dirty minimum")
                break
    if delta(q) < 0:
        bad.append("state-counter: delta is negative")
    front = _front_element(q.C, q.Bq, q.D)
    if front is None or front.key != q.cached_min.key:
        bad.append("min-cache: cached minimum differs from the physical front")
    if sD:
        tail = sD[-1].last
        if tail.size < b and tail.child is not None:
            bad.append("tail-record: short dirty tail carries a child")
    if not _is_small_rep(q) and q.C and len(q.C) == 1 and not q.Bq and not q.D:
        rec = q.C.first()
        if rec.size < b and rec.child is not None:
            bad.append("tail-record: short single record carries a child")
    # records with children belong in dirty deques; check their fences
    for s in sD:
        for rec in s.children:
            child = rec.child
            if child.cached_min is None:
                bad.append("child-placement: record points at an empty child")
            elif rec.max_key >= child.cached_min.key:
                bad.append("child-order: record buffer reaches into its child")
    return bad, children


def validate(Q: Queue, cache: ValidationCache | None = None) -> list[str]:
    """All invariant violations reachable from this version; [] when sound."""
    if cache is None:
        cache = ValidationCache()
    account = Q.account
    b = account.cfg.b
    out: list[str] = []
    with account.suspended():
        # post-order over the version DAG so a version is marked sound only
        # when its children are
        state: dict[int, bool] = {}
        pending: dict[int, tuple[list[str], list[Queue]]] = {}
        stack: list[tuple[Queue, bool]] = [(Q, False)]
        while stack:
            q, expanded = stack.pop()
            if q.qid in cache.ok or q.qid in state:
                continue
            if not expanded:
                if q.qid in pending:
                    continue
                found = _validate_one(q, cache, b)
                pending[q.qid] = found
                stack.append((q, True))
                for kid in found[1]:
                    if kid.qid not in cache.ok and kid.qid not in state and kid.qid not in pending:
                        stack.append((kid, False))
                continue
            bad, kids = pending.pop(q.qid)
            ok = not bad
            for kid in kids:
                if kid.qid not in cache.ok and not state.get(kid.qid, False):
                    ok = False
            for msg in bad:
                out.append("q%d %s" % (q.qid, msg))
            state[q.qid] = ok
            if ok:
                cache.ok.add(q.qid)
    return out


# -- debugging -----------------------------------------------------------------


def dump(Q: Queue) -> str:
    """Text layout of a version and its children, queue ids local to the dump."""
    lines: list[str] = []
    local: dict[int, int] = {}
    order: list[Queue] = []

    def visit(q: Queue):
        if q.qid in local:
            return
        local[q.qid] = len(local)
        order.append(q)
        for rec in _iter_queue_records(q):
            if rec.child is not None:
                visit(rec.child)

    visit(Q)

    def fmt(rec: Record) -> str:
        child = "-" if rec.child is None else "q%d" % local[rec.child.qid]
        return "(%s..%s,n=%d,child=%s)" % (rec.min_key, rec.max_key, rec.size, child)

    for q in order:
        mink = "-" if q.cached_min is None else repr(q.cached_min.key)
        lines.append("queue q%d delta=%d min=%s" % (local[q.qid], delta(q), mink))
        lines.append("C: [%s]" % "|".join(fmt(r) for r in q.C))
        lines.append("B: [%s]" % "|".join(fmt(r) for r in q.Bq))
        for i, dq in enumerate(q.D):
            lines.append("D%d: [%s]" % (i + 1, "|".join(fmt(r) for r in dq)))
    return "\n".join(lines)
