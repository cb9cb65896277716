"""Simulated block-transfer cost accounting.

The queues in this package are measured in an external-memory model: data
moves between a disk and a main memory of M words in blocks of B words, and
the only cost is the number of block transfers. This module owns that ledger.

Cost model used by the queue layer:

- A record buffer of s words costs ceil(s / B) block reads when its contents
  are inspected, unless the record is exempt. Exempt records are (a) records
  explicitly pinned in memory, and (b) the focal records of the operation's
  operand versions (first/last few records of each deque), which are treated
  as already resident: every queue is granted a constant number of resident
  blocks, so M must be at least b words per simultaneously live queue.
- Writes are charged when a dirty buffer leaves the focal set of an
  operation's result (it is flushed to disk). Buffers shorter than b words
  are never flushed: they fit in the queue's guaranteed resident block.
  Each backing array remembers how many of its words have been flushed, so
  a buffer repeatedly trimmed or extended in place only pays for new words.
- Spine nodes of the persistent deques hold no element data and are not
  charged; only record buffers count.
- Pinning is explicit, bounded by M, and never charges by itself; exceeding
  M sets a violation flag rather than raising, so a run can be inspected
  afterwards.

Counters are injectable: everything charges through an IoAccount, and tests
can hand each structure its own account or temporarily suspend charging.
Counter updates and the pin table are guarded by a lock so concurrent
readers of shared versions can charge safely.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

__all__ = [
    "IoConfig",
    "IoCounters",
    "IoAccount",
    "PinError",
    "charge_record_load",
    "charge_record_store",
    "pin",
    "unpin",
    "snapshot",
    "reset",
]


class PinError(Exception):
    """Raised for pin/unpin of a handle the account has never seen."""


@dataclass(frozen=True)
class IoConfig:
    """Model parameters: block size B, memory size M, buffer parameter b.

    All three are in words (one element = one word). Requires 1 <= b <= B <= M.
    """

    B: int
    M: int
    b: int

    def __post_init__(self):
        if not (1 <= self.b <= self.B <= self.M):
            raise ValueError(
                "need 1 <= b <= B <= M, got b=%d B=%d M=%d" % (self.b, self.B, self.M)
            )

    def blocks(self, words: int) -> int:
        return -(-words // self.B) if words > 0 else 0


class IoCounters:
    """Monotone transfer counters; reset() is the only way down."""

    __slots__ = ("reads", "writes", "peak_pinned_words")

    def __init__(self, reads: int = 0, writes: int = 0, peak_pinned_words: int = 0):
        self.reads = reads
        self.writes = writes
        self.peak_pinned_words = peak_pinned_words

    def snapshot(self) -> "IoCounters":
        return IoCounters(self.reads, self.writes, self.peak_pinned_words)

    def reset(self) -> None:
        self.reads = 0
        self.writes = 0
        self.peak_pinned_words = 0

    def to_text(self) -> str:
        return "reads=%d writes=%d peak_pinned=%d" % (
            self.reads,
            self.writes,
            self.peak_pinned_words,
        )

    def to_json(self) -> str:
        return json.dumps(
            {
                "reads": self.reads,
                "writes": self.writes,
                "peak_pinned": self.peak_pinned_words,
            }
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, IoCounters):
            return NotImplemented
        return (
            self.reads == other.reads
            and self.writes == other.writes
            and self.peak_pinned_words == other.peak_pinned_words
        )

    def __repr__(self) -> str:
        return "IoCounters(%s)" % self.to_text()


class _OpScope:
    """Charges accumulated by one public operation (nested calls join it).

    context / backings: record ids and buffer-backing ids known to be in
    memory for the duration of the operation (operand-resident, read, or
    created here). created / pre_resident / queues feed the write-back pass
    that runs when the outermost operation ends.
    """

    __slots__ = ("context", "backings", "blocks", "pre_resident", "created", "kept")

    def __init__(self):
        self.context: set[int] = set()
        self.backings: dict[int, tuple[int, int]] = {}  # backing id -> covered span
        self.blocks = 0
        self.pre_resident: dict[int, object] = {}
        self.created: dict[int, object] = {}
        self.kept: list = []  # versions the operation hands out; their working sets stay resident


class IoAccount:
    """One ledger shared by a family of queues or one index instance."""

    def __init__(self, cfg: IoConfig, counters: IoCounters | None = None):
        self.cfg = cfg
        self.counters = counters if counters is not None else IoCounters()
        self.violation = False
        self.max_op_blocks = 0
        self.last_op_blocks = 0
        self._registry: dict[int, int] = {}
        self._pinned: dict[int, int] = {}
        self._pinned_words = 0
        self._lock = threading.Lock()
        self._tls = threading.local()

    # -- registry and pins ------------------------------------------------

    def register(self, handle: int, words: int) -> None:
        self._registry[handle] = words

    def pin(self, handle: int) -> None:
        """Mark a record as memory-resident. Flags (not raises) if pins exceed M."""
        with self._lock:
            if handle not in self._registry:
                raise PinError("pin of unknown handle %r" % handle)
            if handle in self._pinned:
                return
            self._pinned[handle] = self._registry[handle]
            self._pinned_words += self._registry[handle]
            if self._pinned_words > self.counters.peak_pinned_words:
                self.counters.peak_pinned_words = self._pinned_words
            if self._pinned_words > self.cfg.M:
                self.violation = True

    def unpin(self, handle: int) -> None:
        with self._lock:
            if handle not in self._pinned:
                raise PinError("unpin of handle %r that is not pinned" % handle)
            self._pinned_words -= self._pinned.pop(handle)

    def is_pinned(self, handle: int) -> bool:
        return handle in self._pinned

    @property
    def pinned_words(self) -> int:
        return self._pinned_words

    # -- raw charging ------------------------------------------------------

    def _suspended(self) -> bool:
        return getattr(self._tls, "suspend", 0) > 0

    def charge_read_words(self, words: int) -> int:
        if self._suspended() or words <= 0:
            return 0
        n = self.cfg.blocks(words)
        with self._lock:
            self.counters.reads += n
        scope = getattr(self._tls, "op", None)
        if scope is not None:
            scope.blocks += n
        return n

    def charge_write_words(self, words: int) -> int:
        if self._suspended() or words <= 0:
            return 0
        n = self.cfg.blocks(words)
        with self._lock:
            self.counters.writes += n
        scope = getattr(self._tls, "op", None)
        if scope is not None:
            scope.blocks += n
        return n

    # -- operation scoping -------------------------------------------------

    def operation(self):
        """Context manager bounding one public queue operation."""
        return _Operation(self)

    def suspended(self):
        """Context manager under which nothing is charged (for oracles/tests)."""
        return _Suspend(self)

    def current_op(self) -> _OpScope | None:
        return getattr(self._tls, "op", None)

    def depth(self) -> int:
        return getattr(self._tls, "depth", 0)

    def snapshot(self) -> IoCounters:
        return self.counters.snapshot()

    def reset(self) -> None:
        self.counters.reset()
        self.max_op_blocks = 0
        self.last_op_blocks = 0
        self.violation = False


class _Operation:
    __slots__ = ("account", "_outer")

    def __init__(self, account: IoAccount):
        self.account = account
        self._outer = None

    def __enter__(self) -> _OpScope:
        tls = self.account._tls
        self._outer = getattr(tls, "op", None)
        if self._outer is None:
            tls.op = _OpScope()
        tls.depth = getattr(tls, "depth", 0) + 1
        return tls.op

    def __exit__(self, *exc) -> None:
        tls = self.account._tls
        tls.depth -= 1
        if tls.depth == 0:
            scope = tls.op
            tls.op = None
            self.account.last_op_blocks = scope.blocks
            if scope.blocks > self.account.max_op_blocks:
                self.account.max_op_blocks = scope.blocks
        return None


class _Suspend:
    __slots__ = ("account",)

    def __init__(self, account: IoAccount):
        self.account = account

    def __enter__(self):
        tls = self.account._tls
        tls.suspend = getattr(tls, "suspend", 0) + 1
        return self

    def __exit__(self, *exc):
        self.account._tls.suspend -= 1
        return None


# -- small functional facade ---------------------------------------------


def charge_record_load(account: IoAccount, record_size: int, handle: int | None = None) -> int:
    """Charge a read of one record; 0 if the record is pinned or size 0."""
    if record_size <= 0:
        return 0
    if handle is not None and account.is_pinned(handle):
        return 0
    return account.charge_read_words(record_size)


def charge_record_store(account: IoAccount, record_size: int, handle: int | None = None) -> int:
    """Charge a write of one record; 0 if the record is pinned or size 0."""
    if record_size <= 0:
        return 0
    if handle is not None and account.is_pinned(handle):
        return 0
    return account.charge_write_words(record_size)


def pin(account: IoAccount, handle: int) -> None:
    account.pin(handle)


def unpin(account: IoAccount, handle: int) -> None:
    account.unpin(handle)


def snapshot(counters: IoCounters) -> IoCounters:
    return counters.snapshot()


def reset(counters: IoCounters) -> None:
    counters.reset()
