"""Catenable priority queues with attrition and a dynamic range-skyline index,
both under simulated block-transfer cost accounting."""

from .blockio import IoAccount, IoConfig, IoCounters, PinError
from .cpqa import (
    ConfigMismatchError,
    Element,
    EmptyQueueError,
    PreconditionViolatedError,
    Queue,
    StructureError,
    ValidationCache,
    bias,
    catenate_and_attrite,
    concat_sequence,
    critical_records,
    delete_min,
    delta,
    drain,
    dump,
    empty,
    find_min,
    insert_and_attrite,
    logical_elements,
    potential,
    record_count,
    singleton,
    size_elements,
    total_potential,
    total_records,
    validate,
)
from .pfdeque import EmptyDequeError, PDeque
from .skyline import SkylineIndex, skyline_key

__version__ = "0.1.0"

__all__ = [
    "IoAccount",
    "IoConfig",
    "IoCounters",
    "PinError",
    "PDeque",
    "EmptyDequeError",
    "Element",
    "Queue",
    "EmptyQueueError",
    "ConfigMismatchError",
    "PreconditionViolatedError",
    "StructureError",
    "ValidationCache",
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
    "dump",
    "SkylineIndex",
    "skyline_key",
    "__version__",
]
