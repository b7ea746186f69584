"""Timing and memoization utilities for poset_hdx.

Timings are logged and summarized per operation; they never enter JSON
reports, which must stay byte-identical across runs.
"""

import functools
import logging
import threading
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Hashable, Optional, TypeVar

from .exceptions import PosetError

logger = logging.getLogger(__name__)

T = TypeVar("T")


@dataclass
class StepTiming:
    """One timed run of a suite step (or of the whole suite)."""

    name: str
    elements: Optional[int] = None
    started: float = field(default_factory=time.perf_counter)
    duration: Optional[float] = None
    error: Optional[str] = None

    def stop(self, error: Optional[str] = None) -> float:
        self.duration = time.perf_counter() - self.started
        self.error = error
        return self.duration


@dataclass
class StepSummary:
    """Running totals of every timing recorded under one name."""

    count: int = 0
    failures: int = 0
    total: float = 0.0
    slowest: float = 0.0
    fastest: Optional[float] = None

    def add(self, timing: StepTiming) -> None:
        duration = timing.duration or 0.0
        self.count += 1
        self.failures += timing.error is not None
        self.total += duration
        self.slowest = max(self.slowest, duration)
        self.fastest = duration if self.fastest is None else min(self.fastest, duration)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "count": self.count,
            "average": self.total / self.count if self.count else 0.0,
            "min": self.fastest or 0.0,
            "max": self.slowest,
            "total": self.total,
            "success_rate": (self.count - self.failures) / self.count if self.count else 0.0,
        }


class PerformanceMonitor:
    """
    Track timings of suite steps and warn about slow ones.

    The verification suite opens one operation per step; the collected
    statistics are logged at the end of a run.
    """

    def __init__(self, slow_step_seconds: float = 30.0):
        self.slow_step_seconds = slow_step_seconds
        self._summaries: Dict[str, StepSummary] = {}
        self._open: list[StepTiming] = []

    def start_operation(self, name: str, size: Optional[int] = None) -> StepTiming:
        """Open a timing for ``name``; ``size`` is the element count of the poset, if known."""
        timing = StepTiming(name, elements=size)
        self._open.append(timing)
        return timing

    def end_operation(
        self,
        timing: Optional[StepTiming] = None,
        success: bool = True,
        error: Optional[str] = None,
    ) -> None:
        """
        Close a timing and fold it into the step summary.

        Args:
            timing: The timing to close; the most recently opened one if None.
            success: False records the step as failed even without a message.
            error: Failure message.
        """
        if timing is None:
            if not self._open:
                return
            timing = self._open.pop()
        elif timing in self._open:
            self._open.remove(timing)

        if not success and error is None:
            error = "failed"
        duration = timing.stop(error)
        self._summaries.setdefault(timing.name, StepSummary()).add(timing)

        if duration > self.slow_step_seconds:
            scope = f" on {timing.elements} elements" if timing.elements is not None else ""
            logger.warning(
                f"Step '{timing.name}'{scope} took {duration:.2f}s "
                f"(threshold {self.slow_step_seconds}s)"
            )

    def get_operation_stats(self, name: str) -> Dict[str, Any]:
        summary = self._summaries.get(name)
        return summary.to_dict() if summary else {}

    def get_all_stats(self) -> Dict[str, Dict[str, Any]]:
        return {name: summary.to_dict() for name, summary in self._summaries.items()}

    def reset(self) -> None:
        self._summaries.clear()
        self._open.clear()


def _describe_target(args: tuple) -> str:
    # Builders and verifiers take the poset first.
    if args and hasattr(args[0], "d") and hasattr(args[0], "__len__"):
        return f" (|P|={len(args[0])}, d={args[0].d})"
    return ""


def timed_operation(operation_name: str):
    """
    Decorator logging the duration of a builder or verifier.

    A ``PosetError`` is logged at debug level only: unmet hypotheses are an
    expected outcome that callers turn into skipped checks.

    Example:
        @timed_operation("grassmannian")
        def grassmannian(q, n, d):
            ...
    """

    def decorator(func: Callable[..., T]) -> Callable[..., T]:
        @functools.wraps(func)
        def wrapper(*args, **kwargs) -> T:
            start = time.perf_counter()
            try:
                result = func(*args, **kwargs)
            except PosetError as e:
                logger.debug(f"{operation_name}{_describe_target(args)} rejected: {e}")
                raise
            except Exception as e:
                elapsed = time.perf_counter() - start
                logger.error(f"{operation_name} failed after {elapsed:.3f}s: {e}")
                raise
            elapsed = time.perf_counter() - start
            logger.debug(f"{operation_name}{_describe_target(args)} took {elapsed:.3f}s")
            return result

        return wrapper

    return decorator


class SimpleCache:
    """
    Least-recently-used cache keyed by element id, shared between worker threads.

    ``LinkTable`` sizes it to the poset so that no link is built twice within
    a run; smaller sizes trade rebuilds for memory on large instances.
    """

    def __init__(self, max_size: int = 4096):
        if max_size < 1:
            raise ValueError("max_size must be positive")
        self.max_size = max_size
        self.hits = 0
        self.misses = 0
        self._entries: "OrderedDict[Hashable, Any]" = OrderedDict()
        self._lock = threading.Lock()

    def get(self, key: Hashable) -> Optional[Any]:
        with self._lock:
            if key not in self._entries:
                self.misses += 1
                return None
            self.hits += 1
            self._entries.move_to_end(key)
            return self._entries[key]

    def set(self, key: Hashable, value: Any) -> None:
        with self._lock:
            self._entries[key] = value
            self._entries.move_to_end(key)
            while len(self._entries) > self.max_size:
                self._entries.popitem(last=False)

    def get_or_build(self, key: Hashable, builder: Callable[[], T]) -> T:
        """Return the cached value for ``key``, building and storing it on a miss."""
        value = self.get(key)
        if value is None:
            value = builder()
            self.set(key, value)
        return value

    def clear(self) -> None:
        with self._lock:
            self._entries.clear()
            self.hits = self.misses = 0

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)
