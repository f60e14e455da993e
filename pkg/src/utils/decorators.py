import functools
import logging
import time
from collections import defaultdict
from typing import Callable, DefaultDict, Dict, List, Tuple, TypeVar

import pandas as pd

from src.models.records import ITimingRow
from settings import MAX_RESAMPLES

T = TypeVar("T")


class ResampleRequired(Exception):
    """Raised by a sampler whose draw landed on a forbidden value."""


def resample(func: Callable[..., T]) -> Callable[..., T]:
    """
    Retry a randomized draw that raised ResampleRequired.

    Zero scalars have probability 1/q; on the toy backend that is frequent
    enough to need a bounded retry loop. The draw fails loudly after
    MAX_RESAMPLES attempts since the rng is then almost certainly broken.
    """
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        for attempt in range(MAX_RESAMPLES):
            try:
                return func(*args, **kwargs)
            except ResampleRequired as e:
                logging.warning(
                    "[%s] (Attempt: %d/%d) – Draw rejected: %s. Resampling...",
                    func.__name__, attempt + 1, MAX_RESAMPLES, str(e)
                )
                continue

        logging.error(
            "[%s] (Attempts exceeded!) – Could not draw an acceptable value!",
            func.__name__
        )
        raise RuntimeError(f"{func.__name__} failed after {MAX_RESAMPLES} draws")
    return wrapper


class TimingRegistry:
    """Collects wall-clock samples per operation name, in nanoseconds."""

    def __init__(self):
        self._samples: DefaultDict[str, List[int]] = defaultdict(list)

    def record(self, op: str, elapsed_ns: int) -> None:
        self._samples[op].append(elapsed_ns)

    def samples(self) -> Dict[str, List[int]]:
        return {op: list(values) for op, values in self._samples.items()}

    def timed(self, op: str) -> Callable[[Callable[..., T]], Callable[..., T]]:
        def decorator(func: Callable[..., T]) -> Callable[..., T]:
            @functools.wraps(func)
            def wrapper(*args, **kwargs):
                start = time.perf_counter_ns()
                try:
                    return func(*args, **kwargs)
                finally:
                    self.record(op, time.perf_counter_ns() - start)
            return wrapper
        return decorator

    def summary(self) -> List[ITimingRow]:
        """One row per operation, sorted by name: count, mean, p50 and p99 in ns."""
        rows = []
        for op in sorted(self._samples):
            values = self._samples[op]
            mean, p50, p99 = describe_ns(values)
            rows.append(ITimingRow(op=op, count=len(values), mean_ns=mean, p50_ns=p50, p99_ns=p99))
        return rows


def describe_ns(samples: List[int]) -> Tuple[float, float, float]:
    """Mean, median and 99th percentile of nanosecond samples."""
    series = pd.Series(samples, dtype="float64")
    if series.empty:
        return 0.0, 0.0, 0.0
    return float(series.mean()), float(series.quantile(0.5)), float(series.quantile(0.99))
