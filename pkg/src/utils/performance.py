"""
Stage Timing for the PIB Solver
Records wall-clock time per pipeline stage for the run report
"""

import threading
import time
from functools import wraps
from typing import Callable, Dict


class StageTimer:
    """Accumulated seconds and call counts per named stage"""

    def __init__(self):
        self._lock = threading.Lock()
        self.timings: Dict[str, float] = {}
        self.calls: Dict[str, int] = {}

    def record(self, stage: str, seconds: float) -> None:
        with self._lock:
            self.timings[stage] = self.timings.get(stage, 0.0) + seconds
            self.calls[stage] = self.calls.get(stage, 0) + 1

    def snapshot(self) -> Dict[str, float]:
        with self._lock:
            return dict(self.timings)

    def call_counts(self) -> Dict[str, int]:
        with self._lock:
            return dict(self.calls)

    def reset(self) -> None:
        with self._lock:
            self.timings = {}
            self.calls = {}


# Global timer instance
stage_timer = StageTimer()


def track_performance(stage: str):
    """Decorator adding the wrapped call's duration to the named stage"""

    def decorator(func: Callable) -> Callable:
        @wraps(func)
        def wrapper(*args, **kwargs):
            start_time = time.perf_counter()
            try:
                return func(*args, **kwargs)
            finally:
                stage_timer.record(stage, time.perf_counter() - start_time)

        return wrapper

    return decorator


def get_stage_timings() -> Dict[str, float]:
    """Seconds spent per stage since the last reset"""
    return stage_timer.snapshot()


def get_stage_calls() -> Dict[str, int]:
    """Calls per stage since the last reset"""
    return stage_timer.call_counts()


def reset_metrics() -> None:
    stage_timer.reset()
