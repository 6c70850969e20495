"""Group-action instrumentation and per-algorithm measurements."""

import time
from collections import deque
from contextlib import contextmanager
from datetime import datetime
from typing import Any, Deque, Dict, Iterator, List, Optional

from loguru import logger
from pydantic import BaseModel, Field

from ..action.base_backend import ActionBackend
from ..utils.config import config
from ..utils.models import Curve


class CountingBackend(ActionBackend):
    """Wraps a backend and counts group actions; twists are free."""

    def __init__(self, inner: ActionBackend):
        super().__init__(inner.params)
        self.inner = inner
        self.kind = inner.kind
        self.actions = 0

    def contains(self, E: Curve) -> bool:
        return self.inner.contains(E)

    def _shift(self, e: int, E: Curve) -> Curve:
        self.actions += 1
        return self.inner._shift(e, E)

    def _negate(self, E: Curve) -> Curve:
        return self.inner._negate(E)

    def enumerate_orbit(self) -> List[Curve]:
        return self.inner.enumerate_orbit()

    def gaip_bruteforce(self, E: Curve) -> int:
        return self.inner.gaip_bruteforce(E)

    def reset(self) -> None:
        self.actions = 0


class OperationSample(BaseModel):
    """One measured algorithm invocation."""
    timestamp: datetime = Field(default_factory=datetime.now)
    label: str
    actions: int = Field(ge=0)
    seconds: float = Field(ge=0.0)


class MetricsCollector:
    """Counts group actions and wall time per labelled algorithm run."""

    def __init__(self, backend: ActionBackend):
        """Initialize metrics collector.

        Args:
            backend: Backend to instrument; wrapped unless already counting
        """
        self.enabled = config.get("monitoring.performance_tracking.enabled", True)
        self.backend = backend if isinstance(backend, CountingBackend) else CountingBackend(backend)

        self.history: Deque[OperationSample] = deque(maxlen=1000)
        self.stats: Dict[str, Any] = {
            "total_measurements": 0,
            "total_actions": 0,
            "total_time": 0.0,
            "last_measurement_time": None,
        }

    @contextmanager
    def measure(self, label: str) -> Iterator[None]:
        """Record the actions and time spent inside the block under ``label``."""
        start_actions = self.backend.actions
        start = time.perf_counter()
        try:
            yield
        finally:
            sample = OperationSample(
                label=label,
                actions=self.backend.actions - start_actions,
                seconds=time.perf_counter() - start,
            )
            self.history.append(sample)
            self.stats["total_measurements"] += 1
            self.stats["total_actions"] += sample.actions
            self.stats["total_time"] += sample.seconds
            self.stats["last_measurement_time"] = sample.timestamp.isoformat()
            logger.debug(f"{label}: {sample.actions} actions in {sample.seconds * 1e3:.3f} ms")

    def last_counts(self) -> Dict[str, int]:
        """Action count of the most recent sample per label."""
        counts: Dict[str, int] = {}
        for sample in self.history:
            counts[sample.label] = sample.actions
        return counts

    def mean_time(self, label: str) -> Optional[float]:
        times = [s.seconds for s in self.history if s.label == label]
        return sum(times) / len(times) if times else None

    def get_statistics(self) -> Dict[str, Any]:
        """Get collector statistics."""
        return {**self.stats, "history_size": len(self.history), "enabled": self.enabled}

    def clear_history(self) -> None:
        self.history.clear()
        self.backend.reset()
