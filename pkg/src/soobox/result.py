"""Run results and best-so-far trace bookkeeping.

Every optimizer in this package reports its work the same way: a
:class:`RunResult` carrying the incumbent point/value, the number of
objective evaluations consumed, and a trace with exactly one
``(eval_index, best_so_far)`` pair per evaluation.  Indices start at 1 and
the best-so-far sequence is monotone non-increasing under the ordering
that treats non-finite values as +infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# ---------------------------------------------------------------------------
# ordering helpers
# ---------------------------------------------------------------------------


def value_key(value: float) -> float:
    """Comparison key for objective values: NaN and +/-inf sort last."""
    return value if math.isfinite(value) else math.inf


class TraceRecorder:
    """Accumulates the per-evaluation best-so-far trace.

    The recorder can be seeded with a starting index and an incumbent value
    so a second optimization stage appends to the trace of a first stage
    without breaking monotonicity.  ``record`` returns True when the new
    value strictly improves the incumbent (ties keep the earlier value).
    """

    __slots__ = ("entries", "_index", "_best_key", "_best_raw", "_primed")

    def __init__(self, start_index: int = 0, best_value: float | None = None):
        self.entries: list[tuple[int, float]] = []
        self._index = int(start_index)
        if best_value is None:
            self._primed = False
            self._best_key = math.inf
            self._best_raw = math.nan
        else:
            self._primed = True
            self._best_key = value_key(best_value)
            self._best_raw = float(best_value)

    def record(self, value: float) -> bool:
        key = value_key(value)
        improved = (not self._primed) or key < self._best_key
        if improved:
            self._primed = True
            self._best_key = key
            self._best_raw = float(value)
        self._index += 1
        self.entries.append((self._index, self._best_raw))
        return improved

    @property
    def best_value(self) -> float:
        """Current incumbent value, verbatim (may be NaN before any record)."""
        return self._best_raw

    @property
    def best_key(self) -> float:
        return self._best_key

    @property
    def next_index(self) -> int:
        return self._index + 1


# ---------------------------------------------------------------------------
# result container
# ---------------------------------------------------------------------------


@dataclass
class RunResult:
    """Outcome of a single optimization run.

    ratio is best_value divided by the known optimum when one is attached to
    the objective, else None.  split_ids lists the cell ids split by the
    partition optimizer in order, and stays empty for the baselines.
    """

    best_point: np.ndarray
    best_value: float
    evals_used: int
    trace: list[tuple[int, float]]
    ratio: float | None = None
    split_ids: tuple[int, ...] = field(default_factory=tuple)

    def trace_values(self) -> list[float]:
        return [v for _, v in self.trace]

    def check(self) -> None:
        """Assert the trace contract; cheap enough to call in tests."""
        assert len(self.trace) == self.evals_used
        prev_key = math.inf
        for pos, (idx, val) in enumerate(self.trace, start=1):
            assert idx == pos
            key = value_key(val)
            assert key <= prev_key or (pos == 1)
            prev_key = min(prev_key, key)
        if self.trace:
            assert value_key(self.trace[-1][1]) == value_key(self.best_value)
