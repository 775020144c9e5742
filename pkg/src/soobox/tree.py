"""Optimistic optimization over a hierarchical ternary partition.

The optimizer maintains a tree of axis-aligned boxes (cells) covering the
search space.  Each cell is evaluated once, at its center.  A sweep walks
the depths from the root down and, at each depth, splits the leaf with the
smallest value provided that value strictly undercuts the best value
already split during the same sweep.  Splitting a cell cuts it into S
equal slabs along one dimension, with the split dimension cycling so every
dimension is refined in turn.  Because S is odd, the middle child keeps
the parent's center and inherits its value without spending an
evaluation: each split costs exactly S - 1 evaluations.

This makes the method rank-based: only comparisons between observed values
drive the tree, so any strictly increasing transform of the objective
yields the identical sequence of splits.

The per-sweep depth cap follows max(1, floor((ln t)^(3/2))) with t the
number of evaluations consumed when the sweep starts, so the tree may
deepen only logarithmically in the budget.  Constant and unbounded caps
are available for study.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExhausted, InvalidBounds, NotALeaf, ObjectiveDegenerate
from .objectives import Objective
from .result import RunResult, TraceRecorder, value_key

Array = np.ndarray

# ---------------------------------------------------------------------------
# depth schedules
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DepthSchedule:
    """Per-sweep cap on how deep the tree may be extended.

    kind is one of "log32" (the default max(1, floor((ln t)^(3/2))) rule),
    "constant" (fixed cap), or "unbounded".
    """

    kind: str = "log32"
    value: int | None = None

    def __post_init__(self):
        if self.kind not in ("log32", "constant", "unbounded"):
            raise ValueError(f"unknown depth schedule kind {self.kind!r}")
        if self.kind == "constant":
            if self.value is None or self.value < 0:
                raise ValueError("constant schedule needs a cap >= 0")
        elif self.value is not None:
            raise ValueError(f"{self.kind} schedule takes no value")

    @staticmethod
    def log32() -> "DepthSchedule":
        return DepthSchedule("log32")

    @staticmethod
    def constant(depth: int) -> "DepthSchedule":
        return DepthSchedule("constant", int(depth))

    @staticmethod
    def unbounded() -> "DepthSchedule":
        return DepthSchedule("unbounded")

    def limit(self, evals: int) -> float:
        """Depth cap given the evaluation count at the start of a sweep."""
        if evals < 1:
            raise ValueError(f"evals must be >= 1, got {evals}")
        if self.kind == "log32":
            return max(1, math.floor(math.log(evals) ** 1.5))
        if self.kind == "constant":
            return self.value
        return math.inf


def max_depth(evals: int, schedule: DepthSchedule | None = None) -> float:
    """Depth cap for a sweep starting after `evals` evaluations."""
    return (schedule or DepthSchedule.log32()).limit(evals)


# ---------------------------------------------------------------------------
# parameters and cells
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SooParams:
    """Structural knobs for the partition optimizer.

    s_children must be odd and >= 3 so the middle child can reuse the
    parent's center evaluation.  minimize=False maximizes by negating at
    the objective boundary; the tree itself always minimizes.
    """

    s_children: int = 3
    depth_schedule: DepthSchedule = field(default_factory=DepthSchedule.log32)
    minimize: bool = True

    def __post_init__(self):
        if self.s_children < 3 or self.s_children % 2 == 0:
            raise ValueError(
                f"s_children must be odd and >= 3, got {self.s_children}"
            )


@dataclass(slots=True)
class Cell:
    """One box of the partition, evaluated at its center."""

    id: int
    depth: int
    lower: Array
    upper: Array
    center: Array
    value: float
    split_dim: int
    parent: int | None = None
    is_leaf: bool = True

    @property
    def value_key(self) -> float:
        return value_key(self.value)

    @property
    def volume(self) -> float:
        return float(np.prod(self.upper - self.lower))


# ---------------------------------------------------------------------------
# the tree
# ---------------------------------------------------------------------------


class PartitionTree:
    """Partition state plus the evaluation meter and trace for one run.

    Leaves are tracked per depth in lazy-deletion min-heaps keyed by
    (value_key, id), so each sweep touches only the depths it visits and
    never rescans the whole frontier.
    """

    def __init__(
        self,
        lower,
        upper,
        objective: Objective,
        params: SooParams | None = None,
        eval_budget: int | None = None,
    ):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.ndim != 1 or upper.shape != lower.shape or lower.size < 1:
            raise InvalidBounds("bounds must be matching 1-D vectors")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidBounds("bounds must be finite")
        if not np.all(lower < upper):
            raise InvalidBounds("need lower < upper in every dimension")
        self.params = params or SooParams()
        self.objective = objective
        self.eval_budget = None if eval_budget is None else int(eval_budget)
        self.dim = lower.size
        self.cells: list[Cell] = []
        self.split_log: list[int] = []
        self.trace = TraceRecorder()
        self.eval_count = 0
        self.max_leaf_depth = 0
        self._heaps: dict[int, list[tuple[float, int]]] = {}

        self._ensure_capacity(1)
        center = (lower + upper) / 2.0
        value = self._evaluate(center)
        root = Cell(0, 0, lower.copy(), upper.copy(), center, value, split_dim=0)
        self.cells.append(root)
        heapq.heappush(self._heaps.setdefault(0, []), (root.value_key, 0))
        self._best = (root.value_key, 0)

    # -- evaluation plumbing ------------------------------------------------

    @property
    def remaining(self) -> int:
        left = self.objective.remaining
        if self.eval_budget is not None:
            left = min(left, self.eval_budget - self.eval_count)
        return left

    def _ensure_capacity(self, needed: int) -> None:
        if self.remaining < needed:
            raise BudgetExhausted(
                f"need {needed} evaluations, only {self.remaining} left"
            )

    def _evaluate(self, x: Array) -> float:
        value = self.objective.evaluate(x)
        self.eval_count += 1
        self.trace.record(value)
        return value

    # -- structure ----------------------------------------------------------

    def split_leaf(self, leaf_id: int) -> list[int]:
        """Split a leaf into S slabs along its scheduled dimension.

        Costs exactly S - 1 evaluations, taken all-or-nothing: when the
        remaining budget cannot cover a full split the tree is left
        untouched and BudgetExhausted is raised.  Returns the child ids in
        coordinate order.
        """
        if not 0 <= leaf_id < len(self.cells):
            raise ValueError(f"no cell with id {leaf_id}")
        cell = self.cells[leaf_id]
        if not cell.is_leaf:
            raise NotALeaf(f"cell {leaf_id} was already split")
        s = self.params.s_children
        self._ensure_capacity(s - 1)

        d = cell.split_dim
        lo_d = cell.lower[d]
        up_d = cell.upper[d]
        step = (up_d - lo_d) / s
        # Shared interior edges are computed once so adjacent children have
        # bit-identical boundaries; the outer edges reuse the parent's.
        edges = np.empty(s + 1)
        edges[0] = lo_d
        edges[s] = up_d
        for k in range(1, s):
            edges[k] = lo_d + k * step

        mid = (s - 1) // 2
        child_depth = cell.depth + 1
        next_dim = (d + 1) % self.dim
        heap = self._heaps.setdefault(child_depth, [])
        child_ids: list[int] = []
        for k in range(s):
            lo = cell.lower.copy()
            up = cell.upper.copy()
            lo[d] = edges[k]
            up[d] = edges[k + 1]
            if k == mid:
                # Center reuse: the middle slab keeps the parent's center
                # point and value without a fresh evaluation.
                center = cell.center.copy()
                value = cell.value
            else:
                center = (lo + up) / 2.0
                value = self._evaluate(center)
            cid = len(self.cells)
            child = Cell(
                cid, child_depth, lo, up, center, value, next_dim, parent=leaf_id
            )
            self.cells.append(child)
            heapq.heappush(heap, (child.value_key, cid))
            if (child.value_key, cid) < self._best:
                self._best = (child.value_key, cid)
            child_ids.append(cid)

        cell.is_leaf = False
        self.split_log.append(leaf_id)
        if child_depth > self.max_leaf_depth:
            self.max_leaf_depth = child_depth
        return child_ids

    def _peek_leaf(self, depth: int) -> tuple[float, int] | None:
        """Best (value_key, id) among leaves at a depth, lazily pruning."""
        heap = self._heaps.get(depth)
        if not heap:
            return None
        while heap:
            key, cid = heap[0]
            if self.cells[cid].is_leaf:
                return key, cid
            heapq.heappop(heap)
        return None

    def sweep(self) -> list[int]:
        """One pass over the depths; returns the ids of the cells split.

        Walking depth 0 upward, the best leaf at each depth is split iff
        its value is strictly below every value split earlier in this
        sweep.  The pass stops at the depth cap, which is fixed when the
        sweep starts: the lesser of the current deepest leaf and the
        schedule's limit for the current evaluation count.  If the budget
        runs out mid-sweep the splits already made stand and the partial
        list is returned; a sweep that cannot afford even one split raises
        BudgetExhausted.
        """
        cap = min(
            self.max_leaf_depth,
            self.params.depth_schedule.limit(self.eval_count),
        )
        split_ids: list[int] = []
        v_min = math.inf
        depth = 0
        while depth <= cap:
            entry = self._peek_leaf(depth)
            if entry is not None:
                key, cid = entry
                if key < v_min:
                    try:
                        self.split_leaf(cid)
                    except BudgetExhausted:
                        if split_ids:
                            return split_ids
                        raise
                    split_ids.append(cid)
                    v_min = key
            depth += 1
        return split_ids

    # -- reporting ----------------------------------------------------------

    def incumbent(self) -> tuple[Array, float, int]:
        """Best evaluated point: (center copy, value, cell id).

        Ties go to the smallest id, which is the earliest-created cell;
        middle children share their ancestor's value but carry larger ids,
        so a reused center never displaces the cell that paid for it.
        """
        _, cid = self._best
        cell = self.cells[cid]
        return cell.center.copy(), cell.value, cid

    def leaves(self):
        return (c for c in self.cells if c.is_leaf)


# ---------------------------------------------------------------------------
# operation-style wrappers and the full run loop
# ---------------------------------------------------------------------------


def new_tree(
    space: tuple,
    objective: Objective,
    params: SooParams | None = None,
    eval_budget: int | None = None,
) -> PartitionTree:
    """Root a tree on the box `space` = (lower, upper), paying one evaluation."""
    lower, upper = space
    return PartitionTree(lower, upper, objective, params, eval_budget)


def split_leaf(tree: PartitionTree, leaf_id: int) -> list[int]:
    return tree.split_leaf(leaf_id)


def sweep(tree: PartitionTree) -> list[int]:
    return tree.sweep()


def incumbent(tree: PartitionTree) -> tuple[Array, float, int]:
    return tree.incumbent()


class _NegatedObjective:
    """Maximization adapter: negates values while sharing the base meter."""

    def __init__(self, base: Objective):
        self._base = base
        self.lower = base.lower
        self.upper = base.upper

    @property
    def dim(self) -> int:
        return self._base.dim

    @property
    def remaining(self) -> int:
        return self._base.remaining

    def evaluate(self, x) -> float:
        return -self._base.evaluate(x)


def run_soo(
    objective: Objective,
    budget: int,
    params: SooParams | None = None,
) -> RunResult:
    """Run sweeps until the budget is spent or the tree stagnates.

    Stagnation means a sweep returned no splits while budget remained,
    which can only happen under a finite depth cap; the incumbent at that
    point is final.  Raises ObjectiveDegenerate when every evaluated value
    was non-finite, so callers never receive a NaN incumbent.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    params = params or SooParams()
    target = objective if params.minimize else _NegatedObjective(objective)
    tree = PartitionTree(
        objective.lower, objective.upper, target, params, eval_budget=budget
    )
    while True:
        try:
            split_ids = tree.sweep()
        except BudgetExhausted:
            break
        if not split_ids:
            break

    point, value, _ = tree.incumbent()
    if not math.isfinite(value):
        raise ObjectiveDegenerate("every evaluated point was non-finite")

    trace = tree.trace.entries
    ratio = None
    if params.minimize:
        f_star = objective.optimum_value
        if f_star is not None and f_star != 0.0:
            ratio = value / f_star
    else:
        value = -value
        trace = [(i, -v) for i, v in trace]
    return RunResult(
        best_point=point,
        best_value=value,
        evals_used=tree.eval_count,
        trace=trace,
        ratio=ratio,
        split_ids=tuple(tree.split_log),
    )
