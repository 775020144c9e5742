"""Bandit machinery and naive comparators.

Upper-confidence-bound selection over a finite arm set, a fixed-horizon
bandit runner with a simple-regret recommendation, uniform random search
over a box, and a discretized-domain bandit that treats grid-cell centers
as arms.  The last two speak the same RunResult/trace language as the
partition optimizer so the harness can compare them head to head.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import BudgetExhausted, UnpulledArm
from .objectives import Objective
from .result import RunResult, TraceRecorder

Array = np.ndarray

DEFAULT_EXPLORATION = 2.0
GRID_ARM_CAP = 3 ** 6


# ---------------------------------------------------------------------------
# arm statistics and the selection rule
# ---------------------------------------------------------------------------


class ArmStats:
    """Pull counts and reward sums for K arms.

    Means are kept as (sum, count) pairs so each empirical mean is the
    exact running average of that arm's rewards.
    """

    def __init__(self, n_arms: int):
        if n_arms < 1:
            raise ValueError(f"need at least one arm, got {n_arms}")
        self.pulls = [0] * n_arms
        self._sums = [0.0] * n_arms
        self.t = 0

    @property
    def n_arms(self) -> int:
        return len(self.pulls)

    def mean(self, arm: int) -> float:
        if self.pulls[arm] == 0:
            raise UnpulledArm(f"arm {arm} has no observations")
        return self._sums[arm] / self.pulls[arm]

    @property
    def means(self) -> list[float]:
        """Per-arm empirical means, NaN for arms never pulled."""
        return [
            s / n if n else math.nan for s, n in zip(self._sums, self.pulls)
        ]

    def update(self, arm: int, reward: float) -> None:
        if not 0 <= arm < self.n_arms:
            raise ValueError(f"no arm with index {arm}")
        self.pulls[arm] += 1
        self._sums[arm] += float(reward)
        self.t += 1


def ucb_select(stats: ArmStats, c: float = DEFAULT_EXPLORATION) -> int:
    """Arm maximizing mean + sqrt(c * ln t / pulls); ties to smallest index.

    Every arm must have been pulled at least once (the bonus is undefined
    at zero pulls), which the runners guarantee by an initialization round
    in index order.
    """
    if stats.t < 1:
        raise UnpulledArm("no rounds have been played")
    log_t = math.log(stats.t)
    best_arm = -1
    best_score = -math.inf
    for arm in range(stats.n_arms):
        n = stats.pulls[arm]
        if n == 0:
            raise UnpulledArm(f"arm {arm} has no observations")
        score = stats._sums[arm] / n + math.sqrt(c * log_t / n)
        if score > best_score:
            best_score = score
            best_arm = arm
    return best_arm


# ---------------------------------------------------------------------------
# fixed-horizon bandit runner
# ---------------------------------------------------------------------------


@dataclass
class UcbRun:
    """History of one bandit run plus the final recommendation.

    The recommendation is the arm with the highest empirical mean at the
    horizon (ties to the smallest index), the usual convention when
    minimizing simple regret rather than cumulative regret.
    """

    history: list[tuple[int, float]]
    recommendation: int
    stats: ArmStats = field(repr=False)


def run_ucb(
    reward_sources: Sequence[Callable[[], float]],
    horizon: int,
    c: float = DEFAULT_EXPLORATION,
) -> UcbRun:
    """Play `horizon` rounds of UCB over callable reward sources.

    Each source is called with no arguments for one reward; determinism is
    the caller's business (see bernoulli_arms for seeded sources).  The
    horizon must cover the initialization round (one pull per arm).
    """
    k = len(reward_sources)
    if k < 1:
        raise ValueError("need at least one reward source")
    if horizon < k:
        raise ValueError(f"horizon {horizon} cannot cover {k} arms")
    stats = ArmStats(k)
    history: list[tuple[int, float]] = []

    def pull(arm: int) -> None:
        reward = float(reward_sources[arm]())
        stats.update(arm, reward)
        history.append((arm, reward))

    for arm in range(k):
        pull(arm)
    for _ in range(horizon - k):
        pull(ucb_select(stats, c))

    best_arm = 0
    best_mean = stats.mean(0)
    for arm in range(1, k):
        m = stats.mean(arm)
        if m > best_mean:
            best_mean = m
            best_arm = arm
    return UcbRun(history=history, recommendation=best_arm, stats=stats)


def bernoulli_arms(
    probabilities: Sequence[float], seed: int
) -> list[Callable[[], float]]:
    """Independent seeded Bernoulli reward sources, one stream per arm."""
    children = np.random.SeedSequence(seed).spawn(len(probabilities))
    arms = []
    for p, child in zip(probabilities, children):
        rng = np.random.default_rng(child)
        arms.append(lambda p=p, rng=rng: 1.0 if rng.random() < p else 0.0)
    return arms


def constant_arms(values: Sequence[float]) -> list[Callable[[], float]]:
    return [lambda v=float(v): v for v in values]


# ---------------------------------------------------------------------------
# box-domain baselines
# ---------------------------------------------------------------------------


def _finish_run(
    objective: Objective,
    best_point: Array,
    trace: TraceRecorder,
    evals: int,
) -> RunResult:
    ratio = None
    f_star = objective.optimum_value
    if f_star is not None and f_star != 0.0:
        ratio = trace.best_value / f_star
    return RunResult(
        best_point=best_point,
        best_value=trace.best_value,
        evals_used=evals,
        trace=trace.entries,
        ratio=ratio,
    )


def run_random_search(objective: Objective, budget: int, seed: int) -> RunResult:
    """Evaluate i.i.d. uniform points from a seeded generator.

    Stops early only if the objective's own budget runs dry first.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    rng = np.random.default_rng(seed)
    trace = TraceRecorder()
    best_point: Array | None = None
    evals = 0
    for _ in range(budget):
        if objective.remaining < 1:
            break
        x = rng.uniform(objective.lower, objective.upper)
        value = objective.evaluate(x)
        evals += 1
        if trace.record(value):
            best_point = x
    if best_point is None:
        raise BudgetExhausted("objective had no evaluations remaining")
    return _finish_run(objective, best_point, trace, evals)


def grid_divisions(dim: int, resolution: int, cap: int = GRID_ARM_CAP) -> list[int]:
    """Per-dimension division counts for the lattice of arm centers.

    The first dimensions get `resolution` divisions each until adding
    another would push the lattice size past `cap`; the rest stay at one
    division, so the arm count never exceeds the cap.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    divisions = [1] * dim
    total = 1
    for j in range(dim):
        if total * resolution > cap:
            break
        divisions[j] = resolution
        total *= resolution
    return divisions


def run_ucb_grid(
    objective: Objective,
    budget: int,
    resolution: int = 3,
    c: float = DEFAULT_EXPLORATION,
) -> RunResult:
    """Bandit over grid-cell centers: reward of an arm = -f(center).

    The box is cut into a lattice (see grid_divisions); each lattice cell's
    center is an arm.  Pulls re-evaluate the center and count against the
    budget, keeping the comparison with the other optimizers honest even
    though the objective is deterministic.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    divisions = grid_divisions(objective.dim, resolution)
    axes = []
    for j, m in enumerate(divisions):
        width = (objective.upper[j] - objective.lower[j]) / m
        axes.append([objective.lower[j] + (i + 0.5) * width for i in range(m)])
    centers = [np.array(point) for point in itertools.product(*axes)]

    stats = ArmStats(len(centers))
    trace = TraceRecorder()
    best_point: Array | None = None
    evals = 0

    def pull(arm: int) -> None:
        nonlocal best_point, evals
        value = objective.evaluate(centers[arm])
        evals += 1
        stats.update(arm, -value)
        if trace.record(value):
            best_point = centers[arm]
    for arm in range(len(centers)):
        if evals >= budget or objective.remaining < 1:
            break
        pull(arm)
    while evals < budget and objective.remaining >= 1:
        pull(ucb_select(stats, c))
    if best_point is None:
        raise BudgetExhausted("objective had no evaluations remaining")
    return _finish_run(objective, best_point.copy(), trace, evals)
