"""Derivative-free local refinement for polishing a global incumbent.

A classic reflect/expand/contract/shrink simplex search, hardened for box
constraints: every candidate is clamped to the box before evaluation, and
a simplex that collapses (volume below 1e-30 of its initial volume, which
clamping against a face can cause) is rebuilt once around the best vertex
at a tenth of the initial scale.

The hybrid entry point reserves a fixed fraction of the total budget up
front, runs the global stage on the remainder, then spends the reserve
polishing the global incumbent.  Traces from the two stages concatenate
into one contract-conforming trace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BudgetExhausted, OutOfBounds
from .objectives import Objective
from .result import RunResult, TraceRecorder, value_key

Array = np.ndarray

_DEGENERACY_RATIO = 1e-30
_RESTART_SCALE = 0.1


@dataclass(frozen=True)
class NmParams:
    """Simplex coefficients and termination knobs.

    Defaults are the textbook coefficients; init_scale is the initial
    vertex offset as a fraction of each box side.
    """

    alpha: float = 1.0
    gamma: float = 2.0
    rho: float = 0.5
    sigma: float = 0.5
    init_scale: float = 0.05
    tol: float = 1e-12

    def __post_init__(self):
        if self.alpha <= 0.0:
            raise ValueError("reflection coefficient must be positive")
        if self.gamma <= 1.0:
            raise ValueError("expansion coefficient must exceed 1")
        if not 0.0 < self.rho < 1.0:
            raise ValueError("contraction coefficient must be in (0, 1)")
        if not 0.0 < self.sigma < 1.0:
            raise ValueError("shrink coefficient must be in (0, 1)")
        if not 0.0 < self.init_scale < 0.5:
            raise ValueError("init_scale must be in (0, 0.5)")
        if self.tol < 0.0:
            raise ValueError("tol must be >= 0")


@dataclass
class NmResult:
    """Best point found, its value, evaluations spent, and exit flags."""

    point: Array
    value: float
    evals_used: int
    budget_exhausted: bool = False
    restarts: int = 0


class _Stop(Exception):
    """Internal: evaluation cap reached, unwind to the reporting code."""


def _simplex_logvol(verts: Array) -> float:
    sign, logdet = np.linalg.slogdet(verts[1:] - verts[0])
    return -math.inf if sign == 0 else logdet


def _offset_simplex(x0: Array, scale: float, lower: Array, upper: Array) -> Array:
    """x0 plus one axis offset per dimension, reflected inward at a wall."""
    dim = x0.size
    verts = np.tile(x0, (dim + 1, 1))
    for j in range(dim):
        step = scale * (upper[j] - lower[j])
        if x0[j] + step <= upper[j]:
            verts[j + 1, j] = x0[j] + step
        else:
            verts[j + 1, j] = x0[j] - step
    return verts


def nelder_mead(
    objective: Objective,
    x0,
    max_evals: int,
    params: NmParams | None = None,
    trace: TraceRecorder | None = None,
) -> NmResult:
    """Minimize from x0, spending at most max_evals evaluations.

    max_evals must cover the initial simplex (dim + 1 points).  The best
    point ever evaluated is returned, so the result value never exceeds
    f(x0).  If the objective's own budget runs dry first, the search stops
    with budget_exhausted set and the best point so far.
    """
    params = params or NmParams()
    lower = objective.lower
    upper = objective.upper
    dim = objective.dim
    x0 = np.asarray(x0, dtype=float)
    if x0.shape != lower.shape:
        raise ValueError(f"expected a start point of dimension {dim}")
    if np.any(x0 < lower) or np.any(x0 > upper):
        raise OutOfBounds("start point lies outside the objective's box")
    if max_evals < dim + 1:
        raise ValueError(
            f"max_evals must cover the initial simplex ({dim + 1}), got {max_evals}"
        )

    evals = 0
    exhausted = False
    best_point: Array | None = None
    best_key = math.inf
    best_raw = math.nan

    def evaluate(x: Array) -> float:
        # x must already be inside the box here
        nonlocal evals, exhausted, best_point, best_key, best_raw
        if evals >= max_evals:
            raise _Stop
        try:
            v = objective.evaluate(x)
        except BudgetExhausted:
            exhausted = True
            raise _Stop from None
        evals += 1
        if trace is not None:
            trace.record(v)
        key = value_key(v)
        if best_point is None or key < best_key:
            best_point = x.copy()
            best_key = key
            best_raw = v
        return v

    def clip(x: Array) -> Array:
        return np.clip(x, lower, upper)

    restarts = 0
    try:
        verts = _offset_simplex(x0, params.init_scale, lower, upper)
        fvals = np.empty(dim + 1)
        for i in range(dim + 1):
            fvals[i] = evaluate(verts[i])
        init_logvol = _simplex_logvol(verts)
        degeneracy_floor = init_logvol + math.log(_DEGENERACY_RATIO)
        check_every = max(10, dim)
        iteration = 0

        while True:
            order = np.argsort(fvals, kind="stable")
            verts = verts[order]
            fvals = fvals[order]
            if fvals[-1] - fvals[0] <= params.tol:
                break

            iteration += 1
            if restarts == 0 and iteration % check_every == 0:
                if _simplex_logvol(verts) < degeneracy_floor:
                    # Collapsed simplex (typically flattened on a face):
                    # rebuild once around the best vertex, smaller scale.
                    restarts = 1
                    verts = _offset_simplex(
                        verts[0], params.init_scale * _RESTART_SCALE, lower, upper
                    )
                    for i in range(1, dim + 1):
                        fvals[i] = evaluate(verts[i])
                    continue

            centroid = verts[:-1].mean(axis=0)
            xr = clip(centroid + params.alpha * (centroid - verts[-1]))
            fr = evaluate(xr)
            if fr < fvals[0]:
                xe = clip(centroid + params.gamma * (xr - centroid))
                fe = evaluate(xe)
                if fe < fr:
                    verts[-1] = xe
                    fvals[-1] = fe
                else:
                    verts[-1] = xr
                    fvals[-1] = fr
            elif fr < fvals[-2]:
                verts[-1] = xr
                fvals[-1] = fr
            elif fr < fvals[-1]:
                xc = clip(centroid + params.rho * (xr - centroid))
                fc = evaluate(xc)
                if fc <= fr:
                    verts[-1] = xc
                    fvals[-1] = fc
                else:
                    for i in range(1, dim + 1):
                        verts[i] = verts[0] + params.sigma * (verts[i] - verts[0])
                        fvals[i] = evaluate(verts[i])
            else:
                xc = clip(centroid - params.rho * (centroid - verts[-1]))
                fc = evaluate(xc)
                if fc < fvals[-1]:
                    verts[-1] = xc
                    fvals[-1] = fc
                else:
                    for i in range(1, dim + 1):
                        verts[i] = verts[0] + params.sigma * (verts[i] - verts[0])
                        fvals[i] = evaluate(verts[i])
    except _Stop:
        pass

    if best_point is None:
        raise BudgetExhausted("no evaluations possible before the budget ran out")
    return NmResult(
        point=best_point.copy(),
        value=best_raw,
        evals_used=evals,
        budget_exhausted=exhausted,
        restarts=restarts,
    )


# ---------------------------------------------------------------------------
# hybrid driver
# ---------------------------------------------------------------------------


def refine_budget_split(total_budget: int, fraction: float) -> tuple[int, int]:
    """(global stage budget, refinement reserve) for a total budget.

    The reserve is ceil(fraction * total); the global stage keeps the rest
    but never less than one evaluation.
    """
    if total_budget < 1:
        raise ValueError(f"budget must be >= 1, got {total_budget}")
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    reserve = math.ceil(fraction * total_budget)
    main = max(1, total_budget - reserve)
    reserve = total_budget - main
    return main, reserve


def refine_run(
    result: RunResult,
    objective: Objective,
    fraction: float,
    params: NmParams | None = None,
) -> RunResult:
    """Polish a finished run's incumbent with the reserved budget share.

    The reserve is ceil(fraction * objective.budget) evaluations, assumed
    to have been held back from the earlier stage.  The refined result
    keeps whichever incumbent is better (ties keep the original) and
    concatenates the refinement trace onto the original one.  When the
    reserve cannot seed a simplex (reserve < dim + 1, or the objective has
    too little budget left) the original result is returned unchanged.
    """
    if not 0.0 < fraction < 1.0:
        raise ValueError(f"fraction must be in (0, 1), got {fraction}")
    reserve = math.ceil(fraction * objective.budget)
    nm_budget = min(reserve, objective.remaining)
    if nm_budget < objective.dim + 1:
        return result
    trace = TraceRecorder(
        start_index=result.evals_used, best_value=result.best_value
    )
    nm = nelder_mead(objective, result.best_point, nm_budget, params, trace=trace)
    if value_key(nm.value) < value_key(result.best_value):
        best_point, best_value = nm.point, nm.value
    else:
        best_point, best_value = result.best_point, result.best_value
    ratio = None
    f_star = objective.optimum_value
    if f_star is not None and f_star != 0.0:
        ratio = best_value / f_star
    return RunResult(
        best_point=best_point,
        best_value=best_value,
        evals_used=result.evals_used + nm.evals_used,
        trace=list(result.trace) + trace.entries,
        ratio=ratio,
        split_ids=result.split_ids,
    )
