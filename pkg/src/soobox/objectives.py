"""Benchmark objective suite and the metered black-box wrapper.

The suite contains eight minimization problems on the box [-5, 5]^D.  Each
suite function is built as ``f(x) = bias + g(x - shift)`` where ``g`` is a
base function with ``g(0) = 0`` exactly, ``shift`` places the optimum at a
reproducible interior point, and ``bias`` is 100 times the function's
1-based position in the suite.  The shift is drawn from a fixed 64-bit
linear congruential generator so that any two builds of this package, on
any platform, produce bit-identical problem instances from the same seed.

All optimizers consume objectives through :class:`Objective`, which meters
every evaluation against a hard budget and rejects points outside the box.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from .errors import (
    BadDimension,
    BudgetExhausted,
    InvalidBounds,
    OutOfBounds,
    UnknownFunction,
)

Array = np.ndarray

# ---------------------------------------------------------------------------
# suite constants
# ---------------------------------------------------------------------------

SUITE_NAMES: tuple[str, ...] = (
    "sphere",
    "ellipsoid",
    "rosenbrock",
    "rastrigin",
    "ackley",
    "griewank",
    "styblinski_tang",
    "composite3",
)

BIAS_STEP = 100.0
BOX_HALF_WIDTH = 5.0
SHIFT_HALF_WIDTH = 2.0

# 64-bit LCG (Knuth's MMIX constants); fixed forever for reproducibility.
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_LCG_MASK = (1 << 64) - 1

# Per-dimension minimizer of v -> (v^4 - 16 v^2 + 5 v) / 2, frozen to the
# double nearest the real root of 4 v^3 - 32 v + 5 = 0.  The matching
# minimum value is computed once in double arithmetic rather than frozen as
# a second literal, so the subtraction below cancels exactly at the optimum.
_ST_ARGMIN = -2.903534027771177


def _st_poly(v):
    return (v ** 4 - 16.0 * v ** 2 + 5.0 * v) / 2.0


_ST_PERDIM_MIN = float(_st_poly(_ST_ARGMIN))


# ---------------------------------------------------------------------------
# deterministic shifts
# ---------------------------------------------------------------------------


def shift_from_seed(seed: int, dim: int) -> Array:
    """Shift vector with components in [-2, 2), one LCG step per component.

    state <- (a * state + c) mod 2^64, mapped affinely onto the range.  The
    recurrence is spelled out here instead of delegating to a library RNG
    so the mapping can never drift between platforms or library versions.
    """
    if dim < 1:
        raise BadDimension(f"dim must be >= 1, got {dim}")
    state = int(seed) & _LCG_MASK
    out = np.empty(dim)
    for j in range(dim):
        state = (_LCG_MULT * state + _LCG_INC) & _LCG_MASK
        out[j] = (state / 2.0 ** 64) * (2.0 * SHIFT_HALF_WIDTH) - SHIFT_HALF_WIDTH
    return out


# ---------------------------------------------------------------------------
# base functions, g(0) = 0 exactly
# ---------------------------------------------------------------------------


def _sphere(dim: int) -> Callable[[Array], float]:
    def g(z: Array) -> float:
        return float(np.dot(z, z))

    return g


def _ellipsoid(dim: int) -> Callable[[Array], float]:
    # Axis weights 1..D: mildly ill-conditioned, enough to separate the
    # axes without making the basin numerically hostile to refinement.
    w = np.arange(1.0, dim + 1.0)

    def g(z: Array) -> float:
        return float(np.dot(w, z * z))

    return g


def _rosenbrock(dim: int) -> Callable[[Array], float]:
    # Classic banana valley expressed around its own optimum: substituting
    # w = z + 1 puts the minimizer at z = 0 with value 0 exactly.
    def g(z: Array) -> float:
        w = z + 1.0
        a = w[1:] - w[:-1] ** 2
        b = 1.0 - w[:-1]
        return float(np.sum(100.0 * a * a + b * b))

    return g


def _rastrigin(dim: int) -> Callable[[Array], float]:
    def g(z: Array) -> float:
        return float(10.0 * dim + np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z)))

    return g


def _ackley(dim: int) -> Callable[[Array], float]:
    # Grouped so both exponential terms cancel exactly at z = 0:
    # 20 - 20*exp(0) == 0 and e - exp(cos-mean of 1) == 0 in doubles.
    e1 = math.exp(1.0)

    def g(z: Array) -> float:
        rms = math.sqrt(float(np.mean(z * z)))
        cos_mean = float(np.mean(np.cos(2.0 * np.pi * z)))
        return (20.0 - 20.0 * math.exp(-0.2 * rms)) + (e1 - math.exp(cos_mean))

    return g


def _griewank(dim: int) -> Callable[[Array], float]:
    root_index = np.sqrt(np.arange(1.0, dim + 1.0))

    def g(z: Array) -> float:
        return float(np.sum(z * z) / 4000.0 + 1.0 - np.prod(np.cos(z / root_index)))

    return g


def _styblinski_tang(dim: int) -> Callable[[Array], float]:
    # Each coordinate contributes its quartic minus the quartic's minimum,
    # evaluated at the frozen argmin so the optimum lands on 0.0 exactly.
    def g(z: Array) -> float:
        v = z + _ST_ARGMIN
        return float(np.sum(_st_poly(v) - _ST_PERDIM_MIN))

    return g


def _composite3(dim: int) -> Callable[[Array], float]:
    parts = (_sphere(dim), _rastrigin(dim), _ackley(dim))

    def g(z: Array) -> float:
        return parts[0](z) + parts[1](z) + parts[2](z)

    return g


# name -> (builder, minimum supported dimension)
_BUILDERS: dict[str, tuple[Callable[[int], Callable[[Array], float]], int]] = {
    "sphere": (_sphere, 1),
    "ellipsoid": (_ellipsoid, 1),
    "rosenbrock": (_rosenbrock, 2),
    "rastrigin": (_rastrigin, 1),
    "ackley": (_ackley, 1),
    "griewank": (_griewank, 1),
    "styblinski_tang": (_styblinski_tang, 1),
    "composite3": (_composite3, 1),
}


# ---------------------------------------------------------------------------
# metered black box
# ---------------------------------------------------------------------------


class Objective:
    """A black-box function on a box, metered against a hard budget.

    evaluate() raises BudgetExhausted once the meter reaches the budget and
    OutOfBounds for points outside the box; neither failure advances the
    meter.  Values come back verbatim, including non-finite ones.
    """

    def __init__(
        self,
        fn: Callable[[Array], float],
        lower,
        upper,
        budget: int,
        *,
        name: str = "custom",
        index: int | None = None,
        bias: float = 0.0,
        shift: Array | None = None,
        optimum_point: Array | None = None,
        optimum_value: float | None = None,
    ):
        lower = np.asarray(lower, dtype=float)
        upper = np.asarray(upper, dtype=float)
        if lower.ndim != 1 or upper.shape != lower.shape or lower.size < 1:
            raise InvalidBounds("bounds must be matching 1-D vectors")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidBounds("bounds must be finite")
        if not np.all(lower < upper):
            raise InvalidBounds("need lower < upper in every dimension")
        budget = int(budget)
        if budget < 0:
            raise ValueError(f"budget must be >= 0, got {budget}")
        self._fn = fn
        self.lower = lower
        self.upper = upper
        self.budget = budget
        self.meter = 0
        self.name = name
        self.index = index
        self.bias = bias
        self.shift = None if shift is None else np.asarray(shift, dtype=float)
        self.optimum_point = (
            None if optimum_point is None else np.asarray(optimum_point, dtype=float)
        )
        self.optimum_value = optimum_value

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def remaining(self) -> int:
        return self.budget - self.meter

    def evaluate(self, x) -> float:
        x = np.asarray(x, dtype=float)
        if x.shape != self.lower.shape:
            raise ValueError(f"expected a point of dimension {self.dim}")
        if self.meter >= self.budget:
            raise BudgetExhausted(
                f"budget of {self.budget} evaluations already consumed"
            )
        if not np.all((self.lower <= x) & (x <= self.upper)):
            # also rejects NaN coordinates, which fail both comparisons
            raise OutOfBounds("point lies outside the objective's box")
        self.meter += 1
        return float(self._fn(x))

    def raw(self, x) -> float:
        """Evaluate without metering or bounds checks (testing oracle)."""
        return float(self._fn(np.asarray(x, dtype=float)))

    def known_optimum(self) -> tuple[Array, float] | None:
        """(argmin, min value) when the instance was built with one."""
        if self.optimum_point is None or self.optimum_value is None:
            return None
        return self.optimum_point.copy(), self.optimum_value


def make_objective(
    name: str,
    dim: int,
    budget: int,
    *,
    shift=None,
    shift_seed: int = 0,
) -> Objective:
    """Build a suite instance on [-5, 5]^dim with the given budget.

    shift may be a vector, a scalar (broadcast to every coordinate), or
    None to derive it from shift_seed.  The shift must land strictly inside
    the box, which the seeded range [-2, 2) guarantees by construction.
    """
    if name not in _BUILDERS:
        raise UnknownFunction(
            f"unknown function {name!r}; suite = {', '.join(SUITE_NAMES)}"
        )
    builder, min_dim = _BUILDERS[name]
    if dim < min_dim:
        raise BadDimension(f"{name} requires dim >= {min_dim}, got {dim}")
    if shift is None:
        shift_vec = shift_from_seed(shift_seed, dim)
    else:
        shift_vec = np.asarray(shift, dtype=float)
        if shift_vec.ndim == 0:
            shift_vec = np.full(dim, float(shift_vec))
        elif shift_vec.shape != (dim,):
            raise ValueError(f"shift must be scalar or length {dim}")
    lower = np.full(dim, -BOX_HALF_WIDTH)
    upper = np.full(dim, BOX_HALF_WIDTH)
    if np.any(shift_vec <= lower) or np.any(shift_vec >= upper):
        raise ValueError("shift must lie strictly inside the box")
    index = SUITE_NAMES.index(name) + 1
    bias = BIAS_STEP * index
    g = builder(dim)

    def fn(x: Array) -> float:
        return bias + g(x - shift_vec)

    return Objective(
        fn,
        lower,
        upper,
        budget,
        name=name,
        index=index,
        bias=bias,
        shift=shift_vec,
        optimum_point=shift_vec.copy(),
        optimum_value=bias,
    )


def transformed(objective: Objective, g: Callable[[float], float], label: str) -> Objective:
    """Fresh objective computing g(f(x)), with its own meter and budget.

    Used to check that rank-based optimizers are invariant under strictly
    increasing transforms of the values.  The known optimum value maps
    through g; the argmin is unchanged.
    """
    base_fn = objective._fn

    def fn(x: Array) -> float:
        return float(g(base_fn(x)))

    opt_val = None
    if objective.optimum_value is not None:
        opt_val = float(g(objective.optimum_value))
    return Objective(
        fn,
        objective.lower.copy(),
        objective.upper.copy(),
        objective.budget,
        name=f"{label}({objective.name})",
        index=objective.index,
        bias=0.0,
        shift=None if objective.shift is None else objective.shift.copy(),
        optimum_point=(
            None if objective.optimum_point is None else objective.optimum_point.copy()
        ),
        optimum_value=opt_val,
    )


def suite_manifest(dim: int = 2, shift_seed: int = 0) -> list[dict]:
    """JSON-ready description of every suite instance at the given dim.

    Functions whose minimum dimension exceeds dim are skipped (only
    rosenbrock at dim 1).
    """
    entries = []
    for name in SUITE_NAMES:
        _, min_dim = _BUILDERS[name]
        if dim < min_dim:
            continue
        obj = make_objective(name, dim, budget=0, shift_seed=shift_seed)
        entries.append(
            {
                "name": name,
                "index": obj.index,
                "dim": dim,
                "bias": obj.bias,
                "lower": obj.lower.tolist(),
                "upper": obj.upper.tolist(),
                "shift": obj.shift.tolist(),
                "f_star": obj.optimum_value,
            }
        )
    return entries
