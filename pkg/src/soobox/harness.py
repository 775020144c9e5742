"""Experiment runner: configs, file artifacts, grids, budget studies.

A RunConfig pins everything needed to reproduce a run: the suite
instance, the budget (explicit, or scaled as 10^4 x dimension), the
algorithm, and its knobs.  run_experiment executes one config and writes
a per-evaluation trace CSV plus a result JSON; run_grid crosses
functions x dims x algorithms into a ratio summary table; compare_budgets
reruns one config at increasing budgets and reports the relative
improvement between consecutive budgets.

All files are written atomically (temp file in the target directory, then
rename), so readers never observe a partial artifact.  Floats in CSV are
formatted with 17 significant digits, which round-trips doubles exactly.
"""

from __future__ import annotations

import csv
import dataclasses
import io
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .baselines import run_random_search, run_ucb_grid
from .objectives import make_objective
from .refine import refine_budget_split, refine_run
from .result import RunResult
from .tree import DepthSchedule, SooParams, run_soo

PER_DIM_BUDGET = 10_000
ALGORITHMS = ("soo", "soo-refine", "random", "ucb-grid")
FORMATS = ("csv", "json")


# ---------------------------------------------------------------------------
# configuration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines one run, picklable for worker processes."""

    function: str
    dim: int
    budget: int | None = None
    cec_budget: bool = False
    algorithm: str = "soo"
    refine_fraction: float = 0.05
    s_children: int = 3
    depth_schedule: DepthSchedule = field(default_factory=DepthSchedule.log32)
    seed: int = 0
    grid_resolution: int = 3
    exploration: float = 2.0
    shift_seed: int = 0
    output_dir: Path | None = None
    formats: tuple[str, ...] = ("csv", "json")

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}"
            )
        if self.cec_budget == (self.budget is not None):
            raise ValueError("exactly one of budget and cec_budget is required")
        if self.budget is not None and self.budget < 1:
            raise ValueError(f"budget must be >= 1, got {self.budget}")
        if not 0.0 < self.refine_fraction < 1.0:
            raise ValueError(
                f"refine_fraction must be in (0, 1), got {self.refine_fraction}"
            )
        if self.dim < 1:
            raise ValueError(f"dim must be >= 1, got {self.dim}")
        for fmt in self.formats:
            if fmt not in FORMATS:
                raise ValueError(f"unknown format {fmt!r}")

    @property
    def resolved_budget(self) -> int:
        """The evaluation cap: explicit, or 10^4 per dimension."""
        if self.cec_budget:
            return PER_DIM_BUDGET * self.dim
        return self.budget

    @property
    def stem(self) -> str:
        return f"{self.function}_{self.dim}_{self.algorithm}_{self.resolved_budget}"


def _soo_params(config: RunConfig) -> SooParams:
    return SooParams(
        s_children=config.s_children, depth_schedule=config.depth_schedule
    )


def run_algorithm(config: RunConfig) -> RunResult:
    """Execute the configured algorithm; no files touched."""
    budget = config.resolved_budget
    objective = make_objective(
        config.function, config.dim, budget, shift_seed=config.shift_seed
    )
    if config.algorithm == "soo":
        return run_soo(objective, budget, _soo_params(config))
    if config.algorithm == "soo-refine":
        main_budget, _ = refine_budget_split(budget, config.refine_fraction)
        result = run_soo(objective, main_budget, _soo_params(config))
        return refine_run(result, objective, config.refine_fraction)
    if config.algorithm == "random":
        return run_random_search(objective, budget, config.seed)
    return run_ucb_grid(
        objective, budget, config.grid_resolution, config.exploration
    )


# ---------------------------------------------------------------------------
# file artifacts
# ---------------------------------------------------------------------------


def _fmt(value: float) -> str:
    return format(value, ".17g")


def _atomic_write(path: Path, text: str) -> None:
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    os.replace(tmp, path)


def trace_csv_text(result: RunResult, f_star: float | None) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["eval_index", "best_value", "ratio"])
    for index, value in result.trace:
        ratio = "" if f_star in (None, 0.0) else _fmt(value / f_star)
        writer.writerow([index, _fmt(value), ratio])
    return buf.getvalue()


def read_trace_csv(path: Path) -> list[tuple[int, float]]:
    """Parse a trace file back to (eval_index, best_value) pairs."""
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        assert header[:2] == ["eval_index", "best_value"]
        return [(int(row[0]), float(row[1])) for row in reader]


def _config_echo(config: RunConfig) -> dict:
    echo = dataclasses.asdict(config)
    echo["depth_schedule"] = dataclasses.asdict(config.depth_schedule)
    echo["output_dir"] = (
        None if config.output_dir is None else str(config.output_dir)
    )
    echo["formats"] = list(config.formats)
    return echo


def result_json_text(
    config: RunConfig, result: RunResult, f_star: float | None, wall_seconds: float
) -> str:
    payload = {
        "config": _config_echo(config),
        "budget": config.resolved_budget,
        "best_point": result.best_point.tolist(),
        "best_value": result.best_value,
        "f_star": f_star,
        "ratio": result.ratio,
        "evals_used": result.evals_used,
        "wall_seconds": wall_seconds,
    }
    return json.dumps(payload, indent=2) + "\n"


def run_experiment(config: RunConfig) -> RunResult:
    """Run one config and, when an output directory is set, write artifacts.

    Artifacts are `<stem>.csv` (the trace) and `<stem>.json` (config echo
    plus the result summary), filtered by config.formats.
    """
    start = time.perf_counter()
    result = run_algorithm(config)
    wall = time.perf_counter() - start
    if config.output_dir is not None:
        out = Path(config.output_dir)
        out.mkdir(parents=True, exist_ok=True)
        f_star = _suite_f_star(config)
        if "csv" in config.formats:
            _atomic_write(out / f"{config.stem}.csv", trace_csv_text(result, f_star))
        if "json" in config.formats:
            _atomic_write(
                out / f"{config.stem}.json",
                result_json_text(config, result, f_star, wall),
            )
    return result


def _suite_f_star(config: RunConfig) -> float | None:
    objective = make_objective(
        config.function, config.dim, 0, shift_seed=config.shift_seed
    )
    return objective.optimum_value


# ---------------------------------------------------------------------------
# grids
# ---------------------------------------------------------------------------


@dataclass
class GridSummary:
    """Ratio table over a function x dim x algorithm cross product.

    cells maps (function, dim, algorithm) to a ratio, or to the string
    "error" when that run failed.
    """

    functions: list[str]
    dims: list[int]
    algorithms: list[str]
    cells: dict[tuple[str, int, str], float | str]

    def column_labels(self) -> list[str]:
        return [f"{algo}_{dim}d" for dim in self.dims for algo in self.algorithms]

    def to_csv_text(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["function"] + self.column_labels())
        for function in self.functions:
            row: list[str] = [function]
            for dim in self.dims:
                for algo in self.algorithms:
                    cell = self.cells[(function, dim, algo)]
                    row.append(cell if isinstance(cell, str) else _fmt(cell))
            writer.writerow(row)
        return buf.getvalue()


def _grid_cell(config: RunConfig) -> tuple[tuple[str, int, str], float | str, str]:
    key = (config.function, config.dim, config.algorithm)
    try:
        result = run_experiment(config)
    except Exception as exc:  # a failed cell must not sink the grid
        return key, "error", f"{type(exc).__name__}: {exc}"
    ratio = result.ratio if result.ratio is not None else math.nan
    return key, ratio, ""


def run_grid(
    functions: list[str],
    dims: list[int],
    algorithms: list[str],
    *,
    budget: int | None = None,
    cec_budget: bool = False,
    output_dir: Path | None = None,
    formats: tuple[str, ...] = ("csv", "json"),
    jobs: int = 1,
    refine_fraction: float = 0.05,
    s_children: int = 3,
    depth_schedule: DepthSchedule | None = None,
    seed: int = 0,
    grid_resolution: int = 3,
    exploration: float = 2.0,
    shift_seed: int = 0,
) -> GridSummary:
    """Run the cross product and assemble the ratio summary.

    Each cell is an independent run writing its own artifacts; with
    jobs > 1 cells execute in worker processes.  The summary lands in
    `summary.csv` under output_dir, written once at the end.
    """
    if not functions or not dims or not algorithms:
        raise ValueError("functions, dims, and algorithms must be non-empty")
    configs = [
        RunConfig(
            function=function,
            dim=dim,
            budget=budget,
            cec_budget=cec_budget,
            algorithm=algorithm,
            refine_fraction=refine_fraction,
            s_children=s_children,
            depth_schedule=depth_schedule or DepthSchedule.log32(),
            seed=seed,
            grid_resolution=grid_resolution,
            exploration=exploration,
            shift_seed=shift_seed,
            output_dir=output_dir,
            formats=formats,
        )
        for function in functions
        for dim in dims
        for algorithm in algorithms
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_grid_cell, configs))
    else:
        outcomes = [_grid_cell(config) for config in configs]

    cells: dict[tuple[str, int, str], float | str] = {}
    for key, cell, diagnostic in outcomes:
        cells[key] = cell
        if diagnostic:
            print(f"grid cell {key} failed: {diagnostic}", file=sys.stderr)
    summary = GridSummary(
        functions=list(functions),
        dims=list(dims),
        algorithms=list(algorithms),
        cells=cells,
    )
    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _atomic_write(out / "summary.csv", summary.to_csv_text())
    return summary


# ---------------------------------------------------------------------------
# budget studies
# ---------------------------------------------------------------------------


@dataclass
class BudgetComparison:
    """Ratios at increasing budgets plus consecutive relative improvements.

    improvements[i] is (ratio[i] - ratio[i+1]) / ratio[i]: the fraction of
    the i-th ratio shaved off by raising the budget one step.  Empty when
    only one budget was requested.
    """

    function: str
    dim: int
    budgets: list[int]
    ratios: list[float]
    best_values: list[float]
    improvements: list[float]

    def to_json_text(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2) + "\n"


def compare_budgets(
    function: str,
    dim: int,
    budgets: list[int],
    *,
    s_children: int = 3,
    depth_schedule: DepthSchedule | None = None,
    shift_seed: int = 0,
    output_dir: Path | None = None,
) -> BudgetComparison:
    """Run the partition optimizer at each budget and compare ratios.

    Budgets must be strictly increasing.  Determinism plus the trace
    prefix property make the reported ratios monotone non-increasing.
    """
    if not budgets:
        raise ValueError("need at least one budget")
    if any(b2 <= b1 for b1, b2 in zip(budgets, budgets[1:])):
        raise ValueError("budgets must be strictly increasing")
    params = SooParams(
        s_children=s_children,
        depth_schedule=depth_schedule or DepthSchedule.log32(),
    )
    ratios: list[float] = []
    best_values: list[float] = []
    for budget in budgets:
        objective = make_objective(function, dim, budget, shift_seed=shift_seed)
        result = run_soo(objective, budget, params)
        ratios.append(result.ratio if result.ratio is not None else math.nan)
        best_values.append(result.best_value)
    improvements = [
        (r1 - r2) / r1 for r1, r2 in zip(ratios, ratios[1:])
    ]
    comparison = BudgetComparison(
        function=function,
        dim=dim,
        budgets=list(budgets),
        ratios=ratios,
        best_values=best_values,
        improvements=improvements,
    )
    if output_dir is not None:
        out = Path(output_dir)
        out.mkdir(parents=True, exist_ok=True)
        _atomic_write(
            out / f"budgets_{function}_{dim}.json", comparison.to_json_text()
        )
    return comparison
