"""Command-line front end.

Single runs and grids share one flag surface: `--function` and `--dim`
accept comma-separated lists, and any cross product larger than one cell
becomes a grid with a `summary.csv`.  Exit codes: 0 on success, 1 on a
usage error, 2 on a runtime failure.

Examples:

    soobox --function sphere --dim 2 --budget 20000 --algo soo --out runs/
    soobox --function all --dim 2,10 --cec-budget --algo soo,random --out runs/
    soobox --suite-manifest --dim 10
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import SooboxError
from .harness import ALGORITHMS, RunConfig, run_experiment, run_grid
from .objectives import SUITE_NAMES, suite_manifest
from .tree import DepthSchedule


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad flags; the interface contract wants 1
    def error(self, message):
        raise _UsageError(message)


def _parse_functions(text: str) -> list[str]:
    names = []
    for name in text.split(","):
        name = name.strip()
        if name == "all":
            names.extend(SUITE_NAMES)
        elif name in SUITE_NAMES:
            names.append(name)
        else:
            raise argparse.ArgumentTypeError(
                f"unknown function {name!r}; choose from {', '.join(SUITE_NAMES)} or all"
            )
    return names


def _parse_dims(text: str) -> list[int]:
    try:
        dims = [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if any(d < 1 for d in dims):
        raise argparse.ArgumentTypeError("dimensions must be >= 1")
    return dims


def _parse_schedule(text: str) -> DepthSchedule:
    if text in ("paper", "log32"):
        return DepthSchedule.log32()
    if text == "unbounded":
        return DepthSchedule.unbounded()
    if text.startswith("const:"):
        try:
            return DepthSchedule.constant(int(text.split(":", 1)[1]))
        except ValueError:
            raise argparse.ArgumentTypeError(
                f"bad constant depth in {text!r}"
            ) from None
    raise argparse.ArgumentTypeError(
        f"unknown depth schedule {text!r}; expected paper, const:<h>, or unbounded"
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="soobox",
        description="Budget-constrained black-box minimization on the benchmark suite.",
    )
    parser.add_argument(
        "--function",
        type=_parse_functions,
        help="suite function name, comma-separated list, or 'all'",
    )
    parser.add_argument(
        "--dim", type=_parse_dims, help="dimension or comma-separated list"
    )
    parser.add_argument("--budget", type=int, help="evaluation budget")
    parser.add_argument(
        "--cec-budget",
        action="store_true",
        help="use the protocol budget of 10^4 evaluations per dimension",
    )
    parser.add_argument(
        "--algo",
        type=lambda s: [a.strip() for a in s.split(",")],
        default=["soo"],
        help=f"algorithm or comma-separated list; choose from {', '.join(ALGORITHMS)}",
    )
    parser.add_argument(
        "--refine-fraction",
        type=float,
        default=0.05,
        help="budget share reserved for local refinement (soo-refine)",
    )
    parser.add_argument(
        "--s-children", type=int, default=3, help="children per split, odd >= 3"
    )
    parser.add_argument(
        "--depth-schedule",
        type=_parse_schedule,
        default=DepthSchedule.log32(),
        help="depth cap rule: paper, const:<h>, or unbounded",
    )
    parser.add_argument(
        "--seed", type=int, default=0, help="seed for the random baseline"
    )
    parser.add_argument(
        "--grid-resolution",
        type=int,
        default=3,
        help="divisions per dimension for the ucb-grid baseline",
    )
    parser.add_argument(
        "--jobs", type=int, default=1, help="worker processes for grid cells"
    )
    parser.add_argument("--out", type=Path, help="output directory for artifacts")
    parser.add_argument(
        "--format",
        choices=("csv", "json", "both"),
        default="both",
        help="which per-run artifacts to write",
    )
    parser.add_argument(
        "--suite-manifest",
        action="store_true",
        help="print the suite manifest as JSON and exit",
    )
    return parser


def _formats(choice: str) -> tuple[str, ...]:
    return ("csv", "json") if choice == "both" else (choice,)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)

        if args.suite_manifest:
            dim = args.dim[0] if args.dim else 2
            print(json.dumps(suite_manifest(dim), indent=2))
            return 0

        if not args.function:
            parser.error("--function is required")
        if not args.dim:
            parser.error("--dim is required")
        if args.cec_budget == (args.budget is not None):
            parser.error("exactly one of --budget and --cec-budget is required")
        for algo in args.algo:
            if algo not in ALGORITHMS:
                parser.error(
                    f"unknown algorithm {algo!r}; choose from {', '.join(ALGORITHMS)}"
                )
        if args.jobs < 1:
            parser.error("--jobs must be >= 1")
        if args.s_children < 3 or args.s_children % 2 == 0:
            parser.error("--s-children must be odd and >= 3")
        if not 0.0 < args.refine_fraction < 1.0:
            parser.error("--refine-fraction must be in (0, 1)")
    except _UsageError as err:
        parser.print_usage(sys.stderr)
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help
        return int(exc.code or 0)

    try:
        single = (
            len(args.function) == 1 and len(args.dim) == 1 and len(args.algo) == 1
        )
        if single:
            config = RunConfig(
                function=args.function[0],
                dim=args.dim[0],
                budget=args.budget,
                cec_budget=args.cec_budget,
                algorithm=args.algo[0],
                refine_fraction=args.refine_fraction,
                s_children=args.s_children,
                depth_schedule=args.depth_schedule,
                seed=args.seed,
                grid_resolution=args.grid_resolution,
                output_dir=args.out,
                formats=_formats(args.format),
            )
            result = run_experiment(config)
            ratio = "n/a" if result.ratio is None else format(result.ratio, ".17g")
            print(
                f"{config.stem}: best_value={result.best_value:.17g} "
                f"ratio={ratio} evals={result.evals_used}"
            )
        else:
            summary = run_grid(
                args.function,
                args.dim,
                args.algo,
                budget=args.budget,
                cec_budget=args.cec_budget,
                output_dir=args.out,
                formats=_formats(args.format),
                jobs=args.jobs,
                refine_fraction=args.refine_fraction,
                s_children=args.s_children,
                depth_schedule=args.depth_schedule,
                seed=args.seed,
                grid_resolution=args.grid_resolution,
            )
            print(summary.to_csv_text(), end="")
        return 0
    except (SooboxError, ValueError, OSError) as err:
        print(f"{parser.prog}: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
