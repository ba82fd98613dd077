"""Command-line front end: estimate, simulate, bench.

Exit codes: 0 success, 1 usage error (bad flags or parameter grid),
2 data error (unreadable or malformed input).  Outputs are a pure
function of (input file, flags): no timestamps, fixed float formats,
and a thread count that never changes results.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from .io import (
    DataError,
    dump_json,
    read_sample_csv,
    render_dot,
    render_edgelist,
    report_dict,
    write_sample_csv,
    write_truth_edges,
)
from .metrics import run_benchmark
from .models import TreeKind, TreeModel, ground_truth, sample
from .orientation import orient
from .seeding import DEFAULT_SEED, SeedPolicy
from .skeleton import estimate_skeleton

__all__ = ["main", "entry_point"]


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # exit 1, not argparse's default 2
        raise UsageError(f"{self.prog}: {message}")


def _default_seed() -> int:
    env = os.environ.get("POLYTREE_SEED")
    if env is None:
        return DEFAULT_SEED
    try:
        return int(env)
    except ValueError as exc:
        raise UsageError(f"POLYTREE_SEED must be an integer, got {env!r}") from exc


def _build_parser() -> _Parser:
    parser = _Parser(prog="polytree", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    est = sub.add_parser("estimate", help="estimate a causal polytree from a CSV sample")
    est.add_argument("input", help="CSV file, rows = observations, columns = variables")
    est.add_argument("-o", "--output", required=True, help="output path for the tree")
    est.add_argument(
        "--format", choices=["dot", "json", "edgelist"], default="dot",
        help="tree output format (default: dot)",
    )
    est.add_argument(
        "--ordinal-encode", action="store_true",
        help="map string columns to 1..#levels in first-appearance order",
    )
    est.add_argument("--seed", type=int, default=None, help="master seed")
    est.add_argument("--threads", type=int, default=1, help="worker threads (results identical)")

    sim = sub.add_parser("simulate", help="sample a synthetic tree model")
    sim.add_argument("--model", required=True, choices=[k.value for k in TreeKind])
    sim.add_argument("--p", type=int, required=True, help="number of variables")
    sim.add_argument("--n", type=int, required=True, help="number of observations")
    sim.add_argument("-o", "--output", required=True, help="output CSV path")
    sim.add_argument(
        "--truth-out", default=None,
        help="ground-truth edge list path (default: <output>.truth.csv)",
    )
    sim.add_argument("--seed", type=int, default=None, help="master seed")

    ben = sub.add_parser("bench", help="Monte Carlo accuracy over a model grid")
    ben.add_argument("--models", required=True, help="comma-separated model kinds")
    ben.add_argument("--p", required=True, help="comma-separated tree sizes")
    ben.add_argument("--n", required=True, help="comma-separated sample sizes")
    ben.add_argument("--reps", type=int, default=20, help="replications per cell")
    ben.add_argument("-o", "--output", default=None, help="CSV path for the cell table")
    ben.add_argument("--seed", type=int, default=None, help="master seed")
    ben.add_argument("--threads", type=int, default=1, help="worker threads (results identical)")
    return parser


def _policy(seed: int | None) -> tuple[SeedPolicy, int]:
    resolved = _default_seed() if seed is None else seed
    return SeedPolicy(resolved), resolved


def _cmd_estimate(args: argparse.Namespace) -> int:
    policy, seed = _policy(args.seed)
    data = read_sample_csv(args.input, ordinal_encode=args.ordinal_encode)
    xi, _, forest = estimate_skeleton(data, policy)
    tree = orient(forest, data, policy, xi=xi)
    names = [data.name_of(j) for j in range(data.p)]
    report = report_dict(tree, names, xi, n=data.n, seed=seed)

    out = Path(args.output)
    if args.format == "json":
        dump_json(report, out)
    else:
        text = (
            render_dot(tree, names, xi)
            if args.format == "dot"
            else render_edgelist(tree, names, xi)
        )
        out.write_text(text)
        dump_json(report, out.with_name(out.name + ".report.json"))
    print(f"estimated {len(tree.edges)} directed edges over {data.p} variables "
          f"({tree.conflict_count} conflicts) -> {out}")
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    policy, _ = _policy(args.seed)
    try:
        model = TreeModel(kind=TreeKind(args.model), p=args.p)
        data = sample(model, args.n, policy)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    truth = ground_truth(model)
    out = Path(args.output)
    truth_out = Path(args.truth_out) if args.truth_out else out.with_name(out.name + ".truth.csv")
    write_sample_csv(data, out)
    names = [data.name_of(j) for j in range(data.p)]
    write_truth_edges(truth.directed, names, truth_out)
    print(f"wrote {data.n}x{data.p} sample -> {out}; truth edges -> {truth_out}")
    return 0


def _parse_int_list(text: str, flag: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part != ""]
    except ValueError as exc:
        raise UsageError(f"{flag} expects comma-separated integers, got {text!r}") from exc


def _cmd_bench(args: argparse.Namespace) -> int:
    policy, _ = _policy(args.seed)
    try:
        kinds = [TreeKind(part) for part in args.models.split(",") if part != ""]
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    ps = _parse_int_list(args.p, "--p")
    ns = _parse_int_list(args.n, "--n")
    if not kinds or not ps or not ns:
        raise UsageError("bench needs at least one model, one p and one n")
    if args.reps < 1:
        raise UsageError(f"--reps must be >= 1, got {args.reps}")
    for kind in kinds:
        for p in ps:
            try:
                TreeModel(kind=kind, p=p)
            except ValueError as exc:
                raise UsageError(str(exc)) from exc

    reports = []
    for kind in kinds:
        for p in ps:
            for n in ns:
                reports.append(
                    run_benchmark(kind, p, n, args.reps, policy, threads=args.threads)
                )

    lines = ["model,p,n,reps,skeleton_mean,skeleton_se,directed_mean,directed_se"]
    for r in reports:
        lines.append(
            f"{r.kind.value},{r.p},{r.n},{r.reps},"
            f"{r.skeleton_mean:.6f},{r.skeleton_se:.6f},"
            f"{r.directed_mean:.6f},{r.directed_se:.6f}"
        )
    csv_text = "\n".join(lines) + "\n"
    if args.output:
        Path(args.output).write_text(csv_text)

    for title, attr in (("skeleton accuracy", "skeleton_mean"),
                        ("directed accuracy", "directed_mean")):
        print(title)
        header = f"{'model':>16} {'p':>6} " + " ".join(f"{f'n={n}':>14}" for n in ns)
        print(header)
        for kind in kinds:
            for p in ps:
                cells = []
                for n in ns:
                    rep = next(
                        r for r in reports if r.kind is kind and r.p == p and r.n == n
                    )
                    se = getattr(rep, attr.replace("_mean", "_se"))
                    cells.append(f"{getattr(rep, attr):.2f} ({se:.3f})")
                print(f"{kind.value:>16} {p:>6} " + " ".join(f"{c:>14}" for c in cells))
        print()
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "estimate":
            return _cmd_estimate(args)
        if args.command == "simulate":
            return _cmd_simulate(args)
        return _cmd_bench(args)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except DataError as exc:
        print(str(exc), file=sys.stderr)
        return 2


def entry_point() -> None:
    sys.exit(main())
