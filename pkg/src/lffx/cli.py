"""Command line entry point: ``lffx learn|bench|count-space``.

Exit codes: 0 solved, 2 search exhausted without a solution, 1 error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bench
from .generate import SpaceTooLarge, count_space
from .learner import InvalidTask, LearnerConfig, learn
from .parse import ParseError
from .prover import DEFAULT_DEPTH, Budget
from .tasks import (LIST_TASKS, STRING_TASKS, bundled_task_dir, gen_list_task, gen_robot_task,
                    gen_string_task, load_task)

EXIT_SOLVED, EXIT_ERROR, EXIT_EXHAUSTED = 0, 1, 2


def _resolve_task_dir(arg: str) -> Path:
    p = Path(arg)
    if p.is_dir():
        return p
    try:
        return bundled_task_dir(arg)
    except FileNotFoundError:
        raise FileNotFoundError(f"task directory not found: {arg}") from None


def _budget(args) -> Budget | None:
    if args.budget is None:
        return None
    return Budget(max_resolution_steps=args.budget, max_depth=args.max_depth or DEFAULT_DEPTH)


def _int_range(text: str) -> list[int]:
    out = []
    for part in text.split(","):
        if ".." in part:
            lo, hi = part.split("..")
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    return out


def cmd_learn(args) -> int:
    task = load_task(_resolve_task_dir(args.taskdir))
    cfg = LearnerConfig(mode=args.mode, budget=_budget(args), max_programs=args.max_programs)
    rep = learn(task, cfg)
    if args.verbose:
        for i, step in enumerate(rep.history, 1):
            print(f"[{i}] {step.outcome}: {step.program.canonical_key}")
            for c in step.added:
                print(f"      + {c.kind} {c.source.canonical_key} ({c.origin})")
    kinds = rep.constraints_by_kind
    print(f"task: {task.name}  mode: {rep.mode}")
    print(f"programs generated: {rep.programs_generated}")
    print("constraints: " + ", ".join(f"{k}={kinds.get(k, 0)}" for k in
                                      ("specialisation", "generalisation", "elimination")))
    print("stage times: " + ", ".join(f"{k}={v:.3f}s" for k, v in rep.stage_times.items()))
    if rep.solution is not None:
        print(f"solution (size {rep.size}):")
        print(rep.solution)
    else:
        print("no solution found (search exhausted)")
    if args.json:
        payload = {
            "task": task.name, "mode": rep.mode, "solved": rep.solution is not None,
            "size": rep.size, "programs_generated": rep.programs_generated,
            "constraints": dict(kinds), "stage_times": rep.stage_times,
            "solution": str(rep.solution) if rep.solution is not None else None,
            "generated": rep.generated_keys,
        }
        Path(args.json).write_text(json.dumps(payload, indent=2))
    return EXIT_SOLVED if rep.solution is not None else EXIT_EXHAUSTED


def cmd_count_space(args) -> int:
    task = load_task(_resolve_task_dir(args.taskdir))
    try:
        n = count_space(task.bias, ceiling=args.ceiling)
    except SpaceTooLarge as exc:
        print(str(exc))
        return EXIT_ERROR
    print(n)
    return EXIT_SOLVED


def cmd_bench(args) -> int:
    modes = args.modes.split(",")
    budget = _budget(args)
    jobs = []
    if args.family == "robot":
        for n in _int_range(args.n):
            jobs.append((gen_robot_task(n), 0))
    elif args.family == "lists":
        names = args.tasks.split(",") if args.tasks else list(LIST_TASKS)
        for name in names:
            for s in range(args.seed, args.seed + args.seeds):
                jobs.append((gen_list_task(name, seed=s), s))
    else:
        names = args.tasks.split(",") if args.tasks else list(STRING_TASKS)
        for name in names:
            jobs.append((gen_string_task(name), 0))
    records = []
    for task, seed in jobs:
        records.extend(bench.run(task, modes, repeats=args.repeats, seed=seed, budget=budget,
                                 max_programs=args.max_programs, workers=args.workers))
    records.sort(key=lambda r: (r.task, r.mode, r.seed, r.repeat))
    text = bench.to_csv(records)
    if args.csv:
        Path(args.csv).write_text(text)
    else:
        sys.stdout.write(text)
    if args.json:
        Path(args.json).write_text(bench.to_json(records))
    print(bench.summarize(records), file=sys.stderr)
    return EXIT_SOLVED if all(r.solved for r in records) else EXIT_EXHAUSTED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lffx", description="Learn definite programs from failures.")
    sub = p.add_subparsers(dest="command", required=True)

    def budget_opts(sp):
        sp.add_argument("--budget", type=int, default=None,
                        help="resolution steps per proof (default: task setting or LFFX_BUDGET)")
        sp.add_argument("--max-depth", type=int, default=None, help="nesting limit for hypothesis clauses")
        sp.add_argument("--max-programs", type=int, default=100_000)

    lp = sub.add_parser("learn", help="learn a program for a task directory")
    lp.add_argument("taskdir", help="directory with bias.pl, bk.pl, exs.pl, or a bundled task name")
    lp.add_argument("--mode", choices=("baseline", "explain"), default="explain")
    budget_opts(lp)
    lp.add_argument("--json", metavar="OUT", help="write a JSON report")
    lp.add_argument("-v", "--verbose", action="store_true", help="print every generated program")
    lp.set_defaults(func=cmd_learn)

    cp = sub.add_parser("count-space", help="count the programs in a task's hypothesis space")
    cp.add_argument("taskdir")
    cp.add_argument("--ceiling", type=int, default=1_000_000)
    cp.set_defaults(func=cmd_count_space)

    bp = sub.add_parser("bench", help="compare baseline and explain modes")
    bp.add_argument("family", choices=("robot", "lists", "strings"))
    bp.add_argument("--n", default="1..6", help="robot corridor lengths, e.g. 1..6 or 4,5")
    bp.add_argument("--tasks", default=None, help="comma-separated task names")
    bp.add_argument("--seed", type=int, default=0)
    bp.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds (lists)")
    bp.add_argument("--repeats", type=int, default=1)
    bp.add_argument("--modes", default="baseline,explain")
    bp.add_argument("--workers", type=int, default=None, help="parallel runs (default: LFFX_WORKERS or 1)")
    bp.add_argument("--csv", metavar="OUT", help="write CSV here instead of stdout")
    bp.add_argument("--json", metavar="OUT")
    budget_opts(bp)
    bp.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FileNotFoundError, InvalidTask, ParseError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
