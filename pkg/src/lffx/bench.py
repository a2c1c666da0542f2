"""Mode-comparison runs and their CSV/JSON records."""
from __future__ import annotations

import csv
import io
import json
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Callable, Sequence, Union

from .learner import LearnerConfig, TaskBundle, learn
from .prover import Budget

CSV_FIELDS = ["task", "mode", "seed", "solved", "size", "programs", "constraints_spec",
              "constraints_gen", "constraints_elim", "time_total", "time_generate",
              "time_test", "time_constrain"]
TIME_FIELDS = {"time_total", "time_generate", "time_test", "time_constrain"}

TaskSource = Union[TaskBundle, Callable[[int], TaskBundle]]


@dataclass
class RunRecord:
    task: str
    mode: str
    seed: int
    repeat: int
    solved: bool
    size: int | None
    programs: int
    constraints_spec: int
    constraints_gen: int
    constraints_elim: int
    time_total: float
    time_generate: float
    time_test: float
    time_constrain: float
    solution: str

    @property
    def programs_generated(self) -> int:
        return self.programs

    def row(self) -> dict:
        d = asdict(self)
        out = {}
        for k in CSV_FIELDS:
            v = d[k]
            if k in TIME_FIELDS:
                v = f"{v:.4f}"
            elif isinstance(v, bool):
                v = str(v).lower()
            elif v is None:
                v = ""
            out[k] = v
        return out


def workers_from_env(default: int = 1) -> int:
    try:
        return max(1, int(os.environ.get("LFFX_WORKERS", default)))
    except ValueError:
        return default


def _one(args) -> RunRecord:
    task, mode, seed, repeat, budget, max_programs = args
    t0 = time.perf_counter()
    rep = learn(task, LearnerConfig(mode=mode, budget=budget, max_programs=max_programs))
    total = time.perf_counter() - t0
    kinds = rep.constraints_by_kind
    return RunRecord(
        task=task.name, mode=mode, seed=seed, repeat=repeat,
        solved=rep.solution is not None, size=rep.size, programs=rep.programs_generated,
        constraints_spec=kinds.get("specialisation", 0),
        constraints_gen=kinds.get("generalisation", 0),
        constraints_elim=kinds.get("elimination", 0),
        time_total=total, time_generate=rep.stage_times["generate"],
        time_test=rep.stage_times["test"], time_constrain=rep.stage_times["constrain"],
        solution=str(rep.solution) if rep.solution is not None else "",
    )


def run(task: TaskSource, modes: Sequence[str] = ("baseline", "explain"), repeats: int = 1,
        seed: int = 0, budget: Budget | None = None, max_programs: int = 100_000,
        workers: int | None = None) -> list[RunRecord]:
    """One record per (mode, repeat). ``task`` may be a bundle or a
    function from seed to bundle."""
    bundle = task(seed) if callable(task) else task
    jobs = [(bundle, m, seed, r, budget, max_programs) for m in modes for r in range(repeats)]
    return _execute(jobs, workers)


def run_many(jobs: Sequence[tuple], workers: int | None = None) -> list[RunRecord]:
    """``jobs`` holds (bundle, mode, seed) triples."""
    return _execute([(b, m, s, 0, None, 100_000) for b, m, s in jobs], workers)


def _execute(jobs: list, workers: int | None) -> list[RunRecord]:
    workers = workers or workers_from_env()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            records = list(ex.map(_one, jobs))
    else:
        records = [_one(j) for j in jobs]
    records.sort(key=lambda r: (r.task, r.mode, r.seed, r.repeat))
    return records


def to_csv(records: Sequence[RunRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow(r.row())
    return buf.getvalue()


def to_json(records: Sequence[RunRecord]) -> str:
    return json.dumps([asdict(r) for r in records], indent=2)


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.1f}"


def summarize(records: Sequence[RunRecord]) -> str:
    """Per-task program counts and the explain/baseline ratio."""
    by: dict = {}
    for r in records:
        by.setdefault(r.task, {}).setdefault(r.mode, []).append(r.programs)
    lines = [f"{'task':<24} {'baseline':>9} {'explain':>9} {'ratio':>7}"]
    for task, modes in sorted(by.items()):
        b = modes.get("baseline")
        e = modes.get("explain")
        mb = sum(b) / len(b) if b else None
        me = sum(e) / len(e) if e else None
        ratio = f"{me / mb:.3f}" if mb and me is not None else "-"
        lines.append(f"{task:<24} {_fmt(mb):>9} {_fmt(me):>9} {ratio:>7}")
    return "\n".join(lines)
