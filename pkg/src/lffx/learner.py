"""The generate-test-constrain loop, in baseline and explain modes."""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field

from .constraints import Constraint, ConstraintStore
from .explain import constraints_from, explain_failure
from .generate import Generator, GeneratorConfig
from .logic import Atom, Program, is_ground
from .prover import Budget, ProofResult, prove

MODES = ("baseline", "explain")


class InvalidTask(ValueError):
    pass


@dataclass
class TaskBundle:
    name: str
    bias: GeneratorConfig
    bk: Program
    positives: list = field(default_factory=list)
    negatives: list = field(default_factory=list)
    budget: Budget | None = None  # recommended; a LearnerConfig budget wins

    def validate(self) -> None:
        if self.bias.pool is not None:
            heads = {c.head.signature for p in self.bias.pool for c in p.clauses}
        elif self.bias.declarations is not None:
            heads = {tuple(self.bias.declarations.head)}
        else:
            raise InvalidTask(f"{self.name}: bias has neither declarations nor a pool")
        for kind, exs in (("positive", self.positives), ("negative", self.negatives)):
            for e in exs:
                if not isinstance(e, Atom) or not is_ground(e):
                    raise InvalidTask(f"{self.name}: {kind} example {e} is not a ground atom")
                if e.signature not in heads:
                    raise InvalidTask(f"{self.name}: {kind} example {e} does not match the head predicate")


@dataclass(frozen=True)
class LearnerConfig:
    mode: str = "explain"
    budget: Budget | None = None  # None: the task's budget, else the default
    generator: GeneratorConfig | None = None  # None: use the task's bias
    max_programs: int = 100_000
    collect_stage_times: bool = True

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.max_programs < 1:
            raise ValueError("max_programs must be >= 1")


@dataclass
class TestOutcome:
    __test__ = False
    missing: list  # indices into positives
    incorrect: list  # indices into negatives
    truncated_pos: list = field(default_factory=list)
    # negatives whose proof search hit the budget: neither entailed nor refuted
    truncated_neg: list = field(default_factory=list)
    results: dict = field(default_factory=dict)  # ("pos"|"neg", i) -> ProofResult, when traced

    @property
    def solved(self) -> bool:
        return not self.missing and not self.incorrect and not self.truncated_neg

    def covered(self, n_pos: int) -> int:
        return n_pos - len(self.missing)


@dataclass
class Step:
    program: Program
    outcome: str  # "solution" | "incomplete" | "inconsistent" | "both" | "undecided"
    added: list


@dataclass
class LearnerReport:
    task: str
    mode: str
    solution: Program | None
    programs_generated: int
    constraints_by_kind: Counter
    stage_times: dict
    exhausted: bool
    history: list = field(default_factory=list)
    store: ConstraintStore | None = None

    @property
    def size(self) -> int | None:
        return self.solution.size if self.solution is not None else None

    @property
    def generated_keys(self) -> list[str]:
        return [s.program.canonical_key for s in self.history]


def test(bk: Program, h: Program, task: TaskBundle, budget: Budget | None = None,
         trace: bool = False) -> TestOutcome:
    """Test ``h`` on every example; ``missing``/``incorrect`` hold indices.

    A negative only counts as rejected when its proof search finishes, so a
    program that runs out of budget on a negative is never a solution.
    """
    budget = budget or Budget()
    out = TestOutcome([], [])
    for i, e in enumerate(task.positives):
        r = prove(bk, h, e, budget, trace=trace)
        if not r.entailed:
            out.missing.append(i)
            if r.exhausted:
                out.truncated_pos.append(i)
        if trace:
            out.results[("pos", i)] = r
    for i, e in enumerate(task.negatives):
        r = prove(bk, h, e, budget, trace=trace)
        if r.entailed:
            out.incorrect.append(i)
        elif r.exhausted:
            out.truncated_neg.append(i)
        if trace:
            out.results[("neg", i)] = r
    return out


def hypothesis_constraints(h: Program, outcome: TestOutcome, n_pos: int) -> list[Constraint]:
    """Constraints recorded for a failed hypothesis as a whole.

    An inconsistent hypothesis only yields a generalisation constraint. A
    consistent one with definite missing answers yields a specialisation
    constraint, plus elimination when it covers no positive example and is a
    single non-recursive clause.
    """
    if outcome.incorrect:
        return [Constraint("generalisation", h)]
    definite = [i for i in outcome.missing if i not in outcome.truncated_pos]
    if not definite:
        return []
    out = [Constraint("specialisation", h)]
    if _zero_coverage(outcome, n_pos) and len(h.clauses) == 1 and not h.is_recursive():
        out.append(Constraint("elimination", h))
    return out


def _zero_coverage(outcome: TestOutcome, n_pos: int) -> bool:
    return n_pos > 0 and len(outcome.missing) == n_pos and not outcome.truncated_pos


def learn(task: TaskBundle, config: LearnerConfig | None = None) -> LearnerReport:
    config = config or LearnerConfig()
    task.validate()
    explain = config.mode == "explain"
    budget = config.budget or task.budget or Budget()
    gen = Generator(config.generator or task.bias)
    store = ConstraintStore()
    times = {"generate": 0.0, "test": 0.0, "constrain": 0.0}
    clock = time.perf_counter if config.collect_stage_times else (lambda: 0.0)
    history: list[Step] = []
    solution = None
    n_pos = len(task.positives)

    while len(history) < config.max_programs:
        t0 = clock()
        h = gen.next(store)
        t1 = clock()
        times["generate"] += t1 - t0
        if h is None:
            break
        outcome = test(task.bk, h, task, budget, trace=explain)
        t2 = clock()
        times["test"] += t2 - t1
        if outcome.solved:
            history.append(Step(h, "solution", []))
            solution = h
            break
        new = hypothesis_constraints(h, outcome, n_pos)
        if explain:
            missing = [(task.positives[i], outcome.results[("pos", i)]) for i in outcome.missing]
            incorrect = [(task.negatives[i], outcome.results[("neg", i)]) for i in outcome.incorrect]
            expl = explain_failure(task.bk, h, missing, incorrect, budget, task.positives)
            t3 = clock()
            times["test"] += t3 - t2
            t2 = t3
            new.extend(constraints_from(expl))
        added = [c for c in new if store.add(c)]
        times["constrain"] += clock() - t2
        if outcome.incorrect and outcome.missing:
            kind = "both"
        elif outcome.incorrect:
            kind = "inconsistent"
        elif outcome.missing:
            kind = "incomplete"
        else:
            kind = "undecided"
        history.append(Step(h, kind, added))

    if solution is not None and not verify(task, solution, budget):
        raise RuntimeError(f"returned program failed re-verification: {solution}")
    return LearnerReport(
        task=task.name,
        mode=config.mode,
        solution=solution,
        programs_generated=len(history),
        constraints_by_kind=Counter(store.counts),
        stage_times=times,
        exhausted=solution is None,
        history=history,
        store=store,
    )


test.__test__ = False  # keep pytest from collecting it


def verify(task: TaskBundle, h: Program, budget: Budget | None = None) -> bool:
    return test(task.bk, h, task, budget).solved
