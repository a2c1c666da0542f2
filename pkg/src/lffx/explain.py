"""Failure explanation: sub-programs read off SLD branches.

A success branch for an incorrect answer gives a sub-program with the same
incorrect answer. A failing branch for a missing answer gives a candidate
that is kept only if a retest confirms the example is still missed.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .constraints import Constraint
from .logic import Atom, Program
from .prover import Budget, BranchTrace, ProofResult, prove

DEFAULT_BRANCH_CAP = 256


@dataclass
class FailureExplanation:
    hypothesis: Program
    incomplete_subprograms: list = field(default_factory=list)
    inconsistent_subprograms: list = field(default_factory=list)
    zero_coverage_subprograms: list = field(default_factory=list)
    # canonical key -> example that witnessed the failure
    witnesses: dict = field(default_factory=dict)

    def all(self) -> list[Program]:
        return self.inconsistent_subprograms + self.incomplete_subprograms + self.zero_coverage_subprograms


def lambda_subprogram(h: Program, t: BranchTrace) -> Program:
    """Keep, per clause with a used literal, its head and the used body
    literals in their original order."""
    used: dict[int, set] = {}
    for ref in t.used:
        used.setdefault(ref.clause_index, set()).add(ref.literal_index)
    clauses = []
    for ci, c in enumerate(h.clauses):
        lits = used.get(ci)
        if not lits:
            continue
        body = tuple(b for k, b in enumerate(c.body, start=1) if k in lits)
        clauses.append(type(c)(c.head, body))
    return Program(tuple(clauses))


def _same(p: Program, h: Program) -> bool:
    return p.canonical_key == h.canonical_key


def explain_failure(bk: Program, h: Program,
                    eplus_missing: list[tuple[Atom, ProofResult]],
                    eminus_incorrect: list[tuple[Atom, ProofResult]],
                    budget: Budget | None,
                    all_positives: list[Atom],
                    branch_cap: int = DEFAULT_BRANCH_CAP) -> FailureExplanation:
    budget = budget or Budget()
    out = FailureExplanation(h)

    seen: set[str] = set()
    for e, res in eminus_incorrect:
        for br in res.successes[:1]:
            sp = lambda_subprogram(h, br)
            if not sp.clauses or _same(sp, h) or sp.canonical_key in seen:
                continue
            seen.add(sp.canonical_key)
            out.inconsistent_subprograms.append(sp)
            out.witnesses[("inconsistent", sp.canonical_key)] = e

    # candidate key -> (program, [originating examples])
    candidates: dict[str, tuple[Program, list[Atom]]] = {}
    for e, res in eplus_missing:
        for br in res.failing[:branch_cap]:
            sp = lambda_subprogram(h, br)
            if not sp.clauses or _same(sp, h):
                continue
            entry = candidates.setdefault(sp.canonical_key, (sp, []))
            if e not in entry[1]:
                entry[1].append(e)

    for key, (sp, origins) in candidates.items():
        confirmed = None
        for e in origins:
            r = prove(bk, sp, e, budget)
            if not r.entailed and not r.exhausted:
                confirmed = e
                break
        if confirmed is None:
            continue
        out.witnesses[("incomplete", key)] = confirmed
        if _covers_nothing(bk, sp, all_positives, budget):
            out.zero_coverage_subprograms.append(sp)
        else:
            out.incomplete_subprograms.append(sp)
    return out


def _covers_nothing(bk, p, positives, budget) -> bool:
    for e in positives:
        r = prove(bk, p, e, budget)
        if r.entailed or r.exhausted:
            return False
    return True


def constraints_from(expl: FailureExplanation) -> list[Constraint]:
    out = []
    for p in expl.inconsistent_subprograms:
        ex = expl.witnesses.get(("inconsistent", p.canonical_key))
        out.append(Constraint("generalisation", p, "subprogram", str(ex) if ex else None))
    for p in expl.incomplete_subprograms:
        ex = expl.witnesses.get(("incomplete", p.canonical_key))
        out.append(Constraint("specialisation", p, "subprogram", str(ex) if ex else None))
    for p in expl.zero_coverage_subprograms:
        ex = expl.witnesses.get(("incomplete", p.canonical_key))
        ex = str(ex) if ex else None
        out.append(Constraint("specialisation", p, "subprogram", ex))
        if len(p.clauses) == 1 and not p.is_recursive():
            out.append(Constraint("elimination", p, "subprogram", ex))
    return out
