"""Pruning constraints learned from failed programs and the store that
decides whether a candidate hypothesis is pruned.

specialisation(P)  prunes h when P ⪯ h
generalisation(P)  prunes h when h ⪯ P
elimination(P)     P is one non-recursive clause that covers no positive
                   example; prunes every non-recursive h that has a clause
                   subsumed by it
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Sequence

from .logic import Clause, Program, canonicalize
from .subsumption import body_signatures, cached_clause_subsumes, is_generalisation, is_specialisation

KINDS = ("specialisation", "generalisation", "elimination")


@dataclass(frozen=True)
class Constraint:
    kind: str
    source: Program
    origin: str = "hypothesis"  # or "subprogram"
    example: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if not self.source.clauses:
            raise ValueError("constraint source must be non-empty")
        if self.kind == "elimination":
            if len(self.source.clauses) != 1 or self.source.is_recursive():
                raise ValueError("elimination needs a single non-recursive clause")
        object.__setattr__(self, "source", canonicalize(self.source))

    @property
    def key(self) -> tuple[str, str]:
        return (self.kind, self.source.canonical_key)

    def __str__(self) -> str:
        ex = f" {self.example}" if self.example else ""
        return f"{self.kind}\t{self.source.canonical_key}\t{self.origin}{ex}"


@dataclass(frozen=True)
class PruneReason:
    constraint: Constraint
    index: int

    def __str__(self) -> str:
        return f"{self.constraint.kind} of {self.constraint.source.canonical_key}"


def _is_recursive(clauses: Sequence[Clause]) -> bool:
    heads = {c.head.signature for c in clauses}
    return any(lit.signature in heads for c in clauses for lit in c.body)


def matches(c: Constraint, clauses: Sequence[Clause]) -> bool:
    """Direct decision by theory subsumption (no index)."""
    h = Program(tuple(clauses))
    if c.kind == "specialisation":
        return is_specialisation(h, c.source)
    if c.kind == "generalisation":
        return is_generalisation(h, c.source)
    if _is_recursive(clauses):
        return False
    p = c.source.clauses[0]
    return any(cached_clause_subsumes(p, x) for x in clauses)


class _ClauseInfo:
    __slots__ = ("clause", "sigs", "below", "above", "upto", "spec_hits", "spec_upto")

    def __init__(self, clause: Clause):
        self.clause = clause
        self.sigs = body_signatures(clause)
        self.below = 0  # ids of constraint clauses that subsume this clause
        self.above = 0  # ids of constraint clauses this clause subsumes
        self.upto = 0
        self.spec_hits = 0  # multi-clause specialisation constraints touching this clause
        self.spec_upto = 0


class ConstraintStore:
    """Deduplicated constraint set with an index over the clauses that
    occur in constraint sources.

    For every candidate clause the store lazily computes two bitmasks over
    constraint-clause ids: which ones subsume it and which ones it
    subsumes. Pruning then reduces to bit operations per constraint.
    """

    def __init__(self):
        self.constraints: list[Constraint] = []
        self._keys: set = set()
        self.counts: Counter = Counter()
        self._cids: dict[str, int] = {}
        self._cclauses: list[_ClauseInfo] = []
        self._info: dict[str, _ClauseInfo] = {}
        self._masks: list[int] = []
        self._spec_single = 0
        self._gen_single = 0
        self._elim = 0
        self._spec_multi: list[int] = []
        self._gen_multi: list[int] = []

    def __len__(self) -> int:
        return len(self.constraints)

    def __iter__(self):
        return iter(self.constraints)

    def _clause_id(self, c: Clause) -> int:
        k = c.key
        i = self._cids.get(k)
        if i is None:
            i = self._cids[k] = len(self._cclauses)
            self._cclauses.append(_ClauseInfo(c))
        return i

    def add(self, c: Constraint) -> bool:
        if c.key in self._keys:
            return False
        self._keys.add(c.key)
        self.constraints.append(c)
        self.counts[c.kind] += 1
        mask = 0
        for cl in c.source.clauses:
            mask |= 1 << self._clause_id(cl)
        self._masks.append(mask)
        single = len(c.source.clauses) == 1
        if c.kind == "specialisation":
            if single:
                self._spec_single |= mask
            else:
                self._spec_multi.append(mask)
        elif c.kind == "generalisation":
            if single:
                self._gen_single |= mask
            else:
                self._gen_multi.append(mask)
        else:
            self._elim |= mask
        return True

    def _info_for(self, c: Clause) -> _ClauseInfo:
        info = self._info.get(c.key)
        if info is None:
            info = self._info[c.key] = _ClauseInfo(c)
        n = len(self._cclauses)
        if info.upto < n:
            sigs, head = info.sigs, c.head.signature
            for i in range(info.upto, n):
                p = self._cclauses[i]
                if p.clause.head.signature != head:
                    continue
                if p.sigs <= sigs and cached_clause_subsumes(p.clause, c):
                    info.below |= 1 << i
                if sigs <= p.sigs and cached_clause_subsumes(c, p.clause):
                    info.above |= 1 << i
            info.upto = n
        return info

    def _spec_hits(self, inf: _ClauseInfo) -> int:
        multi = self._spec_multi
        if inf.spec_upto < len(multi):
            below, hits = inf.below, inf.spec_hits
            for j in range(inf.spec_upto, len(multi)):
                if below & multi[j]:
                    hits |= 1 << j
            inf.spec_hits, inf.spec_upto = hits, len(multi)
        return inf.spec_hits

    def _summary(self, clauses: Sequence[Clause]):
        infos = [self._info_for(c) for c in clauses]
        all_below = -1
        any_below = 0
        any_above = 0
        for inf in infos:
            all_below &= inf.below
            any_below |= inf.below
            any_above |= inf.above
        return infos, all_below, any_below, any_above

    def _match(self, idx: int, infos, any_above, any_below, recursive) -> bool:
        c = self.constraints[idx]
        m = self._masks[idx]
        if c.kind == "specialisation":
            return all(inf.below & m for inf in infos)
        if c.kind == "generalisation":
            return m & ~any_above == 0
        return not recursive and bool(any_below & m)

    def prunes(self, h) -> PruneReason | None:
        """First constraint (in insertion order) that prunes ``h``."""
        clauses = h.clauses if isinstance(h, Program) else tuple(h)
        if not self.constraints:
            return None
        infos, _, any_below, any_above = self._summary(clauses)
        rec = _is_recursive(clauses)
        for i in range(len(self.constraints)):
            if self._match(i, infos, any_above, any_below, rec):
                return PruneReason(self.constraints[i], i)
        return None

    def is_pruned(self, h) -> bool:
        clauses = h.clauses if isinstance(h, Program) else tuple(h)
        if not self.constraints:
            return False
        infos, all_below, any_below, any_above = self._summary(clauses)
        if all_below & self._spec_single:
            return True
        if any_above & self._gen_single:
            return True
        if self._elim & any_below and not _is_recursive(clauses):
            return True
        if self._spec_multi:
            hits = -1
            for inf in infos:
                hits &= self._spec_hits(inf)
                if not hits:
                    break
            if hits:
                return True
        for m in self._gen_multi:
            if m & ~any_above == 0:
                return True
        return False

    def prunes_naive(self, h) -> PruneReason | None:
        """Reference implementation of :meth:`prunes` by direct subsumption."""
        clauses = h.clauses if isinstance(h, Program) else tuple(h)
        for i, c in enumerate(self.constraints):
            if matches(c, clauses):
                return PruneReason(c, i)
        return None

    def report(self) -> str:
        return "\n".join(str(c) for c in self.constraints)


def add(store: ConstraintStore, c: Constraint) -> bool:
    return store.add(c)


def prunes(store: ConstraintStore, h: Program) -> PruneReason | None:
    return store.prunes(h)
