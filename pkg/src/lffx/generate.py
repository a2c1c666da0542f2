"""Size-ordered enumeration of well-formed hypotheses.

Clauses are built over a canonical variable pool (head variables first) by a
mode-directed depth-first extension; partial clauses that are equal up to
renaming and body order are expanded once. Programs are sets of distinct
clauses, yielded by total literal count and then by canonical key.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .logic import Atom, Clause, Program, Variable, var_name
from .subsumption import cached_clause_subsumes

BUILTIN_CONSTRAINTS = frozenset({
    "head_connected",
    "no_duplicate_literal",
    "connected_body",
    "forward_chained",
    "no_singleton",
    "recursion_needs_base",
    "no_redundant_clause",
    "recursion_progress",
})

DEFAULT_CONSTRAINTS = frozenset({
    "head_connected",
    "no_duplicate_literal",
    "recursion_needs_base",
    "no_redundant_clause",
    "recursion_progress",
})


def constraint_name(name: str) -> str:
    n = name.replace("-", "_")
    if n not in BUILTIN_CONSTRAINTS:
        raise ValueError(f"unknown built-in constraint {name!r}")
    return n


class SpaceTooLarge(RuntimeError):
    pass


@dataclass(frozen=True)
class Declarations:
    head: tuple  # (predicate, arity)
    body: frozenset
    modes: dict = field(default_factory=dict, hash=False, compare=True)
    types: dict = field(default_factory=dict, hash=False, compare=True)


@dataclass(frozen=True)
class ShapeLimits:
    max_clauses: int = 1
    max_body_literals: int = 3
    max_vars: int = 4

    def __post_init__(self):
        if min(self.max_clauses, self.max_body_literals, self.max_vars) < 1:
            raise ValueError("shape limits must be >= 1")


@dataclass(frozen=True)
class GeneratorConfig:
    """Either an enumerative space (declarations + limits + built-in
    constraints) or an explicit pool of programs."""

    declarations: Declarations | None = None
    limits: ShapeLimits = ShapeLimits()
    constraints: frozenset = DEFAULT_CONSTRAINTS
    pool: tuple | None = None

    @property
    def mode(self) -> str:
        return "pool" if self.pool is not None else "enumerative"

    @classmethod
    def from_pool(cls, programs: Iterable[Program]) -> "GeneratorConfig":
        seen = {}
        for p in programs:
            if p.canonical_key in seen:
                raise ValueError(f"duplicate program in pool: {p.canonical_key}")
            seen[p.canonical_key] = p  # body order kept: it is the execution order
        return cls(pool=tuple(seen.values()))


# ---------------------------------------------------------------------------
# clause-level enumeration over integer variables

def _canon_body(nhead: int, body: tuple) -> tuple:
    """Renaming/order invariant key of a body over int variables; head
    variables 0..nhead-1 are fixed."""
    best = None

    def render(lit, names):
        args = []
        for v in lit[1]:
            n = names.get(v)
            if n is None:
                n = names[v] = len(names)
            args.append(n)
        return (lit[0], tuple(args))

    def search(remaining, names, acc):
        nonlocal best
        if not remaining:
            if best is None or acc < best:
                best = acc
            return
        opts = []
        for i in remaining:
            n2 = dict(names)
            opts.append((render(body[i], n2), i, n2))
        low = min(o[0] for o in opts)
        if best is not None and acc + (low,) > best[: len(acc) + 1]:
            return
        seen = set()
        for r, i, n2 in opts:
            if r == low and body[i] not in seen:
                seen.add(body[i])
                search([j for j in remaining if j != i], n2, acc + (r,))

    search(list(range(len(body))), {i: i for i in range(nhead)}, ())
    return best or ()


def _clause_from(head: tuple, body: tuple) -> Clause:
    pred, arity = head
    h = Atom(pred, tuple(Variable(var_name(i)) for i in range(arity)))
    b = tuple(Atom(p, tuple(Variable(var_name(v)) for v in args)) for p, args in body)
    return Clause(h, b)


class ClauseSpace:
    """All well-formed clauses for a declaration set, grouped by size."""

    def __init__(self, decls: Declarations, limits: ShapeLimits, constraints: frozenset):
        self.decls = decls
        self.limits = limits
        self.constraints = constraints
        self.head = decls.head
        self.nhead = decls.head[1]
        self._done: dict[int, list[Clause]] = {}
        self._depth = 0
        self._level = None

    # -- helpers -----------------------------------------------------------
    def _mode(self, pred: tuple):
        return self.decls.modes.get(pred[0])

    def _type(self, pred: tuple):
        return self.decls.types.get(pred[0])

    def _initial(self):
        head_mode = self._mode(self.head)
        use_modes = bool(self.decls.modes)
        if use_modes and head_mode:
            bound = frozenset(i for i, m in enumerate(head_mode) if m == "in")
        else:
            bound = frozenset(range(self.nhead))
        htypes = self._type(self.head)
        vtypes = tuple(htypes) if htypes else (None,) * self.nhead
        return bound, vtypes

    def _literals(self, body, bound, vtypes):
        """Literals that may extend ``body``."""
        nvars = len(vtypes)
        use_modes = bool(self.decls.modes)
        present = set(body)
        for pred in sorted(self.decls.body):
            name, arity = pred
            mode = self._mode(pred) if use_modes else None
            types = self._type(pred)
            yield from self._arg_tuples(pred, arity, mode, types, bound, vtypes, nvars, present)

    def _arg_tuples(self, pred, arity, mode, types, bound, vtypes, nvars, present):
        max_vars = self.limits.max_vars
        name = pred[0]

        def rec(pos, args, vt):
            if pos == arity:
                lit = (name, tuple(args))
                if "no_duplicate_literal" in self.constraints and lit in present:
                    return
                yield lit, vt
                return
            want = types[pos] if types else None
            must_bind = mode is not None and mode[pos] == "in"
            for v in range(len(vt)):
                if must_bind and v not in bound:
                    continue
                if want is not None and vt[v] is not None and vt[v] != want:
                    continue
                nvt = vt
                if want is not None and vt[v] is None:
                    nvt = vt[:v] + (want,) + vt[v + 1:]
                args.append(v)
                yield from rec(pos + 1, args, nvt)
                args.pop()
            if not must_bind and len(vt) < max_vars:
                args.append(len(vt))
                yield from rec(pos + 1, args, vt + (want,))
                args.pop()

        yield from rec(0, [], vtypes)

    # -- filters -----------------------------------------------------------
    def _accept(self, body: tuple) -> bool:
        cons = self.constraints
        head_vars = set(range(self.nhead))
        body_vars = {v for _, args in body for v in args}
        if "head_connected" in cons and not head_vars <= body_vars:
            return False
        if "no_singleton" in cons:
            counts: dict = {}
            for v in range(self.nhead):
                counts[v] = counts.get(v, 0) + 1
            for _, args in body:
                for v in args:
                    counts[v] = counts.get(v, 0) + 1
            if any(c == 1 for c in counts.values()):
                return False
        if "recursion_progress" in cons and self._stalls(body):
            return False
        if "connected_body" in cons and not _connected(self.nhead, body):
            return False
        if "forward_chained" in cons and not _forward_chained(self.nhead, body):
            return False
        return True

    def _stalls(self, body: tuple) -> bool:
        """A recursive literal that repeats the head's input arguments."""
        name = self.head[0]
        mode = self._mode(self.head) if self.decls.modes else None
        ins = [i for i in range(self.nhead) if mode is None or mode[i] == "in"]
        for pred, args in body:
            if pred == name and len(args) == self.nhead and all(args[i] == i for i in ins):
                return True
        return False

    # -- enumeration -------------------------------------------------------
    def clauses_of_size(self, size: int) -> list[Clause]:
        """Well-formed clauses with ``size`` literals, sorted by key; built on
        first request."""
        k = size - 1
        if k < 1 or k > self.limits.max_body_literals:
            return []
        done = self._done
        while self._depth < k:
            self._depth += 1
            if "forward_chained" in self.constraints:
                bodies = self._chains(self._depth)
            else:
                bodies = self._dfs_level()
            keyed: dict = {}
            for body in bodies:
                c = _clause_from(self.head, body)
                keyed.setdefault(c.key, c)
            done[self._depth + 1] = sorted(keyed.values(), key=lambda c: c.key)
        return done[size]

    def _dfs_level(self):
        if self._level is None:
            bound, vtypes = self._initial()
            self._level = [((), bound, vtypes)]
        seen = set()
        nxt = []
        for body, bnd, vt in self._level:
            for lit, nvt in self._literals(body, bnd, vt):
                nb = body + (lit,)
                k = _canon_body(self.nhead, nb)
                if k in seen:
                    continue
                seen.add(k)
                nxt.append((nb, bnd | frozenset(lit[1]), nvt))
        self._level = nxt
        return [body for body, _, _ in nxt if self._accept(body)]

    def _chains(self, k: int):
        """Forward-chained bodies of length ``k``: p1(A,V1), ..., pk(Vk-1,B)."""
        if self.nhead != 2 or k + 1 > self.limits.max_vars:
            return
        preds = sorted(p for p in self.decls.body if p[1] == 2)
        states = [0] + list(range(2, k + 1)) + [1]
        for seq in itertools.product(preds, repeat=k):
            yield tuple((p[0], (states[i], states[i + 1])) for i, p in enumerate(seq))

    def by_size(self, upto: int | None = None) -> dict[int, list[Clause]]:
        top = self.limits.max_body_literals + 1 if upto is None else upto
        out = {}
        for s in range(2, top + 1):
            cs = self.clauses_of_size(s)
            if cs:
                out[s] = cs
        return out


def _connected(nhead: int, body: tuple) -> bool:
    reached = set(range(nhead))
    todo = list(body)
    changed = True
    while todo and changed:
        changed = False
        for lit in list(todo):
            if reached & set(lit[1]):
                reached |= set(lit[1])
                todo.remove(lit)
                changed = True
    return not todo


def _forward_chained(nhead: int, body: tuple) -> bool:
    if nhead != 2 or not body or any(len(args) != 2 for _, args in body):
        return False
    by_src: dict = {}
    for lit in body:
        by_src.setdefault(lit[1][0], []).append(lit)
    if any(len(v) > 1 for v in by_src.values()):
        return False
    cur, seen_vars, used = 0, {0}, 0
    while cur in by_src:
        nxt = by_src[cur][0][1][1]
        used += 1
        if nxt == 1:
            return used == len(body)
        if nxt in seen_vars:
            return False
        seen_vars.add(nxt)
        cur = nxt
    return False


def is_forward_chained(c: Clause) -> bool:
    names: dict = {}
    for i, v in enumerate(c.head.args):
        if not isinstance(v, Variable) or v in names:
            return False
        names[v] = i
    body = []
    for lit in c.body:
        args = []
        for a in lit.args:
            if not isinstance(a, Variable):
                return False
            args.append(names.setdefault(a, len(names)))
        body.append((lit.predicate, tuple(args)))
    return _forward_chained(len(c.head.args), tuple(body))


# ---------------------------------------------------------------------------
# program level

def program_ok(clauses: Sequence[Clause], constraints: frozenset) -> bool:
    if "recursion_needs_base" in constraints:
        rec = [c.is_recursive() for c in clauses]
        if any(rec) and all(rec):
            return False
    if "no_redundant_clause" in constraints and len(clauses) > 1:
        for a, b in itertools.permutations(clauses, 2):
            if cached_clause_subsumes(a, b):
                return False
    return True


class Generator:
    """Stateful stream of hypotheses; see :meth:`next`."""

    def __init__(self, config: GeneratorConfig):
        self.config = config
        self.yielded: set[str] = set()
        self.generated = 0
        if config.pool is not None:
            self._classes = None
            self._pool = sorted(config.pool, key=lambda p: (p.size, p.canonical_key))
            self._pos = 0
        else:
            if config.declarations is None:
                raise ValueError("enumerative mode needs declarations")
            self.space = ClauseSpace(config.declarations, config.limits, config.constraints)
            self._size = 0
            self._class: list = []
            self._pos = 0

    # enumerative helpers
    def max_size(self) -> int:
        lim = self.config.limits
        return lim.max_clauses * (lim.max_body_literals + 1)

    def size_class(self, size: int) -> list[tuple]:
        """All programs (as clause tuples) with ``size`` literals, ordered by
        canonical key."""
        by = self.space.by_size(size)
        cons = self.config.constraints
        lim = self.config.limits
        sizes = sorted(by)
        out = []
        # clause lists sorted by key; a program is a strictly increasing key tuple
        for k in range(1, lim.max_clauses + 1):
            for parts in _partitions(size, k, sizes):
                for combo in _combos(parts, by):
                    if program_ok(combo, cons):
                        out.append(combo)
        out.sort(key=lambda cs: " ".join(c.key for c in cs))
        return out

    def next(self, store=None) -> Program | None:
        if self.config.pool is not None:
            while self._pos < len(self._pool):
                p = self._pool[self._pos]
                self._pos += 1
                if p.canonical_key in self.yielded:
                    continue
                if store is not None and store.is_pruned(p.clauses):
                    continue
                self.yielded.add(p.canonical_key)
                self.generated += 1
                return p
            return None
        while True:
            while self._pos < len(self._class):
                cs = self._class[self._pos]
                self._pos += 1
                if store is not None and store.is_pruned(cs):
                    continue
                p = Program(cs)
                if p.canonical_key in self.yielded:
                    continue
                self.yielded.add(p.canonical_key)
                self.generated += 1
                return p
            self._size += 1
            if self._size > self.max_size():
                return None
            self._class = self.size_class(self._size)
            self._pos = 0

    def count_space(self, ceiling: int = 1_000_000) -> int:
        if self.config.pool is not None:
            return len(self.config.pool)
        total = 0
        for s in range(1, self.max_size() + 1):
            total += len(self.size_class(s))
            if total > ceiling:
                raise SpaceTooLarge(f"hypothesis space exceeds {ceiling} programs")
        return total

    def all_programs(self) -> Iterable[Program]:
        """Every program in the space, in generation order (no pruning)."""
        if self.config.pool is not None:
            yield from self._pool
            return
        for s in range(1, self.max_size() + 1):
            for cs in self.size_class(s):
                yield Program(cs)


def _partitions(total: int, k: int, sizes: list[int]):
    """Non-decreasing k-tuples of clause sizes summing to ``total``."""
    def rec(remaining, k, lo):
        if k == 0:
            if remaining == 0:
                yield ()
            return
        for s in sizes:
            if s < lo or s > remaining:
                continue
            for rest in rec(remaining - s, k - 1, s):
                yield (s,) + rest
    yield from rec(total, k, 0)


def _combos(parts: tuple, by: dict):
    """Distinct clause tuples with the given sizes, each combination once."""
    def rec(i, prev_size, prev_idx):
        if i == len(parts):
            yield ()
            return
        s = parts[i]
        lst = by.get(s, [])
        start = prev_idx + 1 if s == prev_size else 0
        for j in range(start, len(lst)):
            for rest in rec(i + 1, s, j):
                yield (lst[j],) + rest
    for combo in rec(0, None, -1):
        yield tuple(sorted(combo, key=lambda c: c.key))


def next_hypothesis(gen: Generator, store=None) -> Program | None:
    return gen.next(store)


def count_space(config: GeneratorConfig, ceiling: int = 1_000_000) -> int:
    return Generator(config).count_space(ceiling)
