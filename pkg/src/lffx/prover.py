"""Budgeted SLD resolution over background knowledge plus a hypothesis.

Depth-first, leftmost selection, clauses tried in textual order. When tracing,
every branch records which hypothesis literals it used: the head of every
hypothesis clause it resolved with and every hypothesis body literal that was
selected on it. BK clauses are never traced.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .logic import Atom, Clause, Compound, Constant, Program, Variable

DEFAULT_STEPS = int(os.environ.get("LFFX_BUDGET", 100_000))
DEFAULT_DEPTH = 30


@dataclass(frozen=True)
class Budget:
    """``max_resolution_steps`` bounds the whole tree; ``max_depth`` bounds
    the nesting of hypothesis-clause resolutions along a branch."""

    max_resolution_steps: int = DEFAULT_STEPS
    max_depth: int = DEFAULT_DEPTH

    def __post_init__(self):
        if self.max_resolution_steps < 1 or self.max_depth < 1:
            raise ValueError("budget limits must be >= 1")


@dataclass(frozen=True, order=True)
class LiteralRef:
    clause_index: int
    literal_index: int  # 0 is the head


@dataclass(frozen=True)
class BranchTrace:
    outcome: str  # "success" | "failure" | "truncated"
    used: frozenset = frozenset()


@dataclass(frozen=True)
class ProofResult:
    entailed: bool
    exhausted: bool
    branches: tuple = ()
    steps: int = 0

    @property
    def failing(self) -> list[BranchTrace]:
        return [b for b in self.branches if b.outcome == "failure"]

    @property
    def successes(self) -> list[BranchTrace]:
        return [b for b in self.branches if b.outcome == "success"]


# ---------------------------------------------------------------------------
# runtime terms: constants are str/int, compounds are tuples (functor, *args),
# unbound variables are _Ref cells. Clause templates use _Slot for variables.

class _Ref:
    __slots__ = ("ref",)

    def __init__(self):
        self.ref = None


class _Slot:
    __slots__ = ("i",)

    def __init__(self, i: int):
        self.i = i


def _compile_term(t, slots: dict):
    if isinstance(t, Variable):
        s = slots.get(t)
        if s is None:
            s = slots[t] = _Slot(len(slots))
        return s
    if isinstance(t, Constant):
        return t.value
    return (t.functor, *(_compile_term(a, slots) for a in t.args))


def _compile_atom(a: Atom, slots: dict):
    return (a.predicate, *(_compile_term(x, slots) for x in a.args))


def to_runtime(a: Atom):
    """Runtime form of a ground atom."""
    return _compile_atom(a, {})


def _deref(t):
    while type(t) is _Ref:
        r = t.ref
        if r is None:
            return t
        t = r
    return t


def _unify(a, b, trail) -> bool:
    a = _deref(a)
    b = _deref(b)
    if a is b:
        return True
    ta = type(a)
    if ta is _Ref:
        a.ref = b
        trail.append(a)
        return True
    tb = type(b)
    if tb is _Ref:
        b.ref = a
        trail.append(b)
        return True
    if ta is tuple:
        if tb is not tuple or len(a) != len(b) or a[0] != b[0]:
            return False
        for x, y in zip(a[1:], b[1:]):
            if not _unify(x, y, trail):
                return False
        return True
    return ta is tb and a == b


def _build(t, env):
    tt = type(t)
    if tt is _Slot:
        v = env[t.i]
        if v is None:
            v = env[t.i] = _Ref()
        return v
    if tt is tuple:
        return (t[0], *[_build(x, env) for x in t[1:]])
    return t


def _match_head(t, x, env, trail) -> bool:
    """Unify clause template ``t`` (instantiated through ``env``) with
    runtime term ``x`` without copying the template first."""
    tt = type(t)
    if tt is _Slot:
        cur = env[t.i]
        if cur is None:
            env[t.i] = x
            return True
        return _unify(cur, x, trail)
    x = _deref(x)
    tx = type(x)
    if tx is _Ref:
        x.ref = _build(t, env)
        trail.append(x)
        return True
    if tt is tuple:
        if tx is not tuple or len(x) != len(t) or x[0] != t[0]:
            return False
        for a, b in zip(t[1:], x[1:]):
            if not _match_head(a, b, env, trail):
                return False
        return True
    return tt is tx and t == x


class _CClause:
    __slots__ = ("head", "body", "nvars", "head_bit", "body_bits", "hyp", "ground")

    def __init__(self, clause: Clause, hyp: bool, head_bit: int = 0, body_bits=()):
        slots: dict = {}
        self.head = _compile_atom(clause.head, slots)
        self.body = tuple(_compile_atom(b, slots) for b in clause.body)
        self.nvars = len(slots)
        self.hyp = hyp
        self.head_bit = head_bit
        self.body_bits = tuple(body_bits) or (0,) * len(self.body)
        self.ground = self.nvars == 0


def _index_key(t):
    if type(t) is tuple:
        return (t[0], len(t))
    return t


class KnowledgeBase:
    """Compiled, first-argument-indexed form of a BK program."""

    def __init__(self, program: Program):
        self.program = program
        self.preds: dict = {}
        for c in program.clauses:
            cc = _CClause(c, hyp=False)
            self.preds.setdefault((c.head.predicate, c.head.arity), []).append(cc)
        self._index: dict = {}

    def candidates(self, key, first):
        clauses = self.preds.get(key)
        if not clauses:
            return ()
        if first is None or len(clauses) < 8:
            return clauses
        ik = _index_key(first)
        cache = self._index.get(key)
        if cache is None:
            cache = self._index[key] = {}
        hit = cache.get(ik)
        if hit is None:
            hit = []
            for c in clauses:
                a = c.head[1] if len(c.head) > 1 else None
                if type(a) is _Slot or _index_key(a) == ik:
                    hit.append(c)
            cache[ik] = hit
        return hit


_KB_CACHE: dict = {}


def knowledge_base(bk: Program) -> KnowledgeBase:
    entry = _KB_CACHE.get(id(bk))
    if entry is None or entry.program is not bk:
        entry = KnowledgeBase(bk)
        if len(_KB_CACHE) > 64:
            _KB_CACHE.clear()
        _KB_CACHE[id(bk)] = entry
    return entry


def literal_bits(hyp: Program) -> list[LiteralRef]:
    """Bit position -> literal reference for ``hyp``."""
    refs = []
    for ci, c in enumerate(hyp.clauses):
        for li in range(len(c.body) + 1):
            refs.append(LiteralRef(ci, li))
    return refs


_HYP_CACHE: dict = {}


def _compiled_hyp(hyp: Program) -> dict:
    entry = _HYP_CACHE.get(id(hyp))
    if entry is None or entry[0] is not hyp:
        if len(_HYP_CACHE) > 256:
            _HYP_CACHE.clear()
        entry = _HYP_CACHE[id(hyp)] = (hyp, _compile_hyp(hyp))
    return entry[1]


def _compile_hyp(hyp: Program) -> dict:
    preds: dict = {}
    bit = 0
    for c in hyp.clauses:
        head_bit = 1 << bit
        body_bits = [1 << (bit + k + 1) for k in range(len(c.body))]
        bit += len(c.body) + 1
        cc = _CClause(c, hyp=True, head_bit=head_bit, body_bits=body_bits)
        preds.setdefault((c.head.predicate, c.head.arity), []).append(cc)
    return preds


def _mask_to_refs(mask: int, refs: list[LiteralRef]) -> frozenset:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(refs[i])
        mask >>= 1
        i += 1
    return frozenset(out)


def prove(bk: Program, hyp: Program, goal: Atom, budget: Budget | None = None,
          trace: bool = False) -> ProofResult:
    """Search the SLD-tree of ``bk ∪ hyp ∪ {¬goal}``.

    Stops at the first success. With ``trace`` the result lists the success
    branch (if any) and every distinct non-success leaf reached before it;
    branches with the same set of used literals are reported once.
    """
    budget = budget or Budget()
    kb = knowledge_base(bk)
    hyp_preds = _compiled_hyp(hyp)
    max_steps = budget.max_resolution_steps
    max_depth = budget.max_depth

    kb_cands = kb.candidates

    def candidates(term):
        key = (term[0], len(term) - 1)
        h = hyp_preds.get(key)
        first = _deref(term[1]) if len(term) > 1 else None
        if type(first) is _Ref:
            first = None
        b = kb_cands(key, first)
        if h:
            return list(b) + h if b else h
        return b

    trail: list = []
    steps = 0
    exhausted = False
    failures: set = set()
    truncated: set = set()
    success_mask = None

    # goal list node: (term, bit, depth, next)
    goals = (to_runtime(goal), 0, 0, None)
    used = 0
    stack: list = []  # choice points: [term, rest, used, depth, cands, idx, mark, children]

    def undo(mark):
        while len(trail) > mark:
            trail.pop().ref = None

    cp = None
    while True:
        if cp is None:
            # expand the node (goals, used)
            if goals is None:
                success_mask = used
                break
            term, bit, depth, rest = goals
            used |= bit
            cp = [term, rest, used, depth, candidates(term), 0, len(trail), 0]
            stack.append(cp)
        term, rest, used0, depth, cands, idx, mark, children = cp
        advanced = False
        stop = False
        n = len(cands)
        while idx < n:
            c = cands[idx]
            idx += 1
            undo(mark)
            env = [None] * c.nvars if c.nvars else None
            head = c.head
            ok = True
            for a, b in zip(head[1:], term[1:]):
                if not _match_head(a, b, env, trail):
                    ok = False
                    break
            if not ok:
                continue
            children += 1
            steps += 1
            new_used = used0 | c.head_bit
            if steps > max_steps:
                exhausted = True
                truncated.add(new_used)
                stop = True
                break
            new_depth = depth + 1 if c.hyp else depth
            if new_depth > max_depth:
                exhausted = True
                truncated.add(new_used)
                continue
            g = rest
            body = c.body
            if body:
                bits = c.body_bits
                for k in range(len(body) - 1, -1, -1):
                    g = (_build(body[k], env), bits[k], new_depth, g)
            cp[5] = idx
            cp[7] = children
            goals = g
            used = new_used
            advanced = True
            break
        if stop:
            break
        if advanced:
            cp = None
            continue
        # alternatives exhausted at this node
        if children == 0 and trace:
            failures.add(used0)
        undo(mark)
        stack.pop()
        if not stack:
            break
        cp = stack[-1]

    undo(0)
    entailed = success_mask is not None
    branches: tuple = ()
    if trace:
        refs = literal_bits(hyp)
        out = []
        for m in sorted(failures):
            out.append(BranchTrace("failure", _mask_to_refs(m, refs)))
        for m in sorted(truncated):
            out.append(BranchTrace("truncated", _mask_to_refs(m, refs)))
        if entailed:
            out.append(BranchTrace("success", _mask_to_refs(success_mask, refs)))
        branches = tuple(out)
    return ProofResult(entailed, exhausted, branches, steps)


def entails(bk: Program, hyp: Program, e: Atom, budget: Budget | None = None) -> bool:
    return prove(bk, hyp, e, budget, trace=False).entailed
