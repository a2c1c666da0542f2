"""θ-subsumption between clauses and subsumption between clausal theories.

``c1`` subsumes ``c2`` when some θ maps the head of ``c1`` onto the head of
``c2`` and every body literal of ``c1`` into the body of ``c2``. Variables of
``c2`` are rigid.
"""
from __future__ import annotations

from functools import lru_cache

from .logic import Atom, Clause, Compound, Program, Variable


def _match(t1, t2, theta: dict) -> dict | None:
    """One-way matching of ``t1`` onto ``t2``; ``theta`` is extended in a copy."""
    if isinstance(t1, Variable):
        bound = theta.get(t1)
        if bound is None:
            theta = dict(theta)
            theta[t1] = t2
            return theta
        return theta if bound == t2 else None
    if isinstance(t1, Compound):
        if not isinstance(t2, Compound) or t1.functor != t2.functor or len(t1.args) != len(t2.args):
            return None
        for a, b in zip(t1.args, t2.args):
            theta = _match(a, b, theta)
            if theta is None:
                return None
        return theta
    return theta if t1 == t2 else None


def _match_atom(a1: Atom, a2: Atom, theta: dict) -> dict | None:
    if a1.predicate != a2.predicate or len(a1.args) != len(a2.args):
        return None
    for x, y in zip(a1.args, a2.args):
        theta = _match(x, y, theta)
        if theta is None:
            return None
    return theta


def body_signatures(c: Clause) -> frozenset:
    return c.body_signatures


def _buckets(c: Clause) -> dict:
    b = c.__dict__.get("_buckets")
    if b is None:
        b = {}
        for lit in dict.fromkeys(c.body):
            b.setdefault(lit.signature, []).append(lit)
        object.__setattr__(c, "_buckets", b)
    return b


def _flat(c: Clause):
    """Function-free view of ``c``: (head args, deduped body, buckets of arg
    tuples by signature), or False when some argument is compound."""
    f = c.__dict__.get("_flat")
    if f is None:
        f = False
        lits = (c.head, *c.body)
        if all(type(a) is not Compound for lit in lits for a in lit.args):
            body = [(lit.signature, lit.args) for lit in dict.fromkeys(c.body)]
            buckets: dict = {}
            for sig, args in body:
                buckets.setdefault(sig, []).append(args)
            f = (c.head.args, body, buckets)
        object.__setattr__(c, "_flat", f)
    return f


def _fmatch(a1: tuple, a2: tuple, theta: dict):
    new = None
    for x, y in zip(a1, a2):
        if type(x) is Variable:
            cur = (theta if new is None else new).get(x)
            if cur is None:
                if new is None:
                    new = dict(theta)
                new[x] = y
            elif cur is not y and cur != y:
                return None
        elif x != y:
            return None
    return theta if new is None else new


def _fsearch(todo: list, buckets: dict, theta: dict) -> bool:
    if not todo:
        return True
    best_i, best_opts = -1, None
    for i, (sig, args) in enumerate(todo):
        opts = []
        for cand in buckets[sig]:
            t = _fmatch(args, cand, theta)
            if t is not None:
                opts.append(t)
        if not opts:
            return False
        if best_opts is None or len(opts) < len(best_opts):
            best_i, best_opts = i, opts
            if len(opts) == 1:
                break
    rest = todo[:best_i] + todo[best_i + 1:]
    for t in best_opts:
        if _fsearch(rest, buckets, t):
            return True
    return False


def clause_subsumes(c1: Clause, c2: Clause) -> bool:
    """Decide ``c1θ ⊆ c2`` by backtracking over body-literal matches."""
    if c1.head.signature != c2.head.signature:
        return False
    if not c1.body_signatures <= c2.body_signatures:
        return False
    f1 = _flat(c1)
    f2 = _flat(c2) if f1 else False
    if f1 and f2:
        theta = _fmatch(f1[0], f2[0], {})
        return theta is not None and _fsearch(f1[1], f2[2], theta)
    theta = _match_atom(c1.head, c2.head, {})
    if theta is None:
        return False
    todo = list(dict.fromkeys(c1.body))
    return _search(todo, _buckets(c2), theta)


def _search(todo: list, buckets: dict, theta: dict) -> bool:
    if not todo:
        return True
    # pick the literal with the fewest matches under the current θ
    best_i, best_opts = -1, None
    for i, lit in enumerate(todo):
        opts = []
        for cand in buckets[lit.signature]:
            t = _match_atom(lit, cand, theta)
            if t is not None:
                opts.append(t)
        if not opts:
            return False
        if best_opts is None or len(opts) < len(best_opts):
            best_i, best_opts = i, opts
            if len(opts) == 1:
                break
    rest = todo[:best_i] + todo[best_i + 1:]
    for t in best_opts:
        if _search(rest, buckets, t):
            return True
    return False


@lru_cache(maxsize=200_000)
def cached_clause_subsumes(c1: Clause, c2: Clause) -> bool:
    return clause_subsumes(c1, c2)


def theory_subsumes(t1: Program, t2: Program) -> bool:
    """``t1 ⪯ t2``: every clause of ``t2`` is subsumed by some clause of ``t1``."""
    return all(any(cached_clause_subsumes(c1, c2) for c1 in t1.clauses) for c2 in t2.clauses)


def is_specialisation(h: Program, p: Program) -> bool:
    """``h`` is a specialisation of ``p`` (``p ⪯ h``)."""
    return theory_subsumes(p, h)


def is_generalisation(h: Program, p: Program) -> bool:
    """``h`` is a generalisation of ``p`` (``h ⪯ p``)."""
    return theory_subsumes(h, p)


def clause_included(cp: Clause, cq: Clause) -> bool:
    """Syntactic inclusion ``cp ⊆ cq`` as literal sets."""
    return cp.head == cq.head and set(cp.body) <= set(cq.body)


def is_subprogram(p: Program, q: Program) -> bool:
    """Whether ``p`` can be obtained from ``q`` by dropping clauses and body
    literals, matching each clause of ``p`` to a distinct clause of ``q``."""
    if not p.clauses:
        return True
    if len(p.clauses) > len(q.clauses):
        return False
    cp, rest_p = p.clauses[0], p.clauses[1:]
    for j, cq in enumerate(q.clauses):
        if clause_included(cp, cq):
            if is_subprogram(Program(rest_p), Program(q.clauses[:j] + q.clauses[j + 1:])):
                return True
    return False
