"""Terms, atoms, clauses and programs, plus unification and canonical keys.

All values are immutable. Variables are clause-scoped: two clauses that both
mention ``A`` do not share a variable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Union


@dataclass(frozen=True)
class Variable:
    name: str

    def __hash__(self) -> int:
        return hash(self.name)

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Constant:
    value: Union[str, int]

    def __hash__(self) -> int:
        return hash(self.value)

    def __str__(self) -> str:
        return render_term(self)


@dataclass(frozen=True)
class Compound:
    functor: str
    args: tuple

    def __post_init__(self):
        if not self.args:
            raise ValueError(f"compound {self.functor} needs at least one argument; use Constant")

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.functor, self.args))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return render_term(self)


Term = Union[Variable, Constant, Compound]

NIL = Constant("nil")


@dataclass(frozen=True)
class Atom:
    predicate: str
    args: tuple = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @cached_property
    def signature(self) -> tuple[str, int]:
        return (self.predicate, len(self.args))

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.predicate, self.args))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return render_atom(self)


@dataclass(frozen=True)
class Clause:
    head: Atom
    body: tuple = ()

    def __str__(self) -> str:
        return render_clause(self)

    @property
    def size(self) -> int:
        return 1 + len(self.body)

    def is_recursive(self) -> bool:
        return any(lit.signature == self.head.signature for lit in self.body)

    def variables(self) -> list[Variable]:
        out: dict[Variable, None] = {}
        for lit in (self.head, *self.body):
            for v in atom_variables(lit):
                out.setdefault(v)
        return list(out)

    @cached_property
    def key(self) -> str:
        return clause_key(self)

    @cached_property
    def body_signatures(self) -> frozenset:
        return frozenset(b.signature for b in self.body)

    def __hash__(self) -> int:
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.head, self.body))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class Program:
    clauses: tuple = ()

    def __post_init__(self):
        if not isinstance(self.clauses, tuple):
            object.__setattr__(self, "clauses", tuple(self.clauses))

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __bool__(self) -> bool:
        return bool(self.clauses)

    def __str__(self) -> str:
        return render_program(self)

    @property
    def size(self) -> int:
        """Total number of literals, heads included."""
        return sum(c.size for c in self.clauses)

    def is_recursive(self) -> bool:
        heads = {c.head.signature for c in self.clauses}
        return any(lit.signature in heads for c in self.clauses for lit in c.body)

    @cached_property
    def canonical_key(self) -> str:
        return " ".join(sorted(c.key for c in self.clauses))

    def __hash__(self) -> int:
        return hash(self.clauses)


Substitution = dict  # Variable -> Term


# ---------------------------------------------------------------------------
# construction helpers

def term_from_python(x) -> Term:
    """Build a term from ints, strings (atoms) and lists."""
    if isinstance(x, (Variable, Constant, Compound)):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not terms")
    if isinstance(x, (int, str)):
        return Constant(x)
    if isinstance(x, list):
        return make_list([term_from_python(e) for e in x])
    if isinstance(x, tuple):
        return Compound(",", tuple(term_from_python(e) for e in x))
    raise TypeError(f"cannot convert {x!r} to a term")


def make_list(items: Iterable[Term], tail: Term = NIL) -> Term:
    out = tail
    for item in reversed(list(items)):
        out = Compound("cons", (item, out))
    return out


def atom(pred: str, *args) -> Atom:
    return Atom(pred, tuple(term_from_python(a) for a in args))


# ---------------------------------------------------------------------------
# variables and substitution

def term_variables(t: Term) -> Iterator[Variable]:
    if isinstance(t, Variable):
        yield t
    elif isinstance(t, Compound):
        for a in t.args:
            yield from term_variables(a)


def atom_variables(a: Atom) -> Iterator[Variable]:
    for t in a.args:
        yield from term_variables(t)


def is_ground(x) -> bool:
    if isinstance(x, Atom):
        return not any(True for _ in atom_variables(x))
    return not any(True for _ in term_variables(x))


def apply(s: Substitution, x):
    """Apply ``s`` in a single pass: bound variables are replaced, the
    replacement itself is not walked again."""
    if not s:
        return x
    if isinstance(x, Variable):
        return s.get(x, x)
    if isinstance(x, Constant):
        return x
    if isinstance(x, Compound):
        return Compound(x.functor, tuple(apply(s, a) for a in x.args))
    if isinstance(x, Atom):
        return Atom(x.predicate, tuple(apply(s, a) for a in x.args))
    if isinstance(x, Clause):
        return Clause(apply(s, x.head), tuple(apply(s, b) for b in x.body))
    if isinstance(x, Program):
        return Program(tuple(apply(s, c) for c in x.clauses))
    raise TypeError(f"cannot apply a substitution to {type(x).__name__}")


def _walk(t: Term, s: dict) -> Term:
    while isinstance(t, Variable) and t in s:
        t = s[t]
    return t


class CyclicBinding(ValueError):
    """Unification succeeded only by binding a variable to a term that
    contains it (no occurs check); the solved form has no finite term."""


def _resolve(t: Term, s: dict, active: frozenset = frozenset()) -> Term:
    while isinstance(t, Variable) and t in s:
        if t in active:
            raise CyclicBinding(f"cyclic binding through {t}")
        active = active | {t}
        t = s[t]
    if isinstance(t, Compound):
        return Compound(t.functor, tuple(_resolve(a, s, active) for a in t.args))
    return t


def unify_terms(a: Term, b: Term, s: dict | None = None) -> dict | None:
    """Robinson unification without occurs check; returns a triangular
    substitution extending ``s`` or None."""
    s = dict(s) if s else {}
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, s), _walk(y, s)
        if x == y:
            continue
        if isinstance(x, Variable):
            s[x] = y
        elif isinstance(y, Variable):
            s[y] = x
        elif isinstance(x, Compound) and isinstance(y, Compound):
            if x.functor != y.functor or len(x.args) != len(y.args):
                return None
            stack.extend(reversed(list(zip(x.args, y.args))))
        else:
            return None
    return s


def unify(a: Atom, b: Atom) -> Substitution | None:
    """Most general unifier of two atoms, fully resolved so that one pass of
    :func:`apply` makes both atoms identical. Raises :class:`CyclicBinding`
    when the only unifier is infinite."""
    if a.signature != b.signature:
        return None
    s: dict | None = {}
    for x, y in zip(a.args, b.args):
        s = unify_terms(x, y, s)
        if s is None:
            return None
    out = {}
    for v, t in s.items():
        r = _resolve(t, s, frozenset((v,)))
        if r != v:
            out[v] = r
    return out


# ---------------------------------------------------------------------------
# rendering

_PLAIN_ATOM = re.compile(r"^[a-z][A-Za-z0-9_]*$")


def _quote(name: str) -> str:
    if _PLAIN_ATOM.match(name) or name == "[]":
        return name
    return "'" + name.replace("\\", "\\\\").replace("'", "\\'") + "'"


def render_term(t: Term) -> str:
    if isinstance(t, Variable):
        return t.name
    if isinstance(t, Constant):
        if isinstance(t.value, int):
            return str(t.value)
        if t.value == "nil":
            return "[]"
        return _quote(t.value)
    if t.functor == "cons" and len(t.args) == 2:
        items = []
        cur: Term = t
        while isinstance(cur, Compound) and cur.functor == "cons" and len(cur.args) == 2:
            items.append(render_term(cur.args[0]))
            cur = cur.args[1]
        if cur == NIL:
            return "[" + ",".join(items) + "]"
        return "[" + ",".join(items) + "|" + render_term(cur) + "]"
    if t.functor == ",":
        return "(" + ",".join(render_term(a) for a in t.args) + ")"
    return _quote(t.functor) + "(" + ",".join(render_term(a) for a in t.args) + ")"


def render_atom(a: Atom) -> str:
    if not a.args:
        return _quote(a.predicate)
    return _quote(a.predicate) + "(" + ",".join(render_term(x) for x in a.args) + ")"


def render_clause(c: Clause) -> str:
    if not c.body:
        return render_atom(c.head) + "."
    return render_atom(c.head) + ":- " + ",".join(render_atom(b) for b in c.body) + "."


def render_program(p: Program) -> str:
    return "\n".join(render_clause(c) for c in p.clauses)


# ---------------------------------------------------------------------------
# canonical keys

def var_name(i: int) -> str:
    return chr(ord("A") + i) if i < 26 else f"V{i}"


def _render_named(t: Term, names: dict, out: list) -> None:
    if isinstance(t, Variable):
        n = names.get(t)
        if n is None:
            n = names[t] = var_name(len(names))
        out.append(n)
    elif isinstance(t, Constant):
        out.append(render_term(t))
    else:
        out.append(_quote(t.functor))
        out.append("(")
        for i, a in enumerate(t.args):
            if i:
                out.append(",")
            _render_named(a, names, out)
        out.append(")")


def _literal_string(lit: Atom, names: dict) -> str:
    out = [_quote(lit.predicate)]
    if lit.args:
        out.append("(")
        for i, a in enumerate(lit.args):
            if i:
                out.append(",")
            _render_named(a, names, out)
        out.append(")")
    return "".join(out)


def canonical_clause(c: Clause) -> Clause:
    """The representative of ``c``'s α/body-order class: body ordered to give
    the lexicographically least rendering, variables renamed A, B, ... by
    first occurrence."""
    names: dict = {}
    _literal_string(c.head, names)
    body = list(c.body)
    best: list | None = None
    best_order: list | None = None

    def search(remaining: list[int], names: dict, acc: list[str], order: list[int]):
        nonlocal best, best_order
        if not remaining:
            if best is None or acc < best:
                best, best_order = list(acc), list(order)
            return
        options = []
        for i in remaining:
            n2 = dict(names)
            options.append((_literal_string(body[i], n2), i, n2))
        low = min(o[0] for o in options)
        if best is not None:
            # prune when the prefix is already worse than the best full answer
            pos = len(acc)
            if acc + [low] > best[: pos + 1]:
                return
        seen = set()
        for s, i, n2 in options:
            if s != low:
                continue
            # literals identical up to renaming within the same naming state
            # lead to the same continuation only if they are the same literal
            if body[i] in seen:
                continue
            seen.add(body[i])
            search([j for j in remaining if j != i], n2, acc + [s], order + [i])

    search(list(range(len(body))), names, [], [])
    order = best_order or []
    new_body = [body[i] for i in order]
    # rename by first occurrence
    ren: dict = {}
    for lit in (c.head, *new_body):
        for v in atom_variables(lit):
            if v not in ren:
                ren[v] = Variable(var_name(len(ren)))
    return Clause(apply(ren, c.head), tuple(apply(ren, b) for b in new_body))


def clause_key(c: Clause) -> str:
    cc = canonical_clause(c)
    names: dict = {}
    head = _literal_string(cc.head, names)
    if not cc.body:
        return head + "."
    return head + ":-" + ",".join(_literal_string(b, names) for b in cc.body) + "."


def canonicalize(p: Program) -> Program:
    """Canonical representative of ``p``: canonical clauses sorted by key.
    The result's ``canonical_key`` equals the input's."""
    cs = sorted((canonical_clause(c) for c in p.clauses), key=lambda c: c.key)
    return Program(tuple(cs))
