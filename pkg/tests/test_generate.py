import itertools

import pytest

from lffx.constraints import Constraint, ConstraintStore
from lffx.generate import (DEFAULT_CONSTRAINTS, Declarations, Generator, GeneratorConfig, ShapeLimits,
                           SpaceTooLarge, constraint_name, count_space, is_forward_chained)
from lffx.logic import Atom, Clause, Program, Variable, var_name
from lffx.tasks import gen_robot_task
from oracles import brute_subsumes

from conftest import prog


def _v(i):
    return Variable(var_name(i))


def brute_clauses(head, preds, max_body, max_vars, constraints, modes=None):
    """Every clause with head ``head(A,B,..)`` and 1..max_body distinct body
    literals over at most ``max_vars`` variables, filtered independently."""
    nhead = head[1]
    lits = []
    for p, n in sorted(preds):
        for args in itertools.product(range(max_vars), repeat=n):
            lits.append((p, args))
    out = {}
    for k in range(1, max_body + 1):
        for body in itertools.combinations(lits, k):
            vs = set(range(nhead)) | {v for _, a in body for v in a}
            if len(vs) > max_vars or vs != set(range(len(vs))):
                continue
            if "head_connected" in constraints and not set(range(nhead)) <= {v for _, a in body for v in a}:
                continue
            if modes and not _mode_ok(head, body, modes):
                continue
            if "recursion_progress" in constraints and _stalls(head, body, modes):
                continue
            c = Clause(Atom(head[0], tuple(_v(i) for i in range(nhead))),
                       tuple(Atom(p, tuple(_v(i) for i in a)) for p, a in body))
            out.setdefault(c.key, c)
    return out


def _mode_ok(head, body, modes):
    hm = modes.get(head[0])
    bound0 = {i for i, m in enumerate(hm) if m == "in"} if hm else set(range(head[1]))
    for order in itertools.permutations(body):
        bound = set(bound0)
        ok = True
        for p, a in order:
            m = modes.get(p)
            if m and any(mm == "in" and v not in bound for mm, v in zip(m, a)):
                ok = False
                break
            bound |= set(a)
        if ok:
            return True
    return False


def _stalls(head, body, modes):
    hm = modes.get(head[0]) if modes else None
    ins = [i for i in range(head[1]) if hm is None or hm[i] == "in"]
    return any(p == head[0] and all(a[i] == i for i in ins) for p, a in body)


def brute_programs(clauses, max_clauses, constraints):
    cs = list(clauses.values())
    out = set()
    for k in range(1, max_clauses + 1):
        for combo in itertools.combinations(cs, k):
            p = Program(combo)
            if "recursion_needs_base" in constraints:
                rec = [c.is_recursive() for c in combo]
                if any(rec) and all(rec):
                    continue
            if "no_redundant_clause" in constraints and any(
                    brute_subsumes(a, b) for a, b in itertools.permutations(combo, 2)):
                continue
            out.add(p.canonical_key)
    return out


CASES = [
    (("f", 2), {("p", 2), ("q", 1)}, 1, 3, 3, frozenset({"head_connected", "no_duplicate_literal"}), None),
    (("f", 2), {("p", 2), ("q", 1), ("f", 2)}, 2, 2, 3, DEFAULT_CONSTRAINTS, None),
    (("f", 2), {("p", 2), ("f", 2)}, 2, 3, 3, DEFAULT_CONSTRAINTS,
     {"f": ("in", "out"), "p": ("in", "out")}),
    (("g", 1), {("p", 2), ("q", 1)}, 2, 2, 3, frozenset({"no_duplicate_literal"}), None),
]


@pytest.mark.parametrize("head,preds,mc,mb,mv,cons,modes", CASES)
def test_completeness_against_brute_force(head, preds, mc, mb, mv, cons, modes):
    decl = Declarations(head, frozenset(preds), modes or {})
    gen = Generator(GeneratorConfig(decl, ShapeLimits(mc, mb, mv), cons))
    got = [p.canonical_key for p in gen.all_programs()]
    assert len(got) == len(set(got)), "a program was yielded twice"
    want = brute_programs(brute_clauses(head, preds, mb, mv, cons, modes), mc, cons)
    assert len(want) <= 10_000
    assert set(got) == want


def test_order_is_by_size_then_key():
    decl = Declarations(("f", 2), frozenset({("p", 2), ("q", 1)}))
    progs = list(Generator(GeneratorConfig(decl, ShapeLimits(2, 2, 3))).all_programs())
    keys = [(p.size, p.canonical_key) for p in progs]
    assert keys == sorted(keys)


def test_pool_order_and_pruning(appendix, pool):
    g = Generator(appendix.bias)
    assert g.next().canonical_key == pool["h1"].canonical_key
    s = ConstraintStore()
    s.add(Constraint("specialisation", pool["h1"]))
    s.add(Constraint("specialisation", prog("droplast(A,B):-empty(A).")))
    assert g.next(s).canonical_key == pool["h3"].canonical_key


def test_pool_rejects_duplicates(pool):
    with pytest.raises(ValueError):
        GeneratorConfig.from_pool([pool["h1"], prog("droplast(X,Y):-tail(X,Y),empty(X).")])


def test_forward_chained_two_moves():
    decl = Declarations(("f", 2), frozenset({("move_right", 2)}))
    cfg = GeneratorConfig(decl, ShapeLimits(1, 2, 3), frozenset({"head_connected", "forward_chained"}))
    progs = [str(p) for p in Generator(cfg).all_programs()]
    assert progs == ["f(A,B):- move_right(A,B).", "f(A,B):- move_right(A,C),move_right(C,B)."]


def test_robot_count_closed_form():
    cfg = gen_robot_task(3).bias
    small = GeneratorConfig(cfg.declarations, ShapeLimits(1, 5, 6), cfg.constraints)
    assert count_space(small) == 4 + 16 + 64 + 256 + 1024
    with pytest.raises(SpaceTooLarge):
        count_space(small, ceiling=100)


def test_single_literal_space():
    decl = Declarations(("f", 1), frozenset({("q", 2)}))
    cfg = GeneratorConfig(decl, ShapeLimits(1, 1, 2))
    # f(A):-q(A,A). f(A):-q(A,B). f(A):-q(B,A).
    assert count_space(cfg) == 3


def test_pool_count(appendix):
    assert count_space(appendix.bias) == 7


def test_forward_chained_check():
    assert is_forward_chained(prog("f(A,B):-m(A,C),m(C,B).").clauses[0])
    assert not is_forward_chained(prog("f(A,B):-m(A,C),m(A,B).").clauses[0])
    assert not is_forward_chained(prog("f(A,B):-m(C,B).").clauses[0])


def test_constraint_names():
    assert constraint_name("head-connected") == "head_connected"
    with pytest.raises(ValueError):
        constraint_name("made_up")
    with pytest.raises(ValueError):
        ShapeLimits(0, 1, 1)


def test_generator_skips_pruned_and_counts():
    decl = Declarations(("f", 2), frozenset({("p", 2), ("q", 1)}))
    cfg = GeneratorConfig(decl, ShapeLimits(1, 2, 3))
    s = ConstraintStore()
    s.add(Constraint("specialisation", prog("f(A,B):-p(A,B).")))
    g = Generator(cfg)
    seen = []
    while (p := g.next(s)) is not None:
        seen.append(p)
        assert not s.is_pruned(p)
    assert g.generated == len(seen)
    assert len(seen) < count_space(cfg)
