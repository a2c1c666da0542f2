import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from lffx.logic import (NIL, Atom, Clause, Compound, Constant, CyclicBinding, Program, Variable, apply,
                        atom, canonicalize, make_list, unify)
from lffx.parse import ParseError, parse_atom, parse_clause, parse_program, parse_term

A, B, C, D, X, Y, H, T = (Variable(n) for n in "ABCDXYHT")
a, b, c = Constant("a"), Constant("b"), Constant("c")


def test_unify_textbook():
    assert unify(Atom("p", (A, b)), Atom("p", (a, B))) == {A: a, B: b}


def test_unify_predicate_mismatch():
    assert unify(Atom("p", (A,)), Atom("q", (A,))) is None


def test_unify_hand_robinson():
    # worked by hand: H=X, T=nil, then Y bound to the list [1]
    one = make_list([Constant(1)])
    s = unify(Atom("cons", (H, T, one)), Atom("cons", (X, NIL, Y)))
    assert s == {H: X, T: NIL, Y: one}


def test_unify_clash_inside_compound():
    f = lambda *xs: Compound("f", xs)
    assert unify(Atom("p", (f(A, a),)), Atom("p", (f(b, b),))) is None


def test_apply_examples():
    assert apply({A: a}, Atom("p", (A, B))) == Atom("p", (a, B))
    assert apply({}, Atom("p", (A,))) == Atom("p", (A,))
    fb = Compound("f", (B,))
    # one pass: the image of A is not rewritten again
    assert apply({A: fb, B: c}, Atom("p", (A, B))) == Atom("p", (fb, c))


# brute force: every substitution over {a,b,c} for the variables involved
def _terms(depth):
    base = [A, B, C, a, b]
    if depth == 0:
        return st.sampled_from(base)
    return st.one_of(st.sampled_from(base),
                     st.builds(lambda x, y: Compound("f", (x, y)), _terms(depth - 1), _terms(depth - 1)))


def _vars(x):
    out = set()
    def walk(t):
        if isinstance(t, Variable):
            out.add(t)
        elif isinstance(t, Compound):
            for s in t.args:
                walk(s)
    for t in x.args:
        walk(t)
    return out


@settings(max_examples=150, deadline=None)
@given(st.lists(_terms(1), min_size=2, max_size=2), st.lists(_terms(1), min_size=2, max_size=2))
def test_mgu_against_ground_enumeration(xs, ys):
    p, q = Atom("p", tuple(xs)), Atom("p", tuple(ys))
    vs = sorted(_vars(p) | _vars(q), key=lambda v: v.name)
    ground_unifiers = []
    for vals in itertools.product([a, b, c], repeat=len(vs)):
        g = dict(zip(vs, vals))
        if apply(g, p) == apply(g, q):
            ground_unifiers.append(g)
    try:
        s = unify(p, q)
    except CyclicBinding:
        # no occurs check: a cyclic solved form has no finite instance
        assert not ground_unifiers
        return
    if s is None:
        assert not ground_unifiers
        return
    assert apply(s, p) == apply(s, q)
    # every ground unifier factors through the mgu
    for g in ground_unifiers:
        assert apply(g, apply(s, p)) == apply(g, p)
        assert apply(g, apply(s, q)) == apply(g, q)


def test_unify_without_occurs_check_reports_cycle():
    f = Compound("f", (A,))
    with pytest.raises(CyclicBinding):
        unify(Atom("p", (A,)), Atom("p", (f,)))


def test_canonical_renaming_and_order():
    k = lambda t: Program((parse_clause(t),)).canonical_key
    assert k("f(A):-q(A).") == k("f(X):-q(X).")
    assert k("f(A):-q(A),r(A).") == k("f(A):-r(A),q(A).")
    assert k("f(A):-q(A,B).") != k("f(A):-q(B,A).")


def _random_clause(rng):
    preds = [("q", 1), ("r", 2), ("s", 2)]
    nv = rng.randint(1, 4)
    vs = [Variable(f"V{i}") for i in range(nv)]
    body = []
    for _ in range(rng.randint(0, 3)):
        p, ar = rng.choice(preds)
        body.append(Atom(p, tuple(rng.choice(vs) for _ in range(ar))))
    return Clause(Atom("f", (vs[0], rng.choice(vs))), tuple(body))


def _scramble(c, rng):
    vs = c.variables()
    names = [Variable(f"Z{i}") for i in range(len(vs))]
    rng.shuffle(names)
    body = list(c.body)
    rng.shuffle(body)
    return apply(dict(zip(vs, names)), Clause(c.head, tuple(body)))


def _equivalent(c1, c2):
    """Brute force: some body permutation and variable bijection maps c1 to c2."""
    if len(c1.body) != len(c2.body):
        return False
    v1, v2 = c1.variables(), c2.variables()
    if len(v1) != len(v2):
        return False
    for perm in itertools.permutations(v2):
        s = dict(zip(v1, perm))
        r = apply(s, c1)
        if r.head != c2.head:
            continue
        for order in itertools.permutations(r.body):
            if order == c2.body:
                return True
    return False


def test_canonical_key_matches_brute_force():
    rng = random.Random(7)
    clauses = [_random_clause(rng) for _ in range(50)]
    clauses += [_scramble(c, rng) for c in clauses]
    assert len(clauses) == 100
    for c1, c2 in itertools.combinations(clauses, 2):
        same = Program((c1,)).canonical_key == Program((c2,)).canonical_key
        assert same == _equivalent(c1, c2), (c1, c2)


def test_canonicalize_keeps_key():
    p = parse_program("f(X):-r(X,Y),q(Y). f(X):-q(X).")
    cp = canonicalize(p)
    assert cp.canonical_key == p.canonical_key
    assert canonicalize(cp) == cp


def test_program_size_counts_heads():
    p = parse_program("droplast(A,B):-tail(A,C),tail(C,B). droplast(A,B):-tail(A,B).")
    assert p.size == 5
    assert not p.is_recursive()


def test_parse_examples():
    c = parse_clause("droplast(A,B):- empty(A),tail(A,B).")
    assert c.head.signature == ("droplast", 2)
    assert [l.signature for l in c.body] == [("empty", 1), ("tail", 2)]
    f = parse_clause("f(A).")
    assert f.body == ()
    with pytest.raises(ParseError):
        parse_program("p(A):- q(A,).")


def test_parse_lists_and_render_roundtrip():
    e = parse_atom("droplast([1,2,3],[1,2])")
    assert e == atom("droplast", [1, 2, 3], [1, 2])
    t = parse_term("[H|T]")
    assert t == Compound("cons", (H, T))
    text = str(parse_clause("p(A,[1,2|T]) :- q(A, 'X y')."))
    assert parse_clause(text) == parse_clause("p(A,[1,2|T]) :- q(A, 'X y').")


def test_parse_arity_conflict():
    with pytest.raises(ParseError):
        parse_program("p(A) :- q(A). p(A,B) :- q(B).")
    assert len(parse_program("p(A) :- q(A). p(A,B) :- q(B).", check_arity=False).clauses) == 2
