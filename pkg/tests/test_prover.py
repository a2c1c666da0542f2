import pytest
from hypothesis import given, settings, strategies as st

from lffx.logic import Program, atom
from lffx.prover import Budget, LiteralRef, prove, entails

from conftest import ex, prog

H1 = "droplast(A,B):- empty(A),tail(A,B)."
H2 = "droplast(A,B):- tail(A,C),tail(C,B). droplast(A,B):- tail(A,B)."
H6 = "droplast(A,B):-tail(A,B),empty(B). droplast(A,B):-cons(C,D,A),droplast(D,E),cons(C,E,B)."


def test_incorrect_answer_success_branch(list_bk):
    r = prove(list_bk, prog(H2), ex("droplast([1,2],[])"), trace=True)
    assert r.entailed
    (s,) = r.successes
    assert s.used == frozenset(LiteralRef(0, i) for i in range(3))


def test_missing_answer_single_failing_branch(list_bk):
    r = prove(list_bk, prog(H1), ex("droplast([1,2],[1])"), trace=True)
    assert not r.entailed and not r.exhausted
    (f,) = r.branches
    assert f.outcome == "failure"
    assert f.used == {LiteralRef(0, 0), LiteralRef(0, 1)}


def test_empty_hypothesis(list_bk):
    r = prove(list_bk, Program(()), ex("droplast([1],[])"), trace=True)
    assert not r.entailed
    assert all(not b.used for b in r.branches) and len(r.branches) <= 1


def test_entails_examples(list_bk):
    assert entails(list_bk, prog(H2), ex("droplast([1,2],[])"))
    assert not entails(list_bk, prog(H1), ex("droplast([1,2,3],[1,2])"))
    assert entails(list_bk, prog(H6), ex("droplast([1,2],[1])"))
    assert entails(list_bk, prog(H6), ex("droplast([1,2,3],[1,2])"))


def test_bk_only_goal(list_bk):
    assert entails(list_bk, Program(()), ex("tail([1,2],[2])"))


def test_budget_exhaustion_marks_truncated(list_bk):
    loop = prog("f(A):-g(A). g(A):-f(A).")
    r = prove(list_bk, loop, ex("f(1)"), Budget(1000, 5), trace=True)
    assert not r.entailed and r.exhausted
    assert any(b.outcome == "truncated" for b in r.branches)
    r = prove(list_bk, loop, ex("f(1)"), Budget(50, 1000), trace=True)
    assert r.exhausted and r.steps <= 51


def test_budget_validation():
    with pytest.raises(ValueError):
        Budget(0, 1)
    with pytest.raises(ValueError):
        Budget(10, 0)


def test_heads_always_used_with_body(list_bk):
    r = prove(list_bk, prog(H6), ex("droplast([1,2,3],[2])"), trace=True)
    for b in r.branches:
        for ref in b.used:
            assert LiteralRef(ref.clause_index, 0) in b.used


lists = st.lists(st.integers(1, 4), max_size=5)


@settings(max_examples=60, deadline=None)
@given(lists, lists)
def test_trace_soundness_and_flag_invariance(xs, ys):
    from lffx.explain import lambda_subprogram
    from conftest import LIST_BK
    bk = prog(LIST_BK)
    h = prog(H6)
    goal = atom("droplast", xs, ys)
    traced = prove(bk, h, goal, trace=True)
    plain = prove(bk, h, goal)
    assert traced.entailed == plain.entailed == (bool(xs) and ys == xs[:-1])
    assert plain.branches == ()
    for s in traced.successes:
        assert entails(bk, lambda_subprogram(h, s), goal)


@settings(max_examples=40, deadline=None)
@given(lists, st.integers(1, 400))
def test_monotone_budget_and_determinism(xs, steps):
    from conftest import LIST_BK
    bk = prog(LIST_BK)
    h = prog(H6)
    goal = atom("droplast", xs, xs[:-1]) if xs else atom("droplast", [1], [])
    small = prove(bk, h, goal, Budget(steps, 30), trace=True)
    assert small == prove(bk, h, goal, Budget(steps, 30), trace=True)
    if small.entailed:
        assert prove(bk, h, goal, Budget(steps * 3, 30)).entailed
