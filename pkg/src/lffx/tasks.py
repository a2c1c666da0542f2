"""Task bundles: loading from disk and the built-in benchmark generators.

A task directory holds ``bias.pl`` (directives), ``bk.pl`` (background
program) and ``exs.pl`` (``pos(...)``/``neg(...)`` facts). An optional
``pool.pl`` switches the generator to an explicit list of programs, each
introduced by a ``hypothesis(Name).`` marker.
"""
from __future__ import annotations

import random
from importlib import resources
from pathlib import Path

from .generate import DEFAULT_CONSTRAINTS, Declarations, GeneratorConfig, ShapeLimits, constraint_name
from .learner import InvalidTask, TaskBundle
from .logic import Atom, Clause, Compound, Constant, Program, atom, make_list, render_clause, render_term
from .parse import parse_clauses
from .prover import Budget

TaskError = InvalidTask

BIAS_DIRECTIVES = {"head_pred", "body_pred", "max_clauses", "max_body", "max_vars",
                   "constraint", "direction", "type"}


def _tuple_args(t) -> tuple:
    if isinstance(t, Compound) and t.functor == ",":
        return tuple(_name(a) for a in t.args)
    return (_name(t),)


def _name(t):
    if not isinstance(t, Constant):
        raise InvalidTask(f"expected a constant, got {render_term(t)}")
    return t.value


def _int(t) -> int:
    v = _name(t)
    if not isinstance(v, int):
        raise InvalidTask(f"expected an integer, got {v!r}")
    return v


def parse_bias(text: str, pool: list[Program] | None = None) -> GeneratorConfig:
    head = None
    body = set()
    limits = {}
    constraints = set()
    modes: dict = {}
    types: dict = {}
    for c in parse_clauses(text, check_arity=False):
        if c.body:
            raise InvalidTask(f"bias directives must be facts: {render_clause(c)}")
        d = c.head
        if d.predicate not in BIAS_DIRECTIVES:
            raise InvalidTask(f"unknown bias directive {d.predicate}/{d.arity}")
        a = d.args
        if d.predicate in ("head_pred", "body_pred"):
            sig = (_name(a[0]), _int(a[1]))
            if d.predicate == "head_pred":
                if head is not None and head != sig:
                    raise InvalidTask("only one head_pred is supported")
                head = sig
            else:
                body.add(sig)
        elif d.predicate == "max_clauses":
            limits["max_clauses"] = _int(a[0])
        elif d.predicate == "max_body":
            limits["max_body_literals"] = _int(a[0])
        elif d.predicate == "max_vars":
            limits["max_vars"] = _int(a[0])
        elif d.predicate == "constraint":
            try:
                constraints.add(constraint_name(str(_name(a[0]))))
            except ValueError as exc:
                raise InvalidTask(str(exc)) from None
        elif d.predicate == "direction":
            ms = _tuple_args(a[1])
            if any(m not in ("in", "out") for m in ms):
                raise InvalidTask(f"direction must use in/out: {render_clause(c)}")
            modes[_name(a[0])] = ms
        else:
            types[_name(a[0])] = _tuple_args(a[1])
    if pool is not None:
        return GeneratorConfig.from_pool(pool)
    if head is None:
        raise InvalidTask("bias has no head_pred")
    for sig in [head, *body]:
        for table, what in ((modes, "direction"), (types, "type")):
            if sig[0] in table and len(table[sig[0]]) != sig[1]:
                raise InvalidTask(f"{what} of {sig[0]} does not match arity {sig[1]}")
    return GeneratorConfig(
        declarations=Declarations(head, frozenset(body), modes, types),
        limits=ShapeLimits(**limits),
        constraints=frozenset(constraints) | DEFAULT_CONSTRAINTS if constraints else DEFAULT_CONSTRAINTS,
    )


def parse_pool(text: str) -> list[Program]:
    programs: list[list[Clause]] = []
    for c in parse_clauses(text, check_arity=False):
        if c.head.predicate == "hypothesis" and not c.body:
            programs.append([])
            continue
        if not programs:
            raise InvalidTask("pool clause before the first hypothesis/1 marker")
        programs[-1].append(c)
    return [Program(tuple(cs)) for cs in programs if cs]


def parse_examples(text: str) -> tuple[list[Atom], list[Atom]]:
    pos, neg = [], []
    for c in parse_clauses(text, check_arity=False):
        h = c.head
        if c.body or h.predicate not in ("pos", "neg") or h.arity != 1:
            raise InvalidTask(f"examples must be pos/1 or neg/1 facts: {render_clause(c)}")
        t = h.args[0]
        if isinstance(t, Compound):
            e = Atom(t.functor, t.args)
        elif isinstance(t, Constant) and isinstance(t.value, str):
            e = Atom(t.value, ())
        else:
            raise InvalidTask(f"bad example {render_term(t)}")
        (pos if h.predicate == "pos" else neg).append(e)
    return pos, neg


def load_task(path) -> TaskBundle:
    d = Path(path)
    if not d.is_dir():
        raise FileNotFoundError(f"task directory not found: {d}")
    texts = {}
    for name in ("bias.pl", "bk.pl", "exs.pl"):
        f = d / name
        if not f.is_file():
            raise FileNotFoundError(f"missing {name} in {d}")
        texts[name] = f.read_text()
    pool = parse_pool((d / "pool.pl").read_text()) if (d / "pool.pl").is_file() else None
    bias = parse_bias(texts["bias.pl"], pool)
    bk = Program(tuple(parse_clauses(texts["bk.pl"], check_arity=False)))
    pos, neg = parse_examples(texts["exs.pl"])
    task = TaskBundle(d.name, bias, bk, pos, neg)
    head = _declared_head(texts["bias.pl"])
    if head is not None:
        for e in pos + neg:
            if e.signature != head:
                raise InvalidTask(f"example {e} does not match head_pred {head[0]}/{head[1]}")
    task.validate()
    return task


def _declared_head(text: str):
    for c in parse_clauses(text, check_arity=False):
        if c.head.predicate == "head_pred":
            return (_name(c.head.args[0]), _int(c.head.args[1]))
    return None


def bundled_task_dir(name: str) -> Path:
    p = Path(str(resources.files("lffx") / "data" / name))
    if not p.is_dir():
        raise FileNotFoundError(f"no bundled task named {name!r}")
    return p


def appendix_task() -> TaskBundle:
    return load_task(bundled_task_dir("droplast-appendix"))


def write_task(task: TaskBundle, path) -> Path:
    """Write ``task`` as a loadable directory (enumerative bias only)."""
    d = Path(path)
    d.mkdir(parents=True, exist_ok=True)
    cfg = task.bias
    lines = []
    if cfg.pool is not None:
        raise ValueError("pool-mode tasks are written by hand")
    decl = cfg.declarations
    lines.append(f"head_pred({decl.head[0]},{decl.head[1]}).")
    for p, a in sorted(decl.body):
        lines.append(f"body_pred({p},{a}).")
    lim = cfg.limits
    lines += [f"max_clauses({lim.max_clauses}).", f"max_body({lim.max_body_literals}).",
              f"max_vars({lim.max_vars})."]
    for c in sorted(cfg.constraints):
        lines.append(f"constraint({c}).")
    for p, ms in sorted(decl.modes.items()):
        lines.append(f"direction({p},({','.join(ms)})).")
    for p, ts in sorted(decl.types.items()):
        lines.append(f"type({p},({','.join(ts)})).")
    (d / "bias.pl").write_text("\n".join(lines) + "\n")
    (d / "bk.pl").write_text("\n".join(render_clause(c) for c in task.bk.clauses) + "\n")
    exs = [f"pos({e})." for e in task.positives] + [f"neg({e})." for e in task.negatives]
    (d / "exs.pl").write_text("\n".join(exs) + "\n")
    return d


# ---------------------------------------------------------------------------
# robot corridor

CORRIDOR = 10


def _state(x: int, y: int = 0):
    return Compound(",", (Constant(x), Constant(y)))


def gen_robot_task(n: int) -> TaskBundle:
    """Move from (0,0) to (n,0) along a one-row corridor with x in 0..10."""
    if not 1 <= n <= CORRIDOR:
        raise InvalidTask(f"corridor length must be in 1..{CORRIDOR}, got {n}")
    facts = []
    for x in range(CORRIDOR):
        facts.append(Clause(atom("move_right", _state(x), _state(x + 1))))
    for x in range(1, CORRIDOR + 1):
        facts.append(Clause(atom("move_left", _state(x), _state(x - 1))))
    # move_up and move_down have no instances on a single row
    decls = Declarations(("f", 2), frozenset({("move_right", 2), ("move_left", 2),
                                              ("move_up", 2), ("move_down", 2)}))
    bias = GeneratorConfig(decls, ShapeLimits(1, 10, 11),
                           frozenset({"head_connected", "no_duplicate_literal", "forward_chained"}))
    return TaskBundle(f"robot-{n}", bias, Program(tuple(facts)),
                      [atom("f", _state(0), _state(n))], [])


# ---------------------------------------------------------------------------
# list puzzles

MAX_INT = 20
LIST_STEPS = 10_000


def list_bk(max_int: int = MAX_INT) -> Program:
    src = ["empty([]).", "zero(0).", "one(1).",
           "head([H|_],H).", "tail([_|T],T).", "cons(H,T,[H|T]).",
           "element([X|_],X).", "element([_|T],X) :- element(T,X)."]
    for i in range(max_int + 1):
        src.append(f"{'even' if i % 2 == 0 else 'odd'}({i}).")
        if i < max_int:
            src.append(f"increment({i},{i + 1}).")
            src.append(f"decrement({i + 1},{i}).")
        for j in range(i + 1):
            src.append(f"geq({i},{j}).")
    return Program(tuple(parse_clauses("\n".join(src))))


LIST_TYPES = {
    "empty": ("list",), "zero": ("int",), "one": ("int",), "even": ("int",), "odd": ("int",),
    "head": ("list", "int"), "tail": ("list", "list"), "element": ("list", "int"),
    "cons": ("int", "list", "list"), "increment": ("int", "int"), "decrement": ("int", "int"),
    "geq": ("int", "int"),
}
LIST_MODES = {
    "empty": ("in",), "zero": ("out",), "one": ("out",), "even": ("in",), "odd": ("in",),
    "head": ("in", "out"), "tail": ("in", "out"), "element": ("in", "out"),
    "cons": ("in", "in", "out"), "increment": ("in", "out"), "decrement": ("in", "out"),
    "geq": ("in", "in"),
}


def _rand_list(rng: random.Random, lo_len: int, max_len: int, max_int: int) -> list[int]:
    return [rng.randint(1, max_int) for _ in range(rng.randint(lo_len, max_len))]


def _len_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 0, max_len, max_int)
        return (xs, len(xs))

    def neg():
        xs = _rand_list(rng, 0, max_len, max_int)
        wrong = rng.choice([k for k in range(0, min(max_len, max_int) + 1) if k != len(xs)])
        return (xs, wrong)
    return pos, neg, lambda xs, k: len(xs) == k


def _last_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max_len, max_int)
        return (xs, xs[-1])

    def neg():
        xs = _rand_list(rng, 1, max_len, max_int)
        inside = [v for v in xs if v != xs[-1]]
        if inside and rng.random() < 0.5:
            return (xs, rng.choice(inside))
        return (xs, rng.choice([v for v in range(1, max_int + 1) if v != xs[-1]]))
    return pos, neg, lambda xs, v: bool(xs) and xs[-1] == v


def _member_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max_len, max_int)
        return (xs, rng.choice(xs))

    def neg():
        xs = _rand_list(rng, 1, min(max_len, max_int - 1), max_int)
        return (xs, rng.choice([v for v in range(1, max_int + 1) if v not in xs]))
    return pos, neg, lambda xs, v: v in xs


def _droplast_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max_len, max_int)
        return (xs, xs[:-1])

    def neg():
        xs = _rand_list(rng, 1, max_len, max_int)
        ys = xs[:-1]
        choice = rng.randrange(3)
        if choice == 0 or not ys:
            ys = xs
        elif choice == 1:
            ys = xs[1:]
        else:
            ys = ys[:-1]
        return (xs, ys)
    return pos, neg, lambda xs, ys: bool(xs) and xs[:-1] == ys


def _addhead_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max_len - 1, max_int)
        return (xs, [xs[0]] + xs)

    def neg():
        xs = _rand_list(rng, 1, max_len - 1, max_int)
        v = rng.choice([v for v in range(1, max_int + 1) if v != xs[0]])
        return (xs, [v] + xs)
    return pos, neg, lambda xs, ys: bool(xs) and ys == [xs[0]] + xs


def _dropk_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max_len, max_int)
        k = rng.randint(1, len(xs))
        return (xs, k, xs[k:])

    def neg():
        xs = _rand_list(rng, 2, max(2, max_len), max_int)
        k = rng.randint(1, len(xs) - 1)
        return (xs, k, xs[k + 1:] if rng.random() < 0.5 else xs[k - 1:])
    return pos, neg, lambda xs, k, ys: 1 <= k <= len(xs) and xs[k:] == ys


def _finddup_task(rng, max_len, max_int):
    def pos():
        xs = _rand_list(rng, 1, max(1, max_len - 1), max_int)
        v = rng.choice(xs)
        xs.insert(rng.randint(0, len(xs)), v)
        return (xs, v)

    def neg():
        xs = rng.sample(range(1, max_int + 1), rng.randint(1, min(max_len, max_int)))
        return (xs, rng.choice(xs))
    return pos, neg, lambda xs, v: xs.count(v) >= 2


def _evens_task(rng, max_len, max_int):
    evens = list(range(2, max_int + 1, 2))

    def pos():
        return ([rng.choice(evens) for _ in range(rng.randint(0, max_len))],)

    def neg():
        xs = [rng.choice(evens) for _ in range(rng.randint(0, max_len - 1))]
        xs.insert(rng.randint(0, len(xs)), rng.choice(range(1, max_int + 1, 2)))
        return (xs,)
    return pos, neg, lambda xs: all(x % 2 == 0 for x in xs)


def _threesame_task(rng, max_len, max_int):
    def pos():
        v = rng.randint(1, max_int)
        return ([v, v, v] + _rand_list(rng, 0, max(0, max_len - 3), max_int),)

    def neg():
        while True:
            xs = _rand_list(rng, 3, max(3, max_len), max_int)
            if rng.random() < 0.5:
                xs[1] = xs[0]
            if not xs[0] == xs[1] == xs[2]:
                return (xs,)
    return pos, neg, lambda xs: len(xs) >= 3 and xs[0] == xs[1] == xs[2]


def _sorted_task(rng, max_len, max_int):
    def pos():
        return (sorted(_rand_list(rng, 1, max_len, max_int)),)

    def neg():
        while True:
            xs = _rand_list(rng, 2, max(2, max_len), max_int)
            if xs != sorted(xs):
                return (xs,)
    return pos, neg, lambda xs: bool(xs) and xs == sorted(xs)


# name -> (example builder, head types, head modes, desk-scale limits, builds lists)
LIST_TASKS = {
    "len": (_len_task, ("list", "int"), ("in", "out"), (2, 3, 4), False),
    "last": (_last_task, ("list", "int"), ("in", "out"), (2, 3, 4), False),
    "member": (_member_task, ("list", "int"), ("in", "out"), (2, 3, 4), False),
    "droplast": (_droplast_task, ("list", "list"), ("in", "out"), (2, 4, 5), True),
    "addhead": (_addhead_task, ("list", "list"), ("in", "out"), (2, 3, 4), True),
    "dropk": (_dropk_task, ("list", "int", "list"), ("in", "in", "out"), (2, 3, 5), False),
    "finddup": (_finddup_task, ("list", "int"), ("in", "out"), (2, 3, 4), False),
    "evens": (_evens_task, ("list",), ("in",), (2, 3, 4), False),
    "threesame": (_threesame_task, ("list",), ("in",), (2, 3, 4), False),
    "sorted": (_sorted_task, ("list",), ("in",), (2, 4, 4), False),
}


def list_oracle(name: str):
    """Ground-truth predicate for a list task, over Python values."""
    return LIST_TASKS[name][0](random.Random(0), 5, MAX_INT)[2]


def _py_term(v):
    return make_list(Constant(x) for x in v) if isinstance(v, list) else Constant(v)


def gen_list_task(name: str, n_pos: int = 5, n_neg: int = 5, max_len: int = 20,
                  seed: int = 0, max_int: int = MAX_INT,
                  limits: ShapeLimits | None = None) -> TaskBundle:
    if name not in LIST_TASKS:
        raise InvalidTask(f"unknown list task {name!r}; choose from {', '.join(LIST_TASKS)}")
    builder, htypes, hmodes, desk, builds = LIST_TASKS[name]
    rng = random.Random(f"{name}:{seed}")
    pos_fn, neg_fn, oracle = builder(rng, max_len, max_int)
    pos, neg = [], []
    seen = set()
    for out, fn, want, n in ((pos, pos_fn, True, n_pos), (neg, neg_fn, False, n_neg)):
        tries = 0
        while len(out) < n:
            tries += 1
            if tries > 1000 * (n + 1):
                raise RuntimeError(f"could not sample examples for {name}")
            args = fn()
            key = repr(args)
            if key in seen or oracle(*args) != want:
                continue
            seen.add(key)
            out.append(atom(name, *(_py_term(a) for a in args)))
    body = frozenset((p, len(t)) for p, t in LIST_TYPES.items()) | {(name, len(htypes))}
    types = dict(LIST_TYPES)
    types[name] = htypes
    modes = dict(LIST_MODES)
    modes[name] = hmodes
    if not builds:
        # cons only takes lists apart, so recursion cannot grow its input
        modes["cons"] = ("out", "out", "in")
    decls = Declarations((name, len(htypes)), body, modes, types)
    bias = GeneratorConfig(decls, limits or ShapeLimits(*desk))
    budget = Budget(max_resolution_steps=LIST_STEPS, max_depth=max_len + 10)
    return TaskBundle(f"{name}-s{seed}", bias, list_bk(max_int), pos, neg, budget)


# ---------------------------------------------------------------------------
# string transformations over states st(Input, Output)

_STRING_BK = """
copy1(st([C|I],[C|O]), st(I,O)).
skip1(st([_|I],O), st(I,O)).
copyskip1(st([C|I],[C|O]), st([C|I],O)).
mk_uppercase(st([C|I],[U|O]), st(I,O)) :- to_upper(C,U).
mk_lowercase(st([C|I],[L|O]), st(I,O)) :- to_lower(C,L).
is_empty(st([],_)).
not_empty(st([_|_],_)).
is_uppercase(st([C|_],_)) :- upper_char(C).
not_uppercase(st([C|_],_)) :- lower_char(C).
not_uppercase(st([C|_],_)) :- other_char(C).
is_letter(st([C|_],_)) :- upper_char(C).
is_letter(st([C|_],_)) :- lower_char(C).
not_letter(st([C|_],_)) :- other_char(C).
is_number(st([C|_],_)) :- digit_char(C).
not_number(st([C|_],_)) :- upper_char(C).
not_number(st([C|_],_)) :- lower_char(C).
not_number(st([C|_],_)) :- space_char(C).
not_number(st([C|_],_)) :- punct_char(C).
is_space(st([C|_],_)) :- space_char(C).
not_space(st([C|_],_)) :- upper_char(C).
not_space(st([C|_],_)) :- lower_char(C).
not_space(st([C|_],_)) :- digit_char(C).
not_space(st([C|_],_)) :- punct_char(C).
other_char(C) :- digit_char(C).
other_char(C) :- space_char(C).
other_char(C) :- punct_char(C).
"""

_LOWER = "abcdefghijklmnopqrstuvwxyz"
_DIGITS = "0123456789"
_PUNCT = ".,-'"


def string_bk() -> Program:
    clauses = list(parse_clauses(_STRING_BK, check_arity=False))
    c = Constant
    for lo in _LOWER:
        up = lo.upper()
        clauses += [Clause(atom("to_upper", c(lo), c(up))), Clause(atom("to_upper", c(up), c(up))),
                    Clause(atom("to_lower", c(up), c(lo))), Clause(atom("to_lower", c(lo), c(lo))),
                    Clause(atom("lower_char", c(lo))), Clause(atom("upper_char", c(up)))]
    for ch in _DIGITS + " " + _PUNCT:
        clauses += [Clause(atom("to_upper", c(ch), c(ch))), Clause(atom("to_lower", c(ch), c(ch)))]
    for ch in _DIGITS:
        clauses.append(Clause(atom("digit_char", c(ch))))
    clauses.append(Clause(atom("space_char", c(" "))))
    for ch in _PUNCT:
        clauses.append(Clause(atom("punct_char", c(ch))))
    return Program(tuple(clauses))


STRING_PREDS = ("copy1", "skip1", "copyskip1", "mk_uppercase", "mk_lowercase")
STRING_TESTS = ("is_empty", "not_empty", "is_uppercase", "not_uppercase", "is_letter",
                "not_letter", "is_number", "not_number", "is_space", "not_space")


def _chars(s: str):
    return make_list(Constant(ch) for ch in s)


def _string_example(inp: str, out: str, rest: str) -> Atom:
    start = Compound("st", (_chars(inp), _chars(out)))
    end = Compound("st", (_chars(rest), _chars("")))
    return atom("f", start, end)


def _upper_all(s):
    return s.upper(), ""


def _initial_upper(s):
    return s[0].upper(), s[1:]


def _skip2_copy(s):
    return s[2], s[3:]


def _double_first(s):
    return s[0] + s[0], s[1:]


def _first_letter_upper(s):
    i = next(k for k, ch in enumerate(s) if ch.isalpha())
    return s[i].upper(), s[i + 1:]


# name -> (transform, positive inputs, negative (input, wrong output) pairs)
STRING_TASKS = {
    "upper-all": (_upper_all, ["alex", "bob smith", "m41", "x"],
                  [("alex", "Alex"), ("bob", "bob")]),
    "initial-upper": (_initial_upper, ["alex", "maria", "Zed", "john m"],
                      [("alex", "a"), ("maria", "Ma")]),
    "skip2-copy": (_skip2_copy, ["ab1cd", "M,41", "xyz", "--a-"],
                   [("ab1cd", "a"), ("xyz", "x")]),
    "double-first": (_double_first, ["alex", "M", "41", "zz top"],
                     [("alex", "a"), ("alex", "al")]),
    "first-letter-upper": (_first_letter_upper, ["alex", "41 m", ",bob", "9x"],
                           [("9x", "9"), (",bob", ","), ("alex", "a")]),
}


def gen_string_task(name: str) -> TaskBundle:
    if name not in STRING_TASKS:
        raise InvalidTask(f"unknown string task {name!r}; choose from {', '.join(STRING_TASKS)}")
    fn, inputs, wrong = STRING_TASKS[name]
    pos = []
    for s in inputs:
        out, rest = fn(s)
        pos.append(_string_example(s, out, rest))
    neg = []
    for s, bad in wrong:
        _, rest = fn(s)
        neg.append(_string_example(s, bad, rest))
    body = frozenset((p, 2) for p in STRING_PREDS) | frozenset((p, 1) for p in STRING_TESTS) | {("f", 2)}
    modes = {p: ("in", "out") for p in STRING_PREDS}
    modes.update({p: ("in",) for p in STRING_TESTS})
    modes["f"] = ("in", "out")
    decls = Declarations(("f", 2), body, modes)
    bias = GeneratorConfig(decls, ShapeLimits(3, 3, 4))
    return TaskBundle(f"string-{name}", bias, string_bk(), pos, neg)
