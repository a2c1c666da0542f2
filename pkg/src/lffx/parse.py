"""Reader for the clause syntax used in task files.

    head(args):- body1(args),body2(args).

Variables start with an uppercase letter or ``_``; constants are lowercase
atoms, quoted atoms or integers. ``[a,b|T]`` is list sugar over ``cons/2``
and ``nil``; ``(a,b)`` is a tuple. ``%`` starts a comment.
"""
from __future__ import annotations

import re
from dataclasses import dataclass

from .logic import NIL, Atom, Clause, Compound, Constant, Program, Variable, make_list


class ParseError(ValueError):
    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


@dataclass
class Token:
    kind: str  # var, atom, qatom, int, punct, end
    text: str
    line: int
    col: int


_TOKEN = re.compile(
    r"""
    (?P<ws>\s+|%[^\n]*)
  | (?P<neck>:-)
  | (?P<int>-?\d+)
  | (?P<var>[A-Z_][A-Za-z0-9_]*)
  | (?P<atom>[a-z][A-Za-z0-9_]*)
  | (?P<qatom>'(?:[^'\\]|\\.|'')*')
  | (?P<punct>[()\[\]|,.])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        s = m.group()
        if kind != "ws":
            if kind == "neck":
                kind = "punct"
            if kind == "qatom":
                s = re.sub(r"\\(.)", r"\1", s[1:-1].replace("''", "'"))
            tokens.append(Token(kind, s, line, pos - line_start + 1))
        nl = m.group().count("\n")
        if nl:
            line += nl
            line_start = pos + m.group().rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("end", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0
        self.anon = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str):
        t = self.tok
        found = t.text if t.kind != "end" else "end of input"
        raise ParseError(f"{msg}, found {found!r}", t.line, t.col)

    def expect(self, text: str):
        if self.tok.kind == "punct" and self.tok.text == text:
            self.i += 1
            return
        self.error(f"expected {text!r}")

    def at(self, text: str) -> bool:
        return self.tok.kind == "punct" and self.tok.text == text

    def term(self):
        t = self.tok
        if t.kind == "var":
            self.i += 1
            if t.text == "_":
                self.anon += 1
                return Variable(f"_G{self.anon}")
            return Variable(t.text)
        if t.kind == "int":
            self.i += 1
            return Constant(int(t.text))
        if t.kind in ("atom", "qatom"):
            self.i += 1
            if self.at("("):
                self.i += 1
                args = self.args(")")
                return Compound(t.text, tuple(args))
            return Constant(t.text)
        if self.at("["):
            self.i += 1
            if self.at("]"):
                self.i += 1
                return NIL
            items = [self.term()]
            while self.at(","):
                self.i += 1
                items.append(self.term())
            tail = NIL
            if self.at("|"):
                self.i += 1
                tail = self.term()
            self.expect("]")
            return make_list(items, tail)
        if self.at("("):
            self.i += 1
            items = self.args(")", allow_trailing=True)
            if len(items) == 1:
                return items[0]
            return Compound(",", tuple(items))
        self.error("expected a term")

    def args(self, close: str, allow_trailing: bool = False) -> list:
        items = [self.term()]
        while self.at(","):
            self.i += 1
            if allow_trailing and self.at(close):
                break
            items.append(self.term())
        self.expect(close)
        return items

    def literal(self) -> Atom:
        t = self.tok
        if t.kind not in ("atom", "qatom"):
            self.error("expected a predicate")
        self.i += 1
        if self.at("("):
            self.i += 1
            return Atom(t.text, tuple(self.args(")")))
        return Atom(t.text, ())

    def clause(self) -> Clause:
        self.anon = 0
        head = self.literal()
        body = []
        if self.at(":-"):
            self.i += 1
            body.append(self.literal())
            while self.at(","):
                self.i += 1
                body.append(self.literal())
        self.expect(".")
        return Clause(head, tuple(body))

    def clauses(self) -> list[tuple[Clause, Token]]:
        out = []
        while self.tok.kind != "end":
            start = self.tok
            out.append((self.clause(), start))
        return out


def parse_clauses(text: str, check_arity: bool = True) -> list[Clause]:
    parser = _Parser(text)
    pairs = parser.clauses()
    if check_arity:
        seen: dict[str, int] = {}
        for c, tok in pairs:
            for lit in (c.head, *c.body):
                prev = seen.setdefault(lit.predicate, lit.arity)
                if prev != lit.arity:
                    raise ParseError(
                        f"arity conflict for {lit.predicate}: {prev} and {lit.arity}",
                        tok.line,
                        tok.col,
                    )
    return [c for c, _ in pairs]


def parse_program(text: str, check_arity: bool = True) -> Program:
    return Program(tuple(parse_clauses(text, check_arity)))


def parse_clause(text: str) -> Clause:
    cs = parse_clauses(text)
    if len(cs) != 1:
        raise ValueError(f"expected one clause, got {len(cs)}")
    return cs[0]


def parse_atom(text: str) -> Atom:
    text = text.strip()
    if not text.endswith("."):
        text += "."
    c = parse_clause(text)
    if c.body:
        raise ValueError("expected an atom, got a rule")
    return c.head


def parse_term(text: str):
    p = _Parser(text)
    t = p.term()
    if p.tok.kind != "end":
        p.error("trailing input after term")
    return t
