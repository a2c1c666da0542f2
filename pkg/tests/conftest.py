import pytest

from lffx.logic import Program
from lffx.parse import parse_atom, parse_program
from lffx.tasks import appendix_task

LIST_BK = """
empty([]).
head([H|_],H).
tail([_|T],T).
cons(H,T,[H|T]).
"""


def prog(text: str) -> Program:
    return parse_program(text, check_arity=False)


def ex(text: str):
    return parse_atom(text)


@pytest.fixture(scope="session")
def appendix():
    return appendix_task()


@pytest.fixture(scope="session")
def pool(appendix):
    """h1..h7 by name, in file order."""
    return {f"h{i}": p for i, p in enumerate(appendix.bias.pool, start=1)}


@pytest.fixture(scope="session")
def list_bk():
    return prog(LIST_BK)
