import pytest
from hypothesis import settings, strategies as st

from agt.words import Word, reduce

settings.register_profile("agt", max_examples=150, deadline=None)
settings.load_profile("agt")


def raw_letters(rank, max_size=10):
    nonzero = st.integers(-rank, rank).filter(bool)
    return st.lists(nonzero, max_size=max_size)


def words(rank=2, max_size=10):
    return raw_letters(rank, max_size).map(lambda xs: reduce(xs, rank))


def cyclic_words(rank=2, max_size=8, min_size=1):
    def ok(w):
        return len(w) >= min_size and (len(w) <= 1 or w[0] != -w[-1])

    return words(rank, max_size).filter(ok)


@pytest.fixture
def w():
    return Word.parse


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[n].line())
