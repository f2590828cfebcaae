import hypothesis.strategies as st
from hypothesis import settings

from cyclicprod.word_core import Letter, Word, reduce

settings.register_profile("default", deadline=None, max_examples=150)
settings.load_profile("default")


def words(alphabet="xyz", max_size=12, min_size=0):
    letters = st.sampled_from([Letter(s, e) for s in alphabet for e in (1, -1)])
    return st.lists(letters, min_size=min_size, max_size=max_size).map(Word)


def reduced_words(alphabet="xy", max_size=6, min_size=0):
    return words(alphabet, max_size * 2, 0).map(reduce).filter(lambda w: min_size <= len(w) <= max_size)


# one line per acceptance criterion, filled in by test_acceptance and printed at the end
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
