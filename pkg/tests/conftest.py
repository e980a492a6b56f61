from fractions import Fraction

import pytest
from hypothesis import settings
from hypothesis import strategies as st

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def fractions(lo=-9, hi=9, max_den=6):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, max_den))


@pytest.fixture
def F():
    return Fraction


# -- acceptance report ------------------------------------------------------

_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(number: int, title: str, passed: bool, detail: str, seconds: float):
        status = "PASS" if passed else "FAIL"
        _ACCEPTANCE[number] = f"[{status}] {number}. {title}: {detail} ({seconds:.2f} s)"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[k])
