import numpy as np
import pytest

from bellalg.states import PureState, random_pure

S2 = 1 / np.sqrt(2)


def basis(k):
    return PureState.basis(k)


def vec(*amps):
    return PureState.from_vector(np.array(amps, dtype=complex))


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


@pytest.fixture(scope="session")
def random_states():
    return [random_pure(np.random.default_rng([7, k])) for k in range(1000)]


_ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line for an acceptance criterion."""
    def record(number, passed, detail):
        _ACCEPTANCE[number] = (bool(passed), detail)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if passed else 'FAIL'}  {detail}")
