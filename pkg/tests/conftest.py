import pytest

from daubconst.quadrature import QuadratureConfig
from daubconst.spectrum import SpectrumEvaluator

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def cfg():
    return QuadratureConfig(abs_tol=1e-10, rel_tol=1e-10, tail_block_tol=1e-10)


_EVALUATORS = {}


def evaluator(m, with_coefficients=False):
    key = (m, with_coefficients)
    if key not in _EVALUATORS:
        _EVALUATORS[key] = SpectrumEvaluator.for_order(m, with_coefficients)
    return _EVALUATORS[key]


@pytest.fixture(scope="session")
def make_ev():
    return evaluator


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""

    def record(name, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {name}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
