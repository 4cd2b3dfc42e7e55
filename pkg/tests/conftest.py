import sys
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from typed_asep.central_element import assemble_central  # noqa: E402
from typed_asep.exact_arith import LaurentPoly, RationalFunction  # noqa: E402
from typed_asep.hamiltonian import analyze  # noqa: E402

DATA = Path(__file__).parent / "data"
Q_POINTS_N5 = (Fraction(10), Fraction(7, 3), Fraction(22, 7))
ACCEPTANCE: dict[int, str] = {}


def laurent(coeffs: dict) -> RationalFunction:
    return RationalFunction(LaurentPoly(coeffs))


def symmetric(*exps, middle=2) -> RationalFunction:
    """sum of q^e + q^-e over exps, plus a constant."""
    c = {0: middle}
    for e in exps:
        c[e] = c.get(e, 0) + 1
        c[-e] = c.get(-e, 0) + 1
    return laurent(c)


@pytest.fixture(scope="session")
def qsym():
    return RationalFunction(LaurentPoly.monomial(1))


@pytest.fixture(scope="session")
def central3():
    return assemble_central(3, "symbolic")


@pytest.fixture(scope="session")
def central4():
    return assemble_central(4, "symbolic")


@pytest.fixture(scope="session")
def report3(central3):
    return analyze(3, "symbolic", C=central3)


@pytest.fixture(scope="session")
def report4(central4):
    return analyze(4, "symbolic", C=central4)


@lru_cache(maxsize=None)
def central5_at(q0: Fraction):
    return assemble_central(5, Fraction(q0))


@lru_cache(maxsize=None)
def report5_at(q0: Fraction):
    """Full n = 5 pipeline in exact numeric mode; shared by every test module."""
    return analyze(5, Fraction(q0), C=central5_at(q0))


@pytest.fixture(scope="session")
def central5_q10():
    return central5_at(Fraction(10))


@pytest.fixture(scope="session")
def report5_q10():
    return report5_at(Fraction(10))


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[k])
