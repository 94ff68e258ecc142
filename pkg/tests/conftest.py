import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from qprincipal.coeff import LaurentPoly, ParamSet

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

QU = ParamSet(["q", "u"])


@st.composite
def laurent(draw, params=QU, max_terms=4, max_exp=3):
    k = len(params)
    exps = st.tuples(*[st.integers(-max_exp, max_exp)] * k)
    coefs = st.fractions(min_value=-5, max_value=5, max_denominator=4)
    terms = draw(st.dictionaries(exps, coefs, max_size=max_terms))
    return LaurentPoly(params, terms)


@pytest.fixture(scope="session")
def sud2():
    from qprincipal.ncalg import sudbery
    return sudbery(2)


@pytest.fixture(scope="session")
def sud3():
    from qprincipal.ncalg import sudbery
    return sudbery(3)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
