import pytest
from hypothesis import HealthCheck, settings

from vacpol.fermi_nucleus import make_fermi

settings.register_profile("vacpol", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("vacpol")


@pytest.fixture(scope="session")
def lead():
    """Physical Fermi nucleus with Z = 82."""
    return make_fermi(82.0)


@pytest.fixture(scope="session")
def hydrogenic():
    """Physical Fermi geometry with unit charge."""
    return make_fermi(1.0)


@pytest.fixture(scope="session")
def verify_all():
    """``(exit_code, report_text)`` of one in-process ``vacpol verify all`` run."""
    from vacpol import cli
    code, text, _ = cli.run(["verify", "all"])
    return code, text


_CRITERIA = []


@pytest.fixture
def criterion(request):
    """Record and print one acceptance line; fail the test if it does not hold."""
    def check(label, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        _CRITERIA.append(line)
        print(line)
        assert ok, line
    return check


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
