import pytest

from hgc_verify.coefficient_tower import FiniteFieldSpec, FiniteFieldTower, SymbolicTower
from hgc_verify.function_field import HypergeometricCurve


@pytest.fixture(scope="session")
def K3():
    return SymbolicTower(3)


@pytest.fixture(scope="session")
def X3(K3):
    return HypergeometricCurve(K3)


@pytest.fixture(scope="session")
def X4():
    return HypergeometricCurve(SymbolicTower(4))


@pytest.fixture(scope="session")
def X5f():
    return HypergeometricCurve(FiniteFieldTower(FiniteFieldSpec.from_seed(5, 1)))


@pytest.fixture(scope="session")
def X3f():
    return HypergeometricCurve(FiniteFieldTower(FiniteFieldSpec.from_seed(3, 2)))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = getattr(config, "_acceptance_results", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        ok, detail = results[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
