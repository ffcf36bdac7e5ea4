import pytest

from relcrit.presets import preset

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def gl3():
    return preset("gl3_inner").data


@pytest.fixture(scope="session")
def gl4():
    return preset("gl4_symplectic").data


@pytest.fixture(scope="session")
def gc2():
    return preset("group_case(2)").data


@pytest.fixture(scope="session")
def gc3():
    return preset("group_case(3)").data


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
