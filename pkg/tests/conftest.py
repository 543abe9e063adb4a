"""Shared fixtures and the acceptance-summary hook."""
import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=50)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def e8():
    from e8good.rootsystem import root_system
    return root_system("E8")


@pytest.fixture(scope="session")
def cert_records():
    from e8good.weyl import data_dir, read_records
    return {r["name"]: r for r in read_records(data_dir() / "certs" / "table6.dat") if r.get("kind") == "cert"}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
