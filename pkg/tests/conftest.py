import os
from pathlib import Path

import pytest

from hlcesaro import load_zeros, sieve_von_mangoldt

ROOT = Path(__file__).resolve().parent.parent
ZEROS_PATH = ROOT / "data" / "zeros_10k.txt"


@pytest.fixture(scope="session")
def zeros_path():
    return str(ZEROS_PATH)


@pytest.fixture(scope="session")
def zeros(zeros_path):
    return load_zeros(zeros_path)


@pytest.fixture(scope="session")
def table():
    return sieve_von_mangoldt(20_000)


@pytest.fixture(autouse=True)
def _no_env_zeros(monkeypatch):
    monkeypatch.delenv("HLCESARO_ZEROS", raising=False)
    yield


ACCEPTANCE = []


@pytest.fixture
def acceptance():
    """Record ``(label, ok, detail)``; the lines are printed at the end of the run."""
    def record(label, ok, detail=""):
        line = f"{label} {'PASS' if ok else 'FAIL'}  {detail}".rstrip()
        ACCEPTANCE.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
