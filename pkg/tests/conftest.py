import numpy as np
import pytest

from certdel.pke import keygen
from certdel.rng import make_rng


@pytest.fixture
def rng():
    return make_rng(20240601)


@pytest.fixture(scope="session")
def keys16():
    return keygen("toy-16", 128, make_rng(7))


@pytest.fixture(scope="session")
def keys4():
    return keygen("toy-4", 128, make_rng(8))


def binomial_ok(successes, trials, p, sigmas=3.0):
    """|freq - p| within ``sigmas`` binomial standard errors of p."""
    se = np.sqrt(p * (1 - p) / trials)
    return abs(successes / trials - p) <= sigmas * se


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line; the lines are repeated in the terminal summary."""

    def report(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'}  criterion {number}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
