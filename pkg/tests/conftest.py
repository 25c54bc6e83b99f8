import numpy as np
import pytest

from metricprof import metric

_acceptance_lines = []


def record_criterion(number: int, title: str, passed: bool, detail: str = "") -> None:
    status = "PASS" if passed else "FAIL"
    _acceptance_lines.append(f"[{status}] criterion {number}: {title}" + (f" ({detail})" if detail else ""))


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_acceptance_lines, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def symbols(word: str) -> np.ndarray:
    """Lowercase letters to ids a=0, b=1, ...; '?' is a wildcard."""
    return np.array([metric.WILDCARD if c == "?" else ord(c) - ord("a") for c in word])
