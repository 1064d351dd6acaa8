from contextlib import contextmanager

import pytest
from hypothesis import HealthCheck, settings

from reesemu.corpus import corpus

settings.register_profile("repo", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

CORPUS_MAX = 120
_lines: list[str] = []


@pytest.fixture(scope="session")
def full_corpus():
    return list(corpus(CORPUS_MAX))


@pytest.fixture(scope="session")
def small_corpus():
    return list(corpus(30))


@contextmanager
def criterion(number: int, title: str):
    """Record one pass/fail line for the acceptance summary."""
    detail: dict[str, str] = {}
    try:
        yield detail
    except BaseException as exc:
        _lines.append(f"criterion {number} FAIL  {title}: {type(exc).__name__}: {str(exc)[:200]}")
        print(_lines[-1])
        raise
    else:
        _lines.append(f"criterion {number} PASS  {title}" + (f" ({detail['info']})" if "info" in detail else ""))
        print(_lines[-1])


def pytest_terminal_summary(terminalreporter):
    if _lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_lines, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
