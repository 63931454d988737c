from __future__ import annotations

import pytest

from sostar.verifier import build_condition_data


@pytest.fixture(scope="session")
def data11():
    """Condition data at d = 11 with the proof-minimal blocks and models 0, 1 kept."""
    return build_condition_data(11, "proof-min", "chain", keep_models=(0, 1, 2))


@pytest.fixture(scope="session")
def data11_exhaustive():
    return build_condition_data(11, "exhaustive", "chain")


_CRITERIA: dict[int, str] = {}


class _Criterion:
    def __init__(self, number: int, title: str):
        self.number = number
        self.title = title
        self.notes: list[str] = []

    def note(self, text: str) -> None:
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        extra = "; ".join(self.notes)
        if exc_type is not None:
            extra = (extra + "; " if extra else "") + f"{exc_type.__name__}: {exc}".splitlines()[0]
        line = f"criterion {self.number} {status}: {self.title}" + (f" ({extra})" if extra else "")
        _CRITERIA[self.number] = line
        print(line)
        return False


@pytest.fixture
def criterion():
    """Context manager recording one pass/fail line per acceptance criterion."""
    return _Criterion


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for k in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[k])
