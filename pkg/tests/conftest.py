from pathlib import Path

import hypothesis
import pytest

from scatterscore.dsl import parse_file

ROOT = Path(__file__).resolve().parent.parent
CORPUS = ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "golden"

hypothesis.settings.register_profile("ci", deadline=None)
hypothesis.settings.load_profile("ci")

JAZZ_SCRIPT = [(2, 2), (3, 3), (6, 6), (4, 4), (5, 5), (7, 7)]
TRIO_SCRIPT = [
    (1, 1, 1), (2, 2, 2), (3, 5, 3), (3, 5, 3), (5, 6, 5),
    (5, 6, 5), (7, 7, 7), (8, 8, 8), (8, 8, 9), (8, 8, 10),
]


@pytest.fixture(scope="session")
def jazz():
    return parse_file(CORPUS / "jazz.mgs")


@pytest.fixture(scope="session")
def allegro():
    return parse_file(CORPUS / "allegro.mgs")


@pytest.fixture(scope="session")
def trio():
    return parse_file(CORPUS / "trio.mgs")


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
