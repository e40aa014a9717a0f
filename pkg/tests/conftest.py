from pathlib import Path

import pytest

from mbse.amr import read_amr_file

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return DATA / "corpus.amr"


@pytest.fixture(scope="session")
def corpus(corpus_path):
    return read_amr_file(corpus_path)


def write_amr(path: Path, blocks) -> Path:
    path.write_text("".join(b.strip() + "\n\n" for b in blocks), encoding="utf-8")
    return path


ACCEPTANCE: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {detail}"
    ACCEPTANCE.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2])):
            terminalreporter.write_line(line)
