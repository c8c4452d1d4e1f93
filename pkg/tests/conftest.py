from pathlib import Path

import numpy as np
import pytest

from pcabiplot.fileio import read_csv
from pcabiplot.matrix import center

DATA = Path(__file__).parent / "data"
EX2_CSV = DATA / "example_6x2.csv"
EX4_CSV = DATA / "example_6x4.csv"


def centered_random(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    x = rng.normal(size=(n, m)) * rng.uniform(0.2, 5.0, size=m)
    return x - x.mean(axis=0)


@pytest.fixture
def ex2():
    return center(read_csv(EX2_CSV))


@pytest.fixture
def ex4():
    return center(read_csv(EX4_CSV))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS, TITLES
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(TITLES):
        if key not in RESULTS:
            terminalreporter.write_line(f"{key} NOT RUN  {TITLES[key]}")
            continue
        ok, detail = RESULTS[key]
        line = f"{key} {'PASS' if ok else 'FAIL'}  {TITLES[key]}"
        terminalreporter.write_line(line + (f"  {detail}" if detail else ""))
