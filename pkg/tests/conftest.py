import json
from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def smolyak_tables():
    """Golden Smolyak node/basis tables keyed by (d, k); expressions use x1, x2, x3."""
    raw = json.loads((DATA / "smolyak_tables.json").read_text())
    return {tuple(map(int, key.split(","))): rows for key, rows in raw.items()}


def eval_table_poly(expr: str, points: np.ndarray) -> np.ndarray:
    names = {f"x{j + 1}": points[:, j] for j in range(points.shape[1])}
    return np.asarray(eval(expr, {"__builtins__": {}}, names), dtype=float) * np.ones(len(points))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
