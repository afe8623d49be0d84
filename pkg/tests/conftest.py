from __future__ import annotations

import logging
from pathlib import Path
from typing import Iterator, List, Tuple

import pytest

from convex_wgon.core.geom import PointSet
from convex_wgon.io.instances import gen


# ======================================================
# Core paths
# ======================================================

@pytest.fixture(scope="session")
def project_root() -> Path:
    """
    Resolve the project root as the repo root (one level above tests/).
    """
    return Path(__file__).resolve().parents[1]


@pytest.fixture
def duckdb_path(tmp_path: Path) -> Path:
    """
    Per-test DuckDB run log, so tests never touch data/warehouse.
    """
    return tmp_path / "warehouse" / "runs.duckdb"


# ======================================================
# Environment wiring
# ======================================================

@pytest.fixture(autouse=True)
def configure_test_env(monkeypatch: pytest.MonkeyPatch, tmp_path: Path, duckdb_path: Path) -> None:
    """
    Point WGON_DATA_ROOT / WGON_LOG_ROOT / WGON_DUCKDB_PATH at tmp_path and
    pin the default worker count, so every test is isolated and sequential
    unless it asks otherwise.
    """
    monkeypatch.setenv("WGON_DATA_ROOT", str(tmp_path / "data"))
    monkeypatch.setenv("WGON_LOG_ROOT", str(tmp_path / "logs"))
    monkeypatch.setenv("WGON_DUCKDB_PATH", str(duckdb_path))
    monkeypatch.setenv("WGON_THREADS", "1")
    monkeypatch.delenv("WGON_SETTINGS_PATH", raising=False)


@pytest.fixture(autouse=True)
def reset_logging() -> Iterator[None]:
    """
    Drop handlers installed by setup_logging during a test (they hold
    per-test streams and files).
    """
    root = logging.getLogger()
    before = list(root.handlers)
    yield
    for handler in list(root.handlers):
        if handler not in before:
            root.removeHandler(handler)
            handler.close()
    if hasattr(root, "_wgon_configured"):
        delattr(root, "_wgon_configured")


# ======================================================
# Point sets
# ======================================================

FIVE_POINTS = [(0, 0), (10, 0), (10, 10), (0, 10), (4, 5)]


@pytest.fixture
def five_points() -> PointSet:
    """Square corners plus (4, 5) strictly inside."""
    return PointSet.from_coords(FIVE_POINTS)


@pytest.fixture
def unit_square() -> PointSet:
    return PointSet.from_coords([(0, 0), (1, 0), (1, 1), (0, 1)])


@pytest.fixture
def square_with_center() -> PointSet:
    """Three corners of a triangle plus a point strictly inside it."""
    return PointSet.from_coords([(0, 0), (10, 0), (0, 10), (2, 3)])


def seeded_corpus(n: int, count: int, seed: int = 0, coord_range: int = 100) -> List[Tuple[str, PointSet]]:
    out = []
    for k in range(count):
        inst = gen(n, seed + k, coord_range=coord_range)
        out.append((inst.name, inst.to_point_set()))
    return out


@pytest.fixture(scope="session")
def corpus_n8() -> List[Tuple[str, PointSet]]:
    return seeded_corpus(8, 12, seed=100)


@pytest.fixture(scope="session")
def corpus_n10() -> List[Tuple[str, PointSet]]:
    return seeded_corpus(10, 6, seed=500)
