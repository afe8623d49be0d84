from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Optional

import duckdb
import pandas as pd

from convex_wgon.utils.get_paths import get_duckdb_path


# ==========================
# Data classes
# ==========================

@dataclass
class SolverRunRecord:
    """
    Single CLI run record that will be inserted into solver_run_log.
    """
    command: str               # e.g. "solve", "oracle", "conformance", "bench"
    objective: str             # e.g. "min-area", "minch"
    algorithm: str             # e.g. "baseline", "doubling-strict"
    status: str                # "success" or the error code
    started_at: datetime
    finished_at: datetime
    n: Optional[int] = None
    w: Optional[int] = None
    value: Optional[float] = None
    valid: Optional[bool] = None
    n_jobs: int = 1
    instance_checksum: Optional[str] = None
    extra: Dict[str, Any] = field(default_factory=dict)

    @property
    def elapsed_s(self) -> float:
        return (self.finished_at - self.started_at).total_seconds()


# ==========================
# Helpers
# ==========================

def _get_warehouse_path(warehouse_path: Optional[Path] = None) -> Path:
    """
    Resolve the DuckDB file path, with the following precedence:

      1. Explicit warehouse_path argument (if provided)
      2. WGON_DUCKDB_PATH / WGON_DATA_ROOT via get_paths
    """
    if warehouse_path is not None:
        return Path(warehouse_path)
    return get_duckdb_path()


def _ensure_schema(conn: duckdb.DuckDBPyConnection) -> None:
    """
    Ensure the run log table exists.

    Assumes `conn` is already open; does not open or close it.
    """
    conn.execute(
        """
        CREATE TABLE IF NOT EXISTS solver_run_log (
            id BIGINT,
            command TEXT,
            objective TEXT,
            algorithm TEXT,
            status TEXT,
            started_at TIMESTAMP,
            finished_at TIMESTAMP,
            elapsed_s DOUBLE,
            n BIGINT,
            w BIGINT,
            value DOUBLE,
            valid BOOLEAN,
            n_jobs BIGINT,
            instance_checksum TEXT,
            extra_json TEXT
        )
        """
    )


def _compute_next_id(conn: duckdb.DuckDBPyConnection, table_name: str) -> int:
    """
    Next ID for a table (enough for local, single-process usage).
    """
    row = conn.execute(
        f"SELECT COALESCE(MAX(id) + 1, 1) FROM {table_name}"
    ).fetchone()
    return int(row[0])


# ==========================
# Public API
# ==========================

def log_solver_run(
    record: SolverRunRecord,
    warehouse_path: Optional[Path] = None,
) -> int:
    """
    Insert a SolverRunRecord into solver_run_log and return its id.

    Callers SHOULD catch exceptions so that logging failures never change
    the outcome of a solve.
    """
    db_path = _get_warehouse_path(warehouse_path)
    db_path.parent.mkdir(parents=True, exist_ok=True)

    conn = duckdb.connect(str(db_path))
    try:
        _ensure_schema(conn)
        next_id = _compute_next_id(conn, "solver_run_log")

        conn.execute(
            """
            INSERT INTO solver_run_log (
                id,
                command,
                objective,
                algorithm,
                status,
                started_at,
                finished_at,
                elapsed_s,
                n,
                w,
                value,
                valid,
                n_jobs,
                instance_checksum,
                extra_json
            )
            VALUES (?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?, ?)
            """,
            [
                next_id,
                record.command,
                record.objective,
                record.algorithm,
                record.status,
                record.started_at,
                record.finished_at,
                float(record.elapsed_s),
                record.n,
                record.w,
                float(record.value) if record.value is not None else None,
                record.valid,
                int(record.n_jobs),
                record.instance_checksum,
                json.dumps(record.extra, sort_keys=True, default=str),
            ],
        )
        return next_id
    finally:
        conn.close()


def load_run_log(warehouse_path: Optional[Path] = None) -> pd.DataFrame:
    """
    All logged runs ordered by id; an empty frame when nothing was logged yet.
    """
    db_path = _get_warehouse_path(warehouse_path)
    if not db_path.exists():
        return pd.DataFrame()

    conn = duckdb.connect(str(db_path))
    try:
        _ensure_schema(conn)
        return conn.execute("SELECT * FROM solver_run_log ORDER BY id").fetchdf()
    finally:
        conn.close()
