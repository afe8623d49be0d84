from __future__ import annotations

import os
from pathlib import Path


# This file lives at: <project_root>/src/convex_wgon/utils/get_paths.py
# So project root is three levels up from here.
PROJECT_ROOT = Path(__file__).resolve().parents[3]


def _resolve_under_project(path_str: str) -> Path:
    """
    Resolve a path that may be absolute or relative.

    - If absolute, return as-is.
    - If relative, treat it as relative to PROJECT_ROOT.
    """
    p = Path(path_str)
    if p.is_absolute():
        return p
    return PROJECT_ROOT / p


def get_data_root() -> Path:
    """
    Root folder for generated instances, solution files and figures.

    Defaults to "data" under the project root; WGON_DATA_ROOT overrides it.
    """
    env_value = os.getenv("WGON_DATA_ROOT", "data")
    return _resolve_under_project(env_value)


def get_log_root() -> Path:
    """
    Root folder for logs. Defaults to "logs"; WGON_LOG_ROOT overrides it.
    """
    env_value = os.getenv("WGON_LOG_ROOT", "logs")
    return _resolve_under_project(env_value)


def get_duckdb_path() -> Path:
    """
    Path to the DuckDB run log.

    Resolution order:
      1. If WGON_DUCKDB_PATH is set, use it (relative to project root if not absolute).
      2. Otherwise: <DATA_ROOT>/warehouse/runs.duckdb
    """
    env_value = os.getenv("WGON_DUCKDB_PATH")
    if env_value:
        return _resolve_under_project(env_value)

    return get_data_root() / "warehouse" / "runs.duckdb"


def get_settings_path() -> Path:
    """
    Path to settings.yaml. WGON_SETTINGS_PATH overrides src/config/settings.yaml.
    """
    env_value = os.getenv("WGON_SETTINGS_PATH")
    if env_value:
        return _resolve_under_project(env_value)
    return PROJECT_ROOT / "src" / "config" / "settings.yaml"


def get_default_threads() -> int:
    """Default worker count for the parallel mode (WGON_THREADS, default 1)."""
    raw = os.getenv("WGON_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1
