# tests/test_utils_paths.py

from pathlib import Path

from convex_wgon.utils.get_paths import (
    PROJECT_ROOT,
    get_data_root,
    get_default_threads,
    get_duckdb_path,
    get_log_root,
    get_settings_path,
)
from convex_wgon.utils.load_yaml_with_env import expand_env, load_yaml_with_env
from convex_wgon.utils.settings import load_settings


def test_project_root_matches_repo_root(project_root: Path) -> None:
    """
    Sanity check: PROJECT_ROOT in get_paths should be the same as the
    project_root fixture (repo root).
    """
    assert PROJECT_ROOT == project_root


def test_default_paths_under_project_root(project_root: Path, monkeypatch) -> None:
    """
    With no env overrides, paths should resolve under the project root:
      - data -> <PROJECT_ROOT>/data
      - logs -> <PROJECT_ROOT>/logs
      - duckdb -> <PROJECT_ROOT>/data/warehouse/runs.duckdb
    """
    monkeypatch.delenv("WGON_DATA_ROOT", raising=False)
    monkeypatch.delenv("WGON_LOG_ROOT", raising=False)
    monkeypatch.delenv("WGON_DUCKDB_PATH", raising=False)

    assert get_data_root() == project_root / "data"
    assert get_log_root() == project_root / "logs"
    assert get_duckdb_path() == project_root / "data" / "warehouse" / "runs.duckdb"
    assert get_settings_path() == project_root / "src" / "config" / "settings.yaml"


def test_env_overrides_relative_paths(project_root: Path, monkeypatch) -> None:
    """
    If env vars are set to *relative* paths, they should be resolved
    relative to PROJECT_ROOT.
    """
    monkeypatch.setenv("WGON_DATA_ROOT", "custom_data")
    monkeypatch.setenv("WGON_LOG_ROOT", "custom_logs")
    monkeypatch.setenv("WGON_DUCKDB_PATH", "custom_warehouse/custom.duckdb")

    assert get_data_root() == project_root / "custom_data"
    assert get_log_root() == project_root / "custom_logs"
    assert get_duckdb_path() == project_root / "custom_warehouse" / "custom.duckdb"


def test_env_overrides_absolute_paths(monkeypatch, tmp_path: Path) -> None:
    """
    If env vars are set to *absolute* paths, they should be used as-is.
    """
    abs_data = tmp_path / "data_root"
    abs_logs = tmp_path / "log_root"
    abs_duckdb = tmp_path / "warehouse" / "file.duckdb"

    monkeypatch.setenv("WGON_DATA_ROOT", str(abs_data))
    monkeypatch.setenv("WGON_LOG_ROOT", str(abs_logs))
    monkeypatch.setenv("WGON_DUCKDB_PATH", str(abs_duckdb))

    assert get_data_root() == abs_data
    assert get_log_root() == abs_logs
    assert get_duckdb_path() == abs_duckdb


def test_duckdb_path_follows_data_root(monkeypatch, tmp_path: Path) -> None:
    monkeypatch.delenv("WGON_DUCKDB_PATH", raising=False)
    monkeypatch.setenv("WGON_DATA_ROOT", str(tmp_path / "d"))
    assert get_duckdb_path() == tmp_path / "d" / "warehouse" / "runs.duckdb"


def test_default_threads(monkeypatch) -> None:
    monkeypatch.setenv("WGON_THREADS", "4")
    assert get_default_threads() == 4
    monkeypatch.setenv("WGON_THREADS", "zero")
    assert get_default_threads() == 1
    monkeypatch.setenv("WGON_THREADS", "-3")
    assert get_default_threads() == 1


def test_expand_env(monkeypatch) -> None:
    monkeypatch.setenv("WGON_TEST_VALUE", "abc")
    monkeypatch.delenv("WGON_TEST_MISSING", raising=False)
    assert expand_env("${WGON_TEST_VALUE}/x") == "abc/x"
    assert expand_env("${WGON_TEST_MISSING:-fallback}") == "fallback"
    assert expand_env("[${WGON_TEST_MISSING}]") == "[]"


def test_load_settings_from_yaml(monkeypatch, tmp_path: Path) -> None:
    monkeypatch.setenv("WGON_TEST_LEVEL", "debug")
    settings_file = tmp_path / "settings.yaml"
    settings_file.write_text(
        "logging:\n"
        f"  log_file: {tmp_path / 'logs' / 'run.log'}\n"
        "  level: ${WGON_TEST_LEVEL}\n"
        "guardrails:\n"
        "  max_n_dp: 50\n"
        "  oracle_timeout_s: null\n"
        "generator:\n"
        "  coord_range: 500\n",
        encoding="utf-8",
    )
    assert load_yaml_with_env(str(settings_file))["logging"]["level"] == "debug"

    settings = load_settings(settings_file)
    assert settings.log_level == "DEBUG"
    assert settings.log_file == tmp_path / "logs" / "run.log"
    assert settings.guardrails.max_n_dp == 50
    assert settings.guardrails.max_n_oracle == 14
    assert settings.guardrails.oracle_timeout_s is None
    assert settings.coord_range == 500
    assert settings.perturb_scale == 8


def test_load_settings_missing_file_uses_defaults(tmp_path: Path) -> None:
    settings = load_settings(tmp_path / "nope.yaml")
    assert settings.log_level == "INFO"
    assert settings.log_file == tmp_path / "logs" / "wgon.log"
    assert settings.guardrails.max_n_dp == 200
    assert settings.run_log_enabled


def test_repo_settings_file_parses() -> None:
    settings = load_settings()
    assert settings.guardrails.max_n_oracle == 14
    assert settings.bench_repetitions == 3
