from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, Optional

from convex_wgon.utils.get_paths import _resolve_under_project, get_log_root, get_settings_path
from convex_wgon.utils.load_yaml_with_env import load_yaml_with_env

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Guardrails:
    max_n_dp: int = 200
    max_n_oracle: int = 14
    max_subsets: int = 1_000_000
    oracle_timeout_s: Optional[float] = 600.0


@dataclass(frozen=True)
class Settings:
    log_file: Path
    log_level: str = "INFO"
    run_log_enabled: bool = True
    guardrails: Guardrails = field(default_factory=Guardrails)
    coord_range: int = 100
    shape: str = "uniform"
    max_rejections: int = 100_000
    perturb_scale: int = 8
    perturb_max_rounds: int = 16
    bench_repetitions: int = 3
    bench_seed: int = 7


def _section(raw: Dict[str, Any], name: str) -> Dict[str, Any]:
    value = raw.get(name) or {}
    return value if isinstance(value, dict) else {}


def load_settings(path: Optional[Path] = None) -> Settings:
    """
    Load settings.yaml into a Settings object.

    A missing file or missing keys fall back to the dataclass defaults.
    """
    settings_path = Path(path) if path is not None else get_settings_path()
    raw: Dict[str, Any] = {}
    if settings_path.exists():
        raw = load_yaml_with_env(str(settings_path))
    else:
        logger.warning("Settings file not found at %s; using defaults.", settings_path)

    log_cfg = _section(raw, "logging")
    guard_cfg = _section(raw, "guardrails")
    gen_cfg = _section(raw, "generator")
    perturb_cfg = _section(raw, "perturbation")
    bench_cfg = _section(raw, "bench")
    run_log_cfg = _section(raw, "run_log")

    defaults = Guardrails()
    timeout = guard_cfg.get("oracle_timeout_s", defaults.oracle_timeout_s)
    guardrails = Guardrails(
        max_n_dp=int(guard_cfg.get("max_n_dp", defaults.max_n_dp)),
        max_n_oracle=int(guard_cfg.get("max_n_oracle", defaults.max_n_oracle)),
        max_subsets=int(guard_cfg.get("max_subsets", defaults.max_subsets)),
        oracle_timeout_s=float(timeout) if timeout is not None else None,
    )

    log_file = log_cfg.get("log_file") or str(get_log_root() / "wgon.log")
    return Settings(
        log_file=_resolve_under_project(str(log_file)),
        log_level=str(log_cfg.get("level", "INFO")).upper(),
        run_log_enabled=bool(run_log_cfg.get("enabled", True)),
        guardrails=guardrails,
        coord_range=int(gen_cfg.get("coord_range", 100)),
        shape=str(gen_cfg.get("shape", "uniform")),
        max_rejections=int(gen_cfg.get("max_rejections", 100_000)),
        perturb_scale=int(perturb_cfg.get("scale", 8)),
        perturb_max_rounds=int(perturb_cfg.get("max_rounds", 16)),
        bench_repetitions=int(bench_cfg.get("repetitions", 3)),
        bench_seed=int(bench_cfg.get("seed", 7)),
    )
