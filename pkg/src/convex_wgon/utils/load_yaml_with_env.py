import os
import re
from typing import Any, Dict

import yaml

# ${VAR} or ${VAR:-default}
_ENV_PATTERN = re.compile(r"\$\{([A-Za-z_][A-Za-z0-9_]*)(?::-([^}]*))?\}")


def expand_env(raw: str) -> str:
    """Expand ${VAR} / ${VAR:-default}. Unset variables without a default expand to ''."""

    def _sub(match: "re.Match[str]") -> str:
        name, default = match.group(1), match.group(2)
        value = os.environ.get(name)
        if value:
            return value
        return default if default is not None else ""

    return _ENV_PATTERN.sub(_sub, raw)


def load_yaml_with_env(path: str) -> Dict[str, Any]:
    """Load a YAML file and expand ${VAR} / ${VAR:-default} using environment variables."""
    with open(path, "r", encoding="utf-8") as f:
        raw = f.read()

    return yaml.safe_load(expand_env(raw)) or {}
