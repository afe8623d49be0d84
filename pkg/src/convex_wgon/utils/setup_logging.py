import logging
from pathlib import Path
from typing import Optional, Union


def setup_logging(log_path: Optional[Union[str, Path]] = None, level: int = logging.INFO) -> None:
    """
    Configure root logging: a file handler (when log_path is given) plus a console handler.

    Calling it twice does not duplicate handlers.
    """
    root = logging.getLogger()
    if getattr(root, "_wgon_configured", False):
        root.setLevel(level)
        return

    root.setLevel(level)
    if log_path is not None:
        Path(log_path).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, encoding="utf-8")
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s [%(levelname)s] %(name)s - %(message)s")
        )
        root.addHandler(file_handler)

    console = logging.StreamHandler()
    console.setLevel(level)
    console.setFormatter(logging.Formatter("%(asctime)s [%(levelname)s] %(message)s"))
    root.addHandler(console)
    root._wgon_configured = True  # type: ignore[attr-defined]
