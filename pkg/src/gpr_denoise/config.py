"""Persistent de-noising defaults for gpr-denoise."""

import json
import logging
import os
from dataclasses import dataclass, fields
from pathlib import Path

from .denoise import DEFAULT_MODES, DEFAULT_THRESHOLD, DenoiseConfig, pipeline_vmd
from .entropy import SampEnParams
from .errors import ParseError

logger = logging.getLogger(__name__)

CONFIG_FILENAME = ".gpr-denoise-config.json"


@dataclass
class Settings:
    """De-noising defaults, overridable from the command line."""

    modes: int = DEFAULT_MODES
    alpha: float = 2000.0
    tau: float = 0.0
    tol: float = 1e-7
    max_iter: int = 500
    sampen_m: int = 2
    sampen_r: float = 0.2
    threshold: float = DEFAULT_THRESHOLD
    strategy: str = "prefix"
    jobs: int = 1
    config_path: str = ""

    def denoise_config(self) -> DenoiseConfig:
        """Build the pipeline configuration these settings describe."""
        return DenoiseConfig(
            vmd=pipeline_vmd(
                self.modes,
                alpha=self.alpha,
                tau=self.tau,
                tol=self.tol,
                max_iter=self.max_iter,
            ),
            sampen=SampEnParams(m=self.sampen_m, r=self.sampen_r),
            threshold=self.threshold,
            strategy=self.strategy,
        )


SETTING_KEYS = {f.name.replace("_", "-"): f.name for f in fields(Settings) if f.name != "config_path"}


def _coerce(key: str, value: object, kind: type, config_path: Path | None) -> object:
    if kind is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ParseError(f"{config_path}: {key} must be {kind.__name__}, got {value!r}")
    return value


def find_config_file() -> Path | None:
    """Search for the settings file in standard locations.

    Searches in order:
    1. Current working directory
    2. User config directory (XDG_CONFIG_HOME)
    3. ~/.config
    4. /etc/

    Returns:
        Path to the settings file if found, None otherwise
    """
    search_paths = [
        Path.cwd() / CONFIG_FILENAME,
        Path(os.getenv("XDG_CONFIG_HOME", "")) / CONFIG_FILENAME,
        Path(os.getenv("HOME", "")) / ".config" / CONFIG_FILENAME,
        Path("/etc") / CONFIG_FILENAME,
    ]

    for path in search_paths:
        if path.is_file():
            return path

    return None


def load_settings(config_file: str | None = None) -> Settings:
    """Load settings from a JSON file.

    Args:
        config_file: Explicit settings path; searched for when None

    Returns:
        Settings with file values over built-in defaults

    Raises:
        ParseError: If the file is not valid JSON or holds unknown or mistyped keys
    """
    config_path = Path(config_file) if config_file is not None else find_config_file()

    data = {}
    if config_path is not None and config_path.is_file():
        try:
            data = json.loads(config_path.read_text())
        except json.JSONDecodeError as e:
            raise ParseError(f"{config_path}: {e.msg}", row=e.lineno, column=e.colno) from None
        if not isinstance(data, dict):
            raise ParseError(f"{config_path}: expected a JSON object")
        logger.debug("Loaded settings from %s", config_path)

    unknown = set(data) - set(SETTING_KEYS)
    if unknown:
        raise ParseError(f"{config_path}: unknown setting(s) {', '.join(sorted(unknown))}")

    values = {}
    for key, value in data.items():
        name = SETTING_KEYS[key]
        values[name] = _coerce(key, value, type(getattr(Settings, name)), config_path)

    settings = Settings(**values)
    settings.config_path = str(config_path) if config_path is not None else ""
    return settings


def write_settings(settings: Settings, file_path: str | None = None) -> str:
    """Write settings to file.

    Only values that differ from the built-in defaults are written.

    Args:
        settings: Settings to store
        file_path: Path to save to; defaults to ./CONFIG_FILENAME

    Returns:
        Path to the written settings file
    """
    output_path = Path(file_path) if file_path is not None else Path(".") / CONFIG_FILENAME
    defaults = Settings()

    config_data = {
        key: getattr(settings, name)
        for key, name in SETTING_KEYS.items()
        if getattr(settings, name) != getattr(defaults, name)
    }

    with open(output_path, "w") as f:
        json.dump(config_data, f, indent=4)

    return str(output_path)
