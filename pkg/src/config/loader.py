import logging
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from pathlib import Path
from typing import Any, Dict

from pydantic import ValidationError

from core.errors import ConfigError
from data.models import ExperimentConfig


def _field_of(error: Dict[str, Any]) -> str:
    loc = [str(part) for part in error.get("loc", ())]
    return ".".join(loc) or "config"


def validate_config(raw: Dict[str, Any]) -> ExperimentConfig:
    """Validate a parsed config; the first problem becomes a ConfigError naming its field."""
    try:
        return ExperimentConfig.model_validate(raw)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(_field_of(first), first.get("msg", "invalid value")) from exc


def load_config(path: str | Path) -> ExperimentConfig:
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError as exc:
        raise ConfigError("config", f"no such file {path}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError("config", f"{path} is not valid TOML: {exc}") from exc
    config = validate_config(raw)
    logging.info("Loaded experiment config from %s", path)
    return config
