import logging
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

from dotenv import dotenv_values
from pydantic import Field, ValidationError
from pydantic_settings import BaseSettings, SettingsConfigDict

from schemas.treasure import CALIBRATION_SAMPLE_FLOOR, ExhaustionPolicy, ScenarioConfig
from utils.errors import ConfigError

logger = logging.getLogger(__name__)


class ExperimentSettings(BaseSettings):
    """Flat experiment settings; unset optional values fall back to the preset's defaults"""
    model_config = SettingsConfigDict(env_prefix="TREASURE_", env_file=".env", extra="ignore")

    locations: int = Field(default=10, ge=2, description="Number of locations")
    agents: int = Field(default=10, ge=1, description="Population size")
    turns: int = Field(default=1000, ge=1, description="Turns per run")
    runs: int = Field(default=1000, ge=1, description="Runs per batch")
    seed: int = Field(default=0, ge=0, description="Master seed")
    p_change: Optional[float] = Field(default=None, ge=0.0, le=1.0, description="Relocation probability per turn")
    obs_prob: Optional[float] = Field(default=None, ge=0.0, le=100.0, description="Population observation probability in percent")
    focal_obs_prob: Optional[float] = Field(default=None, ge=0.0, le=100.0, description="Focal agent observation probability in percent")
    calibration_samples: int = Field(default=100_000, ge=CALIBRATION_SAMPLE_FLOOR, description="Actions used to calibrate P(A|T)")
    likelihood: Optional[Path] = Field(default=None, description="Likelihood CSV; calibrated on the fly when unset")
    workers: int = Field(default=1, ge=1, description="Worker processes")
    batch_observations: bool = Field(default=False, description="Apply social updates at the end of each turn")
    exhaustion: ExhaustionPolicy = Field(default=ExhaustionPolicy.RANDOM_SEARCH, description="Certainty-agent behaviour once every location is ruled out")
    log_level: str = Field(default="INFO", description="Logging level")


def _normalize_key(key: str) -> str:
    return key.strip().lower().replace("-", "_")


def read_config_file(path: Union[str, Path]) -> Dict[str, Any]:
    """Parse a flat key=value file, rejecting keys that are not settings"""
    target = Path(path)
    if not target.is_file():
        raise ConfigError("config", f"configuration file {target} not found")
    values = {}
    for raw_key, value in dotenv_values(target).items():
        key = _normalize_key(raw_key)
        if key not in ExperimentSettings.model_fields:
            raise ConfigError(raw_key, f"unknown configuration key in {target}")
        if value is None or value == "":
            raise ConfigError(raw_key, "missing value")
        values[key] = value
    logger.info(f"Loaded {len(values)} settings from {target}")
    return values


def load_settings(config_file: Optional[Union[str, Path]] = None,
                  overrides: Optional[Mapping[str, Any]] = None) -> ExperimentSettings:
    """Defaults < environment < config file < explicit overrides"""
    values: Dict[str, Any] = {}
    if config_file:
        values.update(read_config_file(config_file))
    for key, value in (overrides or {}).items():
        key = _normalize_key(key)
        if key not in ExperimentSettings.model_fields:
            raise ConfigError(key, "unknown configuration key")
        if value is not None:
            values[key] = value
    try:
        return ExperimentSettings(**values)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error.get("loc") else "config"
        raise ConfigError(key, error["msg"]) from e


def parse_config(config_file: Optional[Union[str, Path]] = None,
                 overrides: Optional[Mapping[str, Any]] = None,
                 preset: str = "single") -> ScenarioConfig:
    """Resolve settings and build the preset's scenario configuration"""
    return build_scenario(preset, load_settings(config_file, overrides))


def build_scenario(preset: str, settings: ExperimentSettings) -> ScenarioConfig:
    """Build a registered preset from resolved settings"""
    from registry import default_registry

    try:
        return default_registry().build(preset, settings)
    except ValidationError as e:
        error = e.errors()[0]
        key = str(error["loc"][0]) if error.get("loc") else "config"
        raise ConfigError(key, error["msg"]) from e
