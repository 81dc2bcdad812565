from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Mapping

import yaml

from vos_tracking.utils.errors import ConfigError

MATCHERS = ("hungarian", "greedy")
DENSITY_MODES = ("normalized", "raw")
ASSOCIATIONS = ("fpc", "tracklets")


def load_config(config_path: str = "config.yaml") -> dict:
    """
    Load the YAML configuration file as a Python dictionary.

    Args:
        config_path (str): Path to the YAML config file.

    Returns:
        dict: Parsed configuration (empty when the file is empty).
    """
    if not os.path.exists(config_path):
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, "r", encoding="utf-8") as file:
        try:
            config = yaml.safe_load(file)
        except yaml.YAMLError as e:
            raise ConfigError(f"{config_path}: not a valid YAML document ({e})") from e

    if config is None:
        return {}
    if not isinstance(config, dict):
        raise ConfigError(f"{config_path}: expected a flat key/value mapping, got {type(config).__name__}")
    return config


@dataclass(frozen=True)
class TrackingConfig:
    """Thresholds and switches for one tracking run. Defaults are the main configuration."""

    detection_score_min: float = 0.1
    nms_iou: float = 0.2
    edge_min: float = 0.05
    matcher: str = "hungarian"
    w_visual: float = 0.1
    w_temporal: float = 0.9
    density_mode: str = "normalized"
    max_tracks: int = 20
    association: str = "fpc"
    threads: int = 1

    def __post_init__(self) -> None:
        for name in ("detection_score_min", "nms_iou", "edge_min"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {value}")
        if self.w_visual < 0 or self.w_temporal < 0:
            raise ConfigError("w_visual and w_temporal must be non-negative")
        if self.w_visual + self.w_temporal <= 0:
            raise ConfigError("w_visual + w_temporal must be > 0")
        if self.matcher not in MATCHERS:
            raise ConfigError(f"matcher must be one of {MATCHERS}, got {self.matcher!r}")
        if self.density_mode not in DENSITY_MODES:
            raise ConfigError(f"density_mode must be one of {DENSITY_MODES}, got {self.density_mode!r}")
        if self.association not in ASSOCIATIONS:
            raise ConfigError(f"association must be one of {ASSOCIATIONS}, got {self.association!r}")
        if self.max_tracks < 0:
            raise ConfigError(f"max_tracks must be >= 0, got {self.max_tracks}")
        if self.threads < 1:
            raise ConfigError(f"threads must be >= 1, got {self.threads}")

    @classmethod
    def from_mapping(cls, raw: Mapping[str, Any]) -> "TrackingConfig":
        """Build a config from a flat mapping; unknown keys and wrong types are rejected."""
        known = {f.name: f for f in fields(cls)}
        unknown = sorted(set(raw) - set(known))
        if unknown:
            raise ConfigError(f"Unknown config keys: {unknown}")

        values: dict[str, Any] = {}
        for key, value in raw.items():
            default = known[key].default
            values[key] = _coerce(key, value, type(default))
        return cls(**values)

    @classmethod
    def from_file(cls, config_path: str) -> "TrackingConfig":
        return cls.from_mapping(load_config(config_path))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _coerce(key: str, value: Any, kind: type) -> Any:
    # bool is an int subclass; a YAML "yes" must not pass as a threshold
    if isinstance(value, bool) or isinstance(value, (dict, list)) or value is None:
        raise ConfigError(f"{key}: expected {kind.__name__}, got {value!r}")
    if kind is str:
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if kind is int:
        if isinstance(value, float) and value.is_integer():
            return int(value)
        if not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    if not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    return float(value)
