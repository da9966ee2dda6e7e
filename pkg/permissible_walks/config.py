"""
Configuration manager for permissible-walks.
Handles loading user configuration from files and environment variables.
"""

import logging
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple

import yaml

from .attributes import Conjunction, Predicate, parse_predicate
from .errors import InvalidParameter, PredicateSpecError

logger = logging.getLogger(__name__)


class Config:
    """Configuration manager for permissible-walks."""

    DEFAULT_CONFIG = {
        "s": 1,
        "samples": 2000,  # evenly spaced trace samples over the support
        "class_attr": "class",
        "time_attr": "time",
        "min_edge_size": 0,
        "seed": 0,
        "n_users": 200,
        "threads_per_class": 20,
        "migration_time": 50.0,
        "horizon": 100.0,
        "log_level": "WARNING",
    }

    ENV_PREFIX = "PERMISSIBLE_WALKS_"

    def __init__(self, search_paths: Optional[Sequence[Path]] = None) -> None:
        self._config = self.DEFAULT_CONFIG.copy()
        self._load_config(search_paths)

    def _load_config(self, search_paths: Optional[Sequence[Path]] = None) -> None:
        """Load configuration from file."""
        config_paths = search_paths if search_paths is not None else [
            Path.home() / ".permissible-walks.yaml",
            Path.home() / ".permissible-walks.yml",
            Path.cwd() / ".permissible-walks.yaml",
            Path.cwd() / ".permissible-walks.yml",
        ]

        for config_path in config_paths:
            if config_path.exists():
                try:
                    with open(config_path, "r") as f:
                        file_config = yaml.safe_load(f)
                        if file_config and isinstance(file_config, dict):
                            self._config.update(file_config)
                except (yaml.YAMLError, IOError) as e:
                    logger.warning("Could not load config from %s: %s", config_path, e)

        # Non-string settings read their environment value as a YAML scalar
        for key in self._config:
            env_key = f"{self.ENV_PREFIX}{key.upper()}"
            if env_key in os.environ:
                if isinstance(self.DEFAULT_CONFIG.get(key), str):
                    self._config[key] = os.environ[env_key]
                    continue
                try:
                    self._config[key] = yaml.safe_load(os.environ[env_key])
                except yaml.YAMLError:
                    self._config[key] = os.environ[env_key]

    def get(self, key: str, default: Any = None) -> Any:
        """Get a configuration value."""
        return self._config.get(key, default)

    def set(self, key: str, value: Any) -> None:
        """Set a configuration value."""
        self._config[key] = value

    def update(self, config_dict: Dict[str, Any]) -> None:
        """Update configuration with values from a dictionary."""
        self._config.update(config_dict)

    @property
    def as_dict(self) -> Dict[str, Any]:
        """Return the configuration as a dictionary."""
        return self._config.copy()


@dataclass(frozen=True)
class PipelineConfig:
    """Validated settings for one pipeline run."""

    s: int = 1
    clauses: Tuple[Tuple[Optional[str], Predicate], ...] = ()
    min_edge_size: int = 0
    class_attr: str = "class"
    time_attr: str = "time"
    samples: int = 2000
    drop_isolated: bool = False

    @classmethod
    def from_options(
        cls,
        s: Any = None,
        predicates: Sequence[str] = (),
        attrs: Sequence[str] = (),
        min_edge_size: Any = None,
        class_attr: Optional[str] = None,
        time_attr: Optional[str] = None,
        samples: Any = None,
        drop_isolated: bool = False,
        settings: Optional[Config] = None,
    ) -> "PipelineConfig":
        """
        Merge CLI options over configuration defaults and validate them.

        Predicate specs pair positionally with ``attrs``; conjunction specs
        name their own attributes and need no partner.

        Raises:
            InvalidParameter: On a bad number.
            PredicateSpecError: On a bad predicate spec or a missing attribute.
        """
        settings = settings or config
        s = _as_int("s", s if s is not None else settings.get("s"), minimum=0)
        min_edge_size = _as_int(
            "min_edge_size",
            min_edge_size if min_edge_size is not None else settings.get("min_edge_size"),
            minimum=0,
        )
        samples = _as_int(
            "samples", samples if samples is not None else settings.get("samples"), minimum=1
        )

        attr_queue = list(attrs)
        clauses = []
        for spec in predicates:
            predicate = parse_predicate(spec)
            if isinstance(predicate, Conjunction):
                clauses.append((None, predicate))
                continue
            if not attr_queue:
                raise PredicateSpecError(spec, "no --attr given for this predicate")
            clauses.append((attr_queue.pop(0), predicate))
        if attr_queue:
            raise PredicateSpecError(",".join(attr_queue), "--attr given without a predicate")

        return cls(
            s=s,
            clauses=tuple(clauses),
            min_edge_size=min_edge_size,
            class_attr=class_attr or settings.get("class_attr"),
            time_attr=time_attr or settings.get("time_attr"),
            samples=samples,
            drop_isolated=drop_isolated,
        )


def _as_int(name: str, value: Any, minimum: int) -> int:
    try:
        number = int(value)
    except (TypeError, ValueError) as e:
        raise InvalidParameter(name, value, "must be an integer") from e
    if isinstance(value, float) and not value.is_integer():
        raise InvalidParameter(name, value, "must be an integer")
    if number < minimum:
        raise InvalidParameter(name, value, f"must be at least {minimum}")
    return number


# Global configuration instance
config = Config()
