"""Runtime settings and logging set-up."""

from __future__ import annotations

import dataclasses
import logging
import os
from dataclasses import dataclass
from typing import Mapping

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

ENV_PREFIX = "NMSEM_"


@dataclass(frozen=True)
class Settings:
    """Bounds for exhaustive sweeps and defaults for sampling.

    Attributes:
        max_exhaustive_worlds: largest universe enumerated exhaustively
        max_klm_atoms: largest atom count accepted by KLM checks
        max_lift_atoms: atom bound for lifting without an explicit override
        default_samples: number of sampled functions when none is given
        log_level: level name used by configure_logging
    """

    max_exhaustive_worlds: int = 3
    max_klm_atoms: int = 3
    max_lift_atoms: int = 2
    default_samples: int = 100
    log_level: str = "WARNING"

    def replace(self, **overrides) -> "Settings":
        return dataclasses.replace(self, **overrides)


def load_settings(environ: Mapping[str, str] | None = None) -> Settings:
    """
    Build settings from NMSEM_* environment variables over the defaults.

    Args:
        environ: mapping to read instead of os.environ

    Returns:
        Settings: the merged settings
    """
    environ = os.environ if environ is None else environ
    values = {}
    for field in dataclasses.fields(Settings):
        raw = environ.get(ENV_PREFIX + field.name.upper())
        if raw is None:
            continue
        values[field.name] = raw if field.type in (str, "str") else int(raw)
    return Settings(**values)


def configure_logging(level: str | int | None = None) -> None:
    """Install one stderr handler on the root logger."""
    if level is None:
        level = load_settings().log_level
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
