"""
chordlab configuration
Environment settings (.env aware), run configuration and logging setup
"""

import json
import logging
import os
from dataclasses import dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Tuple

from dotenv import load_dotenv

from src.core.exceptions import ConfigError, InvalidArgumentError

FORMAT_VERSION = "chordlab/1"

MODES = ("oriented", "nonoriented")
MODELS = ("point", "length", "lp")
SPECTRA = ("point", "length", "lp")
LEMMAS = (
    "point-oriented",
    "length-oriented",
    "lp-oriented",
    "point-nonoriented",
    "length-nonoriented",
    "lp-nonoriented",
)


@dataclass(frozen=True)
class Settings:
    """Process-wide defaults read from the environment"""

    threads: int = 1
    log_level: str = "INFO"
    host: str = "0.0.0.0"
    port: int = 8000
    max_sites_oriented: int = 14
    max_sites_nonoriented: int = 12

    def max_sites(self, mode: str) -> int:
        if mode == "nonoriented":
            return self.max_sites_nonoriented
        return self.max_sites_oriented

    def max_ymax(self, mode: str) -> int:
        """No census under the site ceiling holds more chords than this"""
        return self.max_sites(mode) // 2


def _env_int(name: str, default: int, minimum: int = 0) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError as e:
        raise ConfigError(f"Invalid {name}={raw!r}: expected an integer") from e
    if value < minimum:
        raise ConfigError(f"Invalid {name}={value}: must be >= {minimum}")
    return value


def load_settings(env_file: Optional[str] = None) -> Settings:
    """Load settings from the environment, reading a .env file first if present"""
    load_dotenv(env_file)
    return Settings(
        threads=_env_int("CHORDLAB_THREADS", 1, minimum=1),
        log_level=os.getenv("CHORDLAB_LOG_LEVEL", "INFO").upper(),
        host=os.getenv("CHORDLAB_HOST", "0.0.0.0"),
        port=_env_int("CHORDLAB_PORT", 8000, minimum=1),
        max_sites_oriented=_env_int("CHORDLAB_MAX_SITES_ORIENTED", 14),
        max_sites_nonoriented=_env_int("CHORDLAB_MAX_SITES_NONORIENTED", 12),
    )


def configure_logging(level: str = "INFO") -> None:
    """Configure root logging once for the CLI and the server"""
    numeric = getattr(logging, level.upper(), None)
    if not isinstance(numeric, int):
        raise ConfigError(f"Invalid log level: {level}. Must be one of: DEBUG, INFO, WARNING, ERROR")
    logging.basicConfig(
        level=numeric,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    logging.getLogger().setLevel(numeric)


@dataclass
class RunConfig:
    """Resolved configuration of one CLI run"""

    command: str
    mode: str = "oriented"
    model: str = "lp"
    backbones: Tuple[int, ...] = ()
    chords: Optional[int] = None  # None means every feasible k
    spectrum: str = "lp"
    connected: bool = False
    ymax: int = 2
    bmax: int = 1
    max_sites: Optional[int] = None
    out: Optional[str] = None
    seed: int = 7
    tol: float = 1e-6
    threads: int = 1
    which: str = "all"
    n: int = 4
    trials: int = 20
    left: Optional[str] = None
    right: Optional[str] = None
    host: str = "0.0.0.0"
    port: int = 8000
    version: str = field(default=FORMAT_VERSION, init=False)

    def validate(self, settings: Settings) -> "RunConfig":
        if self.mode not in MODES:
            raise ConfigError(f"Invalid mode: {self.mode}. Must be one of: {', '.join(MODES)}")
        if self.model not in MODELS:
            raise ConfigError(f"Invalid model: {self.model}. Must be one of: {', '.join(MODELS)}")
        if self.spectrum not in SPECTRA:
            raise ConfigError(f"Invalid spectrum: {self.spectrum}. Must be one of: {', '.join(SPECTRA)}")
        if self.which != "all" and self.which not in LEMMAS:
            raise ConfigError(f"Invalid lemma: {self.which}. Must be one of: all, {', '.join(LEMMAS)}")
        if any(i < 0 for i in self.backbones):
            raise ConfigError(f"Backbone lengths must be non-negative, got {list(self.backbones)}")
        if self.chords is not None and self.chords < 0:
            raise ConfigError(f"Chord count must be non-negative, got {self.chords}")
        if self.ymax < 0 or self.bmax < 0:
            raise ConfigError("Truncations --ymax and --bmax must be non-negative")
        ceiling = settings.max_sites(self.mode)
        if self.ymax > settings.max_ymax(self.mode):
            raise InvalidArgumentError(
                f"--ymax {self.ymax} exceeds the {self.mode} ceiling of {settings.max_ymax(self.mode)} chords"
            )
        if self.bmax > ceiling:
            raise InvalidArgumentError(f"--bmax {self.bmax} exceeds the {self.mode} ceiling of {ceiling} backbones")
        if sum(self.backbones) > ceiling:
            raise ConfigError(
                f"Backbones carry {sum(self.backbones)} sites; the {self.mode} ceiling is {ceiling}"
            )
        if self.max_sites is not None and not 0 <= self.max_sites <= ceiling:
            raise ConfigError(f"--max-sites must lie in 0..{ceiling}, got {self.max_sites}")
        if self.n < 2:
            raise ConfigError(f"Matrix size must be >= 2, got {self.n}")
        if self.trials < 1:
            raise ConfigError(f"Trials must be >= 1, got {self.trials}")
        if self.tol <= 0:
            raise ConfigError(f"Tolerance must be positive, got {self.tol}")
        if self.threads < 1:
            raise ConfigError(f"Threads must be >= 1, got {self.threads}")
        return self


def read_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON config file whose keys are RunConfig field names"""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Could not read config file {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError(f"Config file {path} must contain a JSON object")
    known = {f.name for f in fields(RunConfig) if f.init}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
    if "backbones" in data:
        data["backbones"] = tuple(int(i) for i in data["backbones"])
    return data


def resolve_run_config(
    command: str,
    flags: Dict[str, Any],
    settings: Settings,
    config_file: Optional[str] = None,
) -> RunConfig:
    """Layer settings defaults, then the config file, then explicit flags"""
    values: Dict[str, Any] = {
        "threads": settings.threads,
        "host": settings.host,
        "port": settings.port,
    }
    if config_file:
        values.update(read_config_file(config_file))
    values.update({key: value for key, value in flags.items() if value is not None})
    values["command"] = command
    if values.get("chords") == "all":
        values["chords"] = None
    try:
        config = RunConfig(**values)
    except TypeError as e:
        raise ConfigError(f"Invalid configuration: {e}") from e
    return config.validate(settings)
