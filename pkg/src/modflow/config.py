"""Run configuration: JSON file, environment fallback, command-line overrides."""
from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .errors import ConfigError

ENV_VAR = "MODFLOW_CONFIG"


@dataclass
class RunConfig:
    seed: int = 0
    threads: int | None = None
    tolerance: float | None = None
    out: str | None = None
    # suite parameters
    geometry_samples: int = 10000
    flow_samples: int = 10000
    psdo_L: float = 64.0
    psdo_N: int = 4096
    by_betas: list[float] = field(default_factory=lambda: [1.0, 5.0, 20.0])
    by_n_max: int = 2
    freefield_quick: bool = False
    kms_eps: float = 1e-3
    kms_window: float = 40.0
    radial_r_max: float = 51.2
    radial_N: int = 1023

    def __post_init__(self):
        self.validate()

    def validate(self):
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigError("tolerance must be strictly positive")
        if self.threads is not None and self.threads < 1:
            raise ConfigError("threads must be at least 1")
        for name in ("kms_eps", "kms_window", "psdo_L", "radial_r_max"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be strictly positive")
        for name in ("psdo_N", "radial_N", "flow_samples", "geometry_samples", "by_n_max"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be a positive integer")
        if not self.by_betas or any(not b > 0 for b in self.by_betas):
            raise ConfigError("by_betas must be a non-empty list of positive numbers")

    @property
    def workers(self) -> int:
        return self.threads or os.cpu_count() or 1

    def digest(self) -> str:
        """Hash of the settings that influence results (threads and out excluded)."""
        d = asdict(self)
        d.pop("threads")
        d.pop("out")
        blob = json.dumps(d, sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


def load_config(path: str | None = None, overrides: dict | None = None) -> RunConfig:
    """Read a JSON config (explicit path, else $MODFLOW_CONFIG, else defaults) and apply overrides."""
    path = path or os.environ.get(ENV_VAR)
    data: dict = {}
    if path:
        p = Path(path)
        if not p.is_file():
            raise ConfigError(f"config file not found: {path}")
        try:
            data = json.loads(p.read_text())
        except json.JSONDecodeError as e:
            raise ConfigError(f"invalid JSON in {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for k, v in (overrides or {}).items():
        if v is not None:
            data[k] = v
    try:
        return RunConfig(**data)
    except TypeError as e:
        raise ConfigError(str(e)) from e
