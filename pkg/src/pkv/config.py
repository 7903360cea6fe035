"""Run configuration with CLI > environment (PKV_) > file > default precedence."""

from __future__ import annotations

import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping, Optional

from pkv.cpc import GranularityLevel

ENV_PREFIX = "PKV_"


@dataclass
class Config:
    level: GranularityLevel = GranularityLevel.MAIN_GROUP
    max_phrase_len: int = 5
    min_phrase_score: float = 1.0
    min_doc_freq: int = 2
    stopword_path: Optional[str] = None
    port: int = 8000
    cors_origin: Optional[str] = None


_PARSERS = {
    "level": GranularityLevel.from_name,
    "max_phrase_len": int,
    "min_phrase_score": float,
    "min_doc_freq": int,
    "stopword_path": str,
    "port": int,
    "cors_origin": str,
}


def parse_config_file(path: str | Path) -> dict[str, str]:
    """key=value lines, '#' comments; unknown keys rejected."""
    values: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text("utf-8").splitlines(), 1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ValueError(f"{path}:{lineno}: expected key=value")
        key, value = stripped.split("=", 1)
        key = key.strip()
        if key not in _PARSERS:
            raise ValueError(f"{path}:{lineno}: unknown config key {key!r}")
        values[key] = value.strip()
    return values


def resolve_config(
    cli_values: Mapping[str, Any] | None = None,
    config_path: str | Path | None = None,
    env: Mapping[str, str] | None = None,
) -> Config:
    """Merge the three sources onto defaults. cli_values entries of None are
    treated as unset so argparse defaults don't mask lower layers."""
    if env is None:
        env = os.environ
    merged: dict[str, Any] = {}
    if config_path is not None:
        for key, raw in parse_config_file(config_path).items():
            merged[key] = _PARSERS[key](raw)
    for f in fields(Config):
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is not None:
            merged[f.name] = _PARSERS[f.name](raw)
    if cli_values:
        for key, value in cli_values.items():
            if value is not None:
                if key not in _PARSERS:
                    raise ValueError(f"unknown config key {key!r}")
                merged[key] = value
    return Config(**merged)
