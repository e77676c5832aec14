"""Service configuration: JSON file plus environment-variable overrides."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, replace
from pathlib import Path

from .llm import LlmConfig


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8080
    data_dir: str = "data"
    env_dir: str | None = None  # extra environment bundles next to the builtins
    static_dir: str | None = None  # built web UI, served at /
    max_depth: int = 4
    hint_reveal_probability: float = 0.5
    hint_timeout: float = 5.0
    hint_rng_seed: int | None = None
    llm: LlmConfig = field(default_factory=LlmConfig)


class ConfigError(Exception):
    pass


_ENV_OVERRIDES = {
    "PLANTUTOR_HOST": ("host", str),
    "PLANTUTOR_PORT": ("port", int),
    "PLANTUTOR_DATA_DIR": ("data_dir", str),
    "PLANTUTOR_ENV_DIR": ("env_dir", str),
    "PLANTUTOR_STATIC_DIR": ("static_dir", str),
    "PLANTUTOR_MAX_DEPTH": ("max_depth", int),
    "PLANTUTOR_HINT_P": ("hint_reveal_probability", float),
    "PLANTUTOR_HINT_TIMEOUT": ("hint_timeout", float),
    "PLANTUTOR_HINT_SEED": ("hint_rng_seed", int),
}

_LLM_ENV_OVERRIDES = {
    "PLANTUTOR_LLM_ENDPOINT": ("endpoint", str),
    "PLANTUTOR_LLM_MODEL": ("model", str),
    "PLANTUTOR_LLM_API_KEY_ENV": ("api_key_env", str),
    "PLANTUTOR_LLM_TIMEOUT": ("timeout", float),
    "PLANTUTOR_LLM_ENABLED": ("enabled", lambda v: v.lower() in ("1", "true", "yes")),
    "PLANTUTOR_LLM_TEMPERATURE": ("temperature", float),
}


def load_config(path: str | Path | None = None, environ: dict | None = None) -> AppConfig:
    environ = os.environ if environ is None else environ
    doc: dict = {}
    if path is not None:
        try:
            doc = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}")
        if not isinstance(doc, dict):
            raise ConfigError(f"{path}: config must be a JSON object")

    llm_doc = doc.pop("llm", {})
    known = set(AppConfig.__dataclass_fields__) - {"llm"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"{path}: unknown config keys: {', '.join(sorted(unknown))}")
    llm_unknown = set(llm_doc) - set(LlmConfig.__dataclass_fields__)
    if llm_unknown:
        raise ConfigError(f"{path}: unknown llm config keys: {', '.join(sorted(llm_unknown))}")

    config = AppConfig(**doc, llm=LlmConfig(**llm_doc))
    for var, (attr, cast) in _ENV_OVERRIDES.items():
        if var in environ:
            setattr(config, attr, cast(environ[var]))
    llm_updates = {
        attr: cast(environ[var])
        for var, (attr, cast) in _LLM_ENV_OVERRIDES.items()
        if var in environ
    }
    if llm_updates:
        config.llm = replace(config.llm, **llm_updates)
    return config
