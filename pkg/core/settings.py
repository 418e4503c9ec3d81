"""config.yaml loading with .env overrides."""

import copy
import logging
import os
from typing import Optional

import yaml
from dotenv import find_dotenv, load_dotenv

logger = logging.getLogger(__name__)

DEFAULTS = {
    'matrices': {'mode': 'diagonal-first'},
    'numcheck': {'seed': 1, 'bound': 5, 'trials': 20},
    'hilbert': {'variant': 'auto', 'order': 8},
    'catalog': {'path': None},
    'workers': 4,
    'reports': {'dir': 'reports'},
    'logging': {'level': 'INFO', 'file': 'logs/tracealg.log'},
}


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def load_config(config_path: Optional[str] = "config.yaml") -> dict:
    """Built-in defaults, overridden by the config file, overridden by the environment.

    TRACEALG_CONFIG replaces ``config_path``; TRACEALG_WORKERS sets the pool
    size. A missing config file only means defaults.
    """
    load_dotenv(find_dotenv(usecwd=True))
    config_path = os.getenv("TRACEALG_CONFIG", config_path)
    config = copy.deepcopy(DEFAULTS)
    if config_path and os.path.exists(config_path):
        with open(config_path) as f:
            config = _merge(config, yaml.safe_load(f) or {})
        config['_path'] = os.path.abspath(config_path)
    else:
        logger.debug(f"[settings] no config at {config_path}, using defaults")
    workers = os.getenv("TRACEALG_WORKERS")
    if workers:
        try:
            config['workers'] = max(1, int(workers))
        except ValueError:
            logger.warning(f"[settings] ignoring TRACEALG_WORKERS={workers!r}")
    return config


def resolve_path(config: dict, path: str) -> str:
    """Relative paths in the config are relative to the config file."""
    if os.path.isabs(path) or '_path' not in config:
        return path
    return os.path.join(os.path.dirname(config['_path']), path)
