"""Sampling experiments: splitting and random-batch Hamiltonian Monte Carlo.

Thin wrapper over the compiled core. Configs and manifests are plain dicts;
the JSON schema matches what the ``shmc`` command-line tool accepts.
"""

import json as _json

from shmc._core import (
    ConfigError,
    RunError,
    compare_manifests,
    preset_ids,
    semicircle_bin_mass,
    version,
)
from shmc._core import preset_config_text as _preset_config_text
from shmc._core import run_config_text as _run_config_text
from shmc._core import validate_config_text as _validate_config_text


def _as_text(config):
    if isinstance(config, str):
        return config
    return _json.dumps(config)


def preset_config(preset_id):
    """Resolved config dict for one of the canned experiments."""
    return _json.loads(_preset_config_text(preset_id))


def validate_config(config):
    """Validate a config (dict or JSON text); returns the resolved dict."""
    return _json.loads(_validate_config_text(_as_text(config)))


def run(config):
    """Execute an experiment config (dict or JSON text); returns the manifest dict."""
    return _json.loads(_run_config_text(_as_text(config)))


__all__ = [
    "ConfigError",
    "RunError",
    "compare_manifests",
    "preset_config",
    "preset_ids",
    "run",
    "semicircle_bin_mass",
    "validate_config",
    "version",
]
