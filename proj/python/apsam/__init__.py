"""Determinant-trajectory stability assessment for 2x2 converter admittances."""

import json
import os

from . import _apsam
from ._apsam import ApsamError, ConfigParseError, demo_names, sigma_at_crossing

__all__ = [
    "ApsamError",
    "ConfigParseError",
    "analyze",
    "batch",
    "demo_config",
    "demo_names",
    "intervals",
    "sigma_at_crossing",
    "sweep_csv",
    "verify",
]


def _text(config):
    return config if isinstance(config, str) else json.dumps(config)


def demo_config(name, **overrides):
    """A minimal configuration analysing a named demonstration system."""
    config = {"schema_version": 1, "device": {"demo": name}}
    config.update(overrides)
    return config


def analyze(config, base_dir="", scenario=""):
    """Stability verdict, winding and critical-pole estimate as a dict."""
    return json.loads(_apsam.analyze_json(_text(config), os.fspath(base_dir), scenario))


def verify(config, base_dir="", scenario=""):
    """Cross-check against eigenvalue loci and the exact closed-loop zeros."""
    return json.loads(_apsam.verify_json(_text(config), os.fspath(base_dir), scenario))


def intervals(config, base_dir="", scenario=""):
    """Critical-pole error at each configured sweep interval."""
    return json.loads(_apsam.intervals_json(_text(config), os.fspath(base_dir), scenario))


def batch(config, base_dir=""):
    """Analyse every scenario; failures are reported per scenario."""
    return json.loads(_apsam.batch_json(_text(config), os.fspath(base_dir)))


def sweep_csv(config, base_dir="", scenario=""):
    """Swept admittance table of a closed-form device, as CSV text."""
    return _apsam.sweep_csv(_text(config), os.fspath(base_dir), scenario)
