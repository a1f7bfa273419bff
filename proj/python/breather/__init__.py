# SPDX-License-Identifier: Apache-2.0
"""Breather profiles for cylindrical and slab waveguides."""

import json
from pathlib import Path

from ._breather import BreatherError, bessel
from . import _breather

__all__ = ["BreatherError", "bessel", "load", "validate", "fundsol", "solve", "extend", "locate_d_star"]


def load(path):
    """Config text from a JSON file."""
    return Path(path).read_text()


def validate(config):
    return json.loads(_breather.validate(config))


def fundsol(config, K=None):
    return json.loads(_breather.fundsol(config, K))


def solve(config, **kwargs):
    out = _breather.solve(config, **kwargs)
    out["energy"] = json.loads(out["energy"])
    return out


def extend(config, profile, **kwargs):
    return _breather.extend(config, profile, **kwargs)


def locate_d_star(config, K=None, N=None):
    return _breather.locate_d_star(config, K, N)
