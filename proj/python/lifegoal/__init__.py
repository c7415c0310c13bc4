"""Goal-reaching probabilities with optimal life insurance purchase."""

import json
from os import PathLike

from ._lifegoal import InfeasibleScenario, Model

__all__ = ["InfeasibleScenario", "Model", "load", "solve"]


def solve(scenario):
    """Build a Model from a scenario dict (same keys as the CLI config files)."""
    return Model(json.dumps(scenario))


def load(path: "str | PathLike[str]"):
    with open(path) as fh:
        return Model(fh.read())
