# This module contains all TypedDicts that describe configuration directives defined
# in the YAML configuration file. They are all defined here together because we cannot
# import annotations from `__future_` as is done in all the other modules.
# This is because `from __future__ import annotations` will break `validate_config_typed_dict`!
# https://github.com/python/cpython/issues/97727

from pathlib import Path
from typing import NotRequired, TypedDict

ConfigChannelT = str | list[str]  # kind name, or one kind name per qubit
ConfigPathT = str | Path  # may be a Jinja template

######################################################################
# Typed dictionaries to describe configuration files


class CommonConfigFileT(TypedDict):
    """Common elements of all configuration files."""

    # Captured by `--config` so errors can reference the file
    _config_file: Path | None


class SweepConfigFileT(CommonConfigFileT):
    """Structure of a sweep configuration file.

    Command line options of `sweep` are merged in before validation.
    """

    scenario: str
    channel: NotRequired[ConfigChannelT]

    # Initial state amplitudes (moduli) and phases in radians
    alpha: NotRequired[float]
    beta: NotRequired[float]
    alpha_phase: NotRequired[float]
    beta_phase: NotRequired[float]
    delta: NotRequired[float]

    # Weight of the pure state in the white-noise admixture
    pure_fraction: NotRequired[float]

    p_points: NotRequired[int]
    p_min: NotRequired[float]
    p_max: NotRequired[float]

    time_model: NotRequired[str]  # markov | rabi
    rate: NotRequired[float]
    t_max: NotRequired[float]

    exposure: NotRequired[float | None]
    mc_resamples: NotRequired[int]
    seed: NotRequired[int]

    output: NotRequired[ConfigPathT | None]
    xls_file: NotRequired[ConfigPathT | None]
