from __future__ import annotations

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import Enum, unique
from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from .channels import ChannelKind, KrausChannel, TimeModel, TimeModelVariant, apply_local, make_channel, p_of_time
from .shared import SagnacSimConfigError, SagnacSimRuntimeError, SagnacSimValueError, config_warning, is_sequence
from .statealg import (
    DensityMatrix,
    PureStateVector,
    density_from_pure,
    maximally_mixed,
    mix,
    single_qubit_state,
    two_qubit_state,
)
from .tomo import monte_carlo_statistics, settings_for_qubits, simulate_counts

if TYPE_CHECKING:
    from collections.abc import Mapping, Sequence

    from .configtypes import SweepConfigFileT
    from .tomo import StatisticT

# One sweep output row; keys are column names.
SweepRow = dict[str, float]

# Column order of sweep output. Scenarios emit a subset.
SWEEP_FIELDS = (
    "t",
    "p",
    "concurrence",
    "lambda",
    "gamma_witness",
    "witness_theta",
    "negativity",
    "purity",
    "pred_sq",
    "vis_sq",
    "cse_sq",
    "complementarity_sum",
    "pop_V_traced",
    "pop_V_monitored",
    "purity_monitored",
    "no_jump_probability",
    "vis_bipartite",
    "c_se",
    "c_s1e1",
    "c_s2e2",
    "c_e1e2",
    "c_n",
    "fidelity",
)

# Suffixes of the noisy pipeline columns.
MC_MEAN_SUFFIX = "_mc"
MC_STD_SUFFIX = "_mc_std"

DEFAULT_P_POINTS = 101
DEFAULT_MC_RESAMPLES = 20
DEFAULT_ALPHA = 0.5

# Rows must satisfy concurrence = max(0, lambda) to this tolerance.
ROW_TOLERANCE = 1e-12

# List of Scenario subclasses.
_SCENARIOS_CLS: list[type[Scenario]] = []

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


@unique
class ScenarioType(Enum):
    """Sweep scenarios; the value is the configuration name."""

    COMPLEMENTARITY_SINGLE = "complementarity_single"
    MONITOR_SINGLE = "monitor_single"
    ESD_TWO_QUBIT = "esd_two_qubit"
    WITNESS_TWO_QUBIT = "witness_two_qubit"
    DEPHASING_TWO_QUBIT = "dephasing_two_qubit"
    PURITY_TWO_QUBIT = "purity_two_qubit"
    DISTILLATION = "distillation"
    TOMO_DEMO = "tomo_demo"


######################################################################
# Sweep configuration


@dataclass(frozen=True)
class SweepConfig:
    """Validated sweep configuration."""

    scenario: ScenarioType
    channels: tuple[ChannelKind, ...]  # empty for the scenario default
    alpha: complex
    beta: complex
    delta: float = 0.0
    pure_fraction: float = 1.0
    p_points: int = DEFAULT_P_POINTS
    p_min: float = 0.0
    p_max: float = 1.0
    time_model: TimeModel | None = None
    t_max: float | None = None
    exposure: float | None = None
    mc_resamples: int = DEFAULT_MC_RESAMPLES
    seed: int = 0
    output: Path | None = None
    xls_file: Path | None = None

    @classmethod
    def from_config(cls, config: SweepConfigFileT) -> SweepConfig:  # noqa: C901, PLR0912
        """Build from validated configuration directives.

        Args:
            config (SweepConfigFileT): Configuration directives, command line options merged.

        Returns:
            SweepConfig

        Raises:
            SagnacSimConfigError: Invalid values or combinations.
        """

        def _fail(message: str, directive: str) -> SagnacSimConfigError:
            return SagnacSimConfigError(message, config, directive)

        try:
            scenario = ScenarioType(config["scenario"])
        except ValueError:
            raise _fail(f"Unknown scenario; expected one of {', '.join(s.value for s in ScenarioType)}.", "scenario") from None

        channel_names = config.get("channel") or []
        if isinstance(channel_names, str):
            channel_names = [channel_names]
        assert is_sequence(channel_names)

        try:
            channels = tuple(ChannelKind.from_name(name) for name in channel_names)
        except SagnacSimValueError as err:
            raise _fail(str(err), "channel") from None

        alpha_mod = config.get("alpha")
        beta_mod = config.get("beta")

        if alpha_mod is None and beta_mod is None:
            alpha_mod = DEFAULT_ALPHA
        if alpha_mod is not None and not 0 <= alpha_mod <= 1:
            raise _fail("Amplitude modulus must be in [0, 1].", "alpha")
        if beta_mod is not None and not 0 <= beta_mod <= 1:
            raise _fail("Amplitude modulus must be in [0, 1].", "beta")
        if beta_mod is None:
            assert alpha_mod is not None
            beta_mod = math.sqrt(1 - alpha_mod**2)
        if alpha_mod is None:
            alpha_mod = math.sqrt(1 - beta_mod**2)
        if abs(alpha_mod**2 + beta_mod**2 - 1) > 1e-10:  # noqa: PLR2004
            raise _fail("Amplitudes are not normalized: alpha^2 + beta^2 != 1.", "beta")

        alpha = alpha_mod * np.exp(1j * config.get("alpha_phase", 0.0))
        beta = beta_mod * np.exp(1j * config.get("beta_phase", 0.0))

        pure_fraction = config.get("pure_fraction", 1.0)
        if not 0 <= pure_fraction <= 1:
            raise _fail("Must be in [0, 1].", "pure_fraction")

        p_points = config.get("p_points", DEFAULT_P_POINTS)
        if p_points < 2:  # noqa: PLR2004
            raise _fail("At least 2 grid points are required.", "p_points")

        p_min = config.get("p_min", 0.0)
        p_max = config.get("p_max", 1.0)
        if not 0 <= p_min < p_max <= 1:
            raise _fail("Grid must satisfy 0 <= p_min < p_max <= 1.", "p_max")

        time_model = None
        t_max = None
        if config.get("time_model"):
            try:
                variant = TimeModelVariant(config["time_model"])
            except ValueError:
                raise _fail(f"Expected one of {', '.join(v.value for v in TimeModelVariant)}.", "time_model") from None
            try:
                time_model = TimeModel(variant, config.get("rate", 0.0))
            except SagnacSimValueError as err:
                raise _fail(str(err), "rate") from None
            t_max = config.get("t_max")
            if t_max is None or not t_max > 0:
                raise _fail("A positive `t_max` is required with a time model.", "t_max")
            for directive in ("p_min", "p_max"):
                if directive in config:
                    config_warning("Ignored when a time model is set.", config, directive)

        exposure = config.get("exposure")
        if exposure is not None and not exposure > 0:
            raise _fail("Must be positive.", "exposure")

        mc_resamples = config.get("mc_resamples", DEFAULT_MC_RESAMPLES)
        if mc_resamples < 2:  # noqa: PLR2004
            raise _fail("At least 2 resamples are required.", "mc_resamples")

        output = config.get("output")
        xls_file = config.get("xls_file")

        return cls(
            scenario=scenario,
            channels=channels,
            alpha=complex(alpha),
            beta=complex(beta),
            delta=config.get("delta", 0.0),
            pure_fraction=pure_fraction,
            p_points=p_points,
            p_min=p_min,
            p_max=p_max,
            time_model=time_model,
            t_max=t_max,
            exposure=exposure,
            mc_resamples=mc_resamples,
            seed=config.get("seed", 0),
            output=Path(output) if output else None,
            xls_file=Path(xls_file) if xls_file else None,
        )

    def grid(self) -> list[tuple[float | None, float]]:
        """Sweep points as (t, p); t is None without a time model.

        Returns:
            list[tuple[float | None, float]]
        """
        if self.time_model is not None:
            assert self.t_max is not None
            return [(float(t), p_of_time(self.time_model, float(t))) for t in np.linspace(0, self.t_max, self.p_points)]

        return [(None, float(p)) for p in np.linspace(self.p_min, self.p_max, self.p_points)]


######################################################################
# Scenario base class


class Scenario(ABC):
    """Sweep scenario base class.

    Subclasses compute one exact row per grid point; the noisy pipeline is shared.
    """

    # Defined by subclasses
    scenario_type: ScenarioType | None = None
    qubits: int = 1
    default_channel: ChannelKind = ChannelKind.AMPLITUDE_DAMPING
    allowed_channels: tuple[ChannelKind, ...] = tuple(ChannelKind)
    requires_pure: bool = False  # scenario needs a pure initial state (dilations)
    requires_exposure: bool = False

    def __init__(self, config: SweepConfig, file_config: SweepConfigFileT | None = None) -> None:
        """Constructor.

        Args:
            config (SweepConfig): Sweep configuration.
            file_config (SweepConfigFileT | None): Configuration directives, for error reporting; defaults to None.

        Raises:
            SagnacSimConfigError: Scenario does not support the configuration.
        """
        self.config = config
        self.file_config = file_config
        self.channel_kinds = self._resolve_channels()

        if self.requires_pure and config.pure_fraction < 1:
            raise SagnacSimConfigError(f"Scenario '{self.name}' requires a pure initial state.", file_config, "pure_fraction")

        if self.requires_exposure and config.exposure is None:
            raise SagnacSimConfigError(f"Scenario '{self.name}' requires an exposure.", file_config, "exposure")

    def __repr__(self) -> str:
        """Return a string representation of the object for debugging purposes.

        Returns:
            str
        """
        channels = ", ".join(kind.value for kind in self.channel_kinds)
        return f"{self.__class__.__name__}({channels})"

    ######################################################################
    # Class methods

    @classmethod
    def register_scenario(cls) -> None:
        """Register scenario class."""
        _SCENARIOS_CLS.append(cls)

    @classmethod
    def get_scenario_class(cls, scenario_type: ScenarioType) -> type[Scenario]:
        """Get scenario class for a scenario type.

        Args:
            scenario_type (ScenarioType): Scenario type.

        Returns:
            type[Scenario]
        """
        assert len(_SCENARIOS_CLS) > 0

        for scenariocls in _SCENARIOS_CLS:
            if scenariocls.scenario_type is scenario_type:
                return scenariocls

        raise SagnacSimRuntimeError(f"No scenario class registered for '{scenario_type.value}'.")

    ######################################################################
    # Properties

    @property
    def name(self) -> str:
        """Configuration name of the scenario."""
        assert self.scenario_type is not None
        return self.scenario_type.value

    @property
    def alpha(self) -> complex:
        """Amplitude of the ground component."""
        return self.config.alpha

    @property
    def beta(self) -> complex:
        """Amplitude of the excited component, relative phase applied."""
        return self.config.beta * np.exp(1j * self.config.delta)

    ######################################################################
    # Helpers

    def _resolve_channels(self) -> tuple[ChannelKind, ...]:
        kinds = self.config.channels or (self.default_channel,)

        if len(kinds) == 1:
            kinds = kinds * self.qubits
        elif len(kinds) != self.qubits:
            raise SagnacSimConfigError(
                f"Scenario '{self.name}' needs 1 or {self.qubits} channels; got {len(kinds)}.", self.file_config, "channel"
            )

        for kind in kinds:
            if kind not in self.allowed_channels:
                allowed = ", ".join(k.value for k in self.allowed_channels)
                raise SagnacSimConfigError(f"Scenario '{self.name}' supports channels: {allowed}.", self.file_config, "channel")

        return kinds

    def channels(self, p: float) -> list[KrausChannel]:
        """Kraus sets at `p`, one per qubit."""
        return [make_channel(kind, p) for kind in self.channel_kinds]

    def initial_pure_state(self) -> PureStateVector:
        """Pure initial state before white noise is admixed."""
        if self.qubits == 1:
            return single_qubit_state(self.alpha, self.beta)
        return two_qubit_state(self.alpha, self.beta)

    def initial_state(self) -> DensityMatrix:
        """Initial state, v |psi><psi| + (1 - v) I/d."""
        psi = self.initial_pure_state()
        rho = density_from_pure(psi)

        if self.config.pure_fraction < 1:
            rho = mix(rho, maximally_mixed(psi.layout), self.config.pure_fraction)

        return rho

    def evolved_state(self, p: float) -> DensityMatrix:
        """Initial state after the local channels."""
        return apply_local(self.channels(p), self.initial_state())

    def tomography_state(self, p: float) -> DensityMatrix:
        """State whose simulated counts feed the noisy pipeline."""
        return self.evolved_state(p)

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Statistics of the reconstructed state by output field."""
        return {}

    ######################################################################
    # Rows

    @abstractmethod
    def exact_row(self, p: float) -> SweepRow:
        """Exact values of the scenario fields at `p`.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow: Without `t` and `p`.
        """

    def noisy_row(self, p: float, row_index: int) -> SweepRow:
        """Monte-Carlo mean and standard deviation of the noisy fields at `p`.

        Counts are simulated with seed (seed, row_index) and resampled from there.

        Args:
            p (float): Transition probability.
            row_index (int): Grid index.

        Returns:
            SweepRow
        """
        assert self.config.exposure is not None

        statistics = self.noisy_statistics(p)
        if not statistics:
            return {}

        rho = self.tomography_state(p)
        settings = settings_for_qubits(len(rho.layout))
        seed = (self.config.seed, row_index)

        records = simulate_counts(rho, settings, self.config.exposure, seed)
        estimates = monte_carlo_statistics(records, self.config.mc_resamples, statistics, seed, dim=rho.dim)

        row: SweepRow = {}
        for name, (mean, std) in estimates.items():
            row[name + MC_MEAN_SUFFIX] = mean
            row[name + MC_STD_SUFFIX] = std

        return row

    def run(self) -> list[SweepRow]:
        """Compute every row of the sweep, ordered by grid point.

        Returns:
            list[SweepRow]
        """
        logger.info(f"Running scenario '{self.name}' {self!r} over {self.config.p_points} points")

        rows = []

        for row_index, (t, p) in enumerate(self.config.grid()):
            row: SweepRow = {} if t is None else {"t": t}
            row["p"] = p

            try:
                row.update(self.exact_row(p))
                if self.config.exposure is not None:
                    row.update(self.noisy_row(p, row_index))
            except SagnacSimValueError as err:
                raise SagnacSimRuntimeError(f"Scenario '{self.name}' at p={p:.6g}: {err}") from err

            validate_row(row)
            rows.append(row)

            logger.debug(f"Row {row_index}: p={p:.6g}")

        logger.info(f"Scenario '{self.name}' produced {len(rows)} rows")

        return rows


######################################################################
# Module public


def validate_row(row: SweepRow) -> None:
    """Check row invariants: finite values and concurrence = max(0, lambda).

    Args:
        row (SweepRow): Row to check.

    Raises:
        SagnacSimRuntimeError: Invariant violated.
    """
    for name, value in row.items():
        if not math.isfinite(value):
            raise SagnacSimRuntimeError(f"Row field '{name}' is not finite: {value!r}.")

    if "concurrence" in row and "lambda" in row and abs(row["concurrence"] - max(0.0, row["lambda"])) > ROW_TOLERANCE:
        raise SagnacSimRuntimeError(f"Row at p={row['p']:.6g} has concurrence != max(0, lambda).")


def row_columns(rows: Sequence[SweepRow]) -> list[str]:
    """Columns present in any row, in output order.

    Noisy columns follow the field they estimate.

    Args:
        rows (Sequence[SweepRow]): Rows.

    Returns:
        list[str]
    """
    present = {key for row in rows for key in row}
    columns = []

    for name in SWEEP_FIELDS:
        columns.extend(col for col in (name, name + MC_MEAN_SUFFIX, name + MC_STD_SUFFIX) if col in present)

    unknown = present - set(columns)
    if unknown:
        raise SagnacSimRuntimeError(f"Unknown row fields: {', '.join(sorted(unknown))}.")

    return columns
