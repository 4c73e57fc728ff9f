from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from .channels import ChannelKind, apply_dilation
from .measures import (
    analytic_curves,
    bipartite_visibility,
    concurrence_two_qubit,
    multipartite_concurrence,
    negativity,
    pair_concurrence,
    system_environment_concurrence,
    witness_best_gamma,
    wootters_lambda,
)
from .scenario import Scenario, ScenarioType
from .statealg import purity

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .configtypes import SweepConfigFileT
    from .scenario import SweepConfig, SweepRow
    from .statealg import DensityMatrix, PureStateVector
    from .tomo import StatisticT

# Layout positions of the dilated four-qubit state: S1, S2, E1, E2.
S1, S2, E1, E2 = 0, 1, 2, 3

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


def _concurrence(rho: DensityMatrix) -> float:
    return concurrence_two_qubit(rho)[0]


def _gamma(rho: DensityMatrix) -> float:
    return witness_best_gamma(rho)[1]


class _TwoQubitScenario(Scenario):
    """Two qubits, each coupled to its own environment."""

    qubits = 2

    def dilated_state(self, p: float) -> PureStateVector:
        """Pure S1 S2 E1 E2 state after both local dilations.

        Args:
            p (float): Transition probability.

        Returns:
            PureStateVector
        """
        psi = self.initial_pure_state()

        for slot, ch in enumerate(self.channels(p)):
            psi = apply_dilation(ch, psi, slot)

        return psi

    @property
    def is_pure(self) -> bool:
        """True when no white noise is admixed, so the dilated state is pure."""
        return self.config.pure_fraction == 1


######################################################################
# Entanglement sudden death and birth


class ScenarioESD(_TwoQubitScenario):
    """Concurrence of alpha|HH> + beta|VV> under local channels, with the environment pair concurrences."""

    scenario_type = ScenarioType.ESD_TWO_QUBIT

    def __init__(self, config: SweepConfig, file_config: SweepConfigFileT | None = None) -> None:
        """Constructor.

        Args:
            config (SweepConfig): Sweep configuration.
            file_config (SweepConfigFileT | None): Configuration directives, for error reporting; defaults to None.
        """
        super().__init__(config, file_config)

        if self.is_pure and all(kind is ChannelKind.AMPLITUDE_DAMPING for kind in self.channel_kinds):
            curves = analytic_curves(ChannelKind.AMPLITUDE_DAMPING, self.alpha, self.beta, 0.0)
            if curves.p_esd is None:
                logger.info("No sudden death: concurrence vanishes only at p=1")
            else:
                logger.info(f"Sudden death at p={curves.p_esd:.6g}, sudden birth at p={curves.p_esb:.6g}")

    def exact_row(self, p: float) -> SweepRow:
        """Two-qubit entanglement and, for pure input, the system-environment split.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        rho = self.evolved_state(p)
        conc, lam = concurrence_two_qubit(rho)

        row: SweepRow = {
            "concurrence": conc,
            "lambda": lam,
            "negativity": negativity(rho),
            "purity": purity(rho),
            "vis_bipartite": bipartite_visibility(rho),
        }

        if self.is_pure:
            joint = self.dilated_state(p)
            row["c_se"] = system_environment_concurrence(joint, (S1, S2))
            row["c_s1e1"] = pair_concurrence(joint, (S1, E1))
            row["c_e1e2"] = pair_concurrence(joint, (E1, E2))

        return row

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Concurrence and purity of the reconstructed pair."""
        return {"concurrence": _concurrence, "purity": purity}


######################################################################
# Entanglement witness


class ScenarioWitness(_TwoQubitScenario):
    """Witness Gamma at the optimal phase compared with Lambda."""

    scenario_type = ScenarioType.WITNESS_TWO_QUBIT

    def exact_row(self, p: float) -> SweepRow:
        """Concurrence, Lambda and the witness at its optimal phase.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        rho = self.evolved_state(p)
        conc, lam = concurrence_two_qubit(rho)
        theta, gamma = witness_best_gamma(rho)

        return {"concurrence": conc, "lambda": lam, "gamma_witness": gamma, "witness_theta": theta}

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Concurrence, Lambda and witness of the reconstructed pair."""
        return {"concurrence": _concurrence, "lambda": wootters_lambda, "gamma_witness": _gamma}


######################################################################
# Dual dephasing


class ScenarioDephasing(_TwoQubitScenario):
    """Coherence loss under dual dephasing; entanglement moves into a four-party GHZ-type state."""

    scenario_type = ScenarioType.DEPHASING_TWO_QUBIT
    default_channel = ChannelKind.DEPHASING
    allowed_channels = (ChannelKind.DEPHASING,)

    def exact_row(self, p: float) -> SweepRow:
        """Two-qubit concurrence and, for pure input, the four-party concurrences.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        rho = self.evolved_state(p)
        conc, lam = concurrence_two_qubit(rho)

        row: SweepRow = {"concurrence": conc, "lambda": lam, "vis_bipartite": bipartite_visibility(rho)}

        if self.is_pure:
            joint = self.dilated_state(p)
            row["c_se"] = system_environment_concurrence(joint, (S1, S2))
            row["c_s1e1"] = pair_concurrence(joint, (S1, E1))
            row["c_s2e2"] = pair_concurrence(joint, (S2, E2))
            row["c_n"] = multipartite_concurrence(joint)

        return row

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Concurrence and two-particle coherence of the reconstructed pair."""
        return {"concurrence": _concurrence, "vis_bipartite": bipartite_visibility}


######################################################################
# Purity evolution


class ScenarioPurity(_TwoQubitScenario):
    """Purity of the evolved pair."""

    scenario_type = ScenarioType.PURITY_TWO_QUBIT

    def exact_row(self, p: float) -> SweepRow:
        """Purity and concurrence.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        rho = self.evolved_state(p)
        conc, lam = concurrence_two_qubit(rho)

        return {"purity": purity(rho), "concurrence": conc, "lambda": lam}

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Purity of the reconstructed pair."""
        return {"purity": purity}


######################################################################
# Register scenario classes so they can be included in search list.

ScenarioESD.register_scenario()
ScenarioWitness.register_scenario()
ScenarioDephasing.register_scenario()
ScenarioPurity.register_scenario()
