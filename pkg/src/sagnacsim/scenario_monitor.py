from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from .channels import ChannelKind
from .measures import bipartite_visibility, concurrence_pure_bipartite, concurrence_two_qubit
from .monitor import ZERO_PROBABILITY, conditional_two_qubit, distillation_p, monitored_vs_traced, no_jump_probability
from .scenario import Scenario, ScenarioType
from .shared import SagnacSimValueError
from .statealg import density_from_pure, purity

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .configtypes import SweepConfigFileT
    from .scenario import SweepConfig, SweepRow
    from .statealg import DensityMatrix
    from .tomo import StatisticT

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


def _pop_v(rho: DensityMatrix) -> float:
    return float(rho.matrix[1, 1].real)


def _concurrence(rho: DensityMatrix) -> float:
    return concurrence_two_qubit(rho)[0]


######################################################################
# Monitored decay of a single qubit


class ScenarioMonitorSingle(Scenario):
    """Excited population with the environment traced out versus post-selected on no jump."""

    scenario_type = ScenarioType.MONITOR_SINGLE
    qubits = 1
    allowed_channels = (ChannelKind.AMPLITUDE_DAMPING,)
    requires_pure = True

    def exact_row(self, p: float) -> SweepRow:
        """Traced and monitored populations and purities.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        probability = no_jump_probability(self.alpha, self.beta, p)

        # Nothing survives post-selection when the qubit starts excited and fully decays.
        if probability < ZERO_PROBABILITY:
            traced = self.evolved_state(p)
            return {"purity": purity(traced), "pop_V_traced": _pop_v(traced), "no_jump_probability": probability}

        record = monitored_vs_traced(self.alpha, self.beta, p)

        return {
            "purity": record.purity_traced,
            "pop_V_traced": record.pop_V_traced,
            "pop_V_monitored": record.pop_V_monitored,
            "purity_monitored": record.purity_monitored,
            "no_jump_probability": probability,
        }

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Traced population and purity of the reconstructed qubit."""
        return {"purity": purity, "pop_V_traced": _pop_v}


######################################################################
# Distillation by post-selection


class ScenarioDistillation(Scenario):
    """Concurrence of alpha|HH> + beta|VV> conditioned on both environments staying unexcited."""

    scenario_type = ScenarioType.DISTILLATION
    qubits = 2
    allowed_channels = (ChannelKind.AMPLITUDE_DAMPING,)
    requires_pure = True

    def __init__(self, config: SweepConfig, file_config: SweepConfigFileT | None = None) -> None:
        """Constructor.

        Args:
            config (SweepConfig): Sweep configuration.
            file_config (SweepConfigFileT | None): Configuration directives, for error reporting; defaults to None.
        """
        super().__init__(config, file_config)

        try:
            logger.info(f"Conditional state is maximally entangled at p={distillation_p(self.alpha, self.beta):.6g}")
        except SagnacSimValueError as err:
            logger.info(f"No distillation point: {err}")

    def tomography_state(self, p: float) -> DensityMatrix:
        """Post-selected photons are the ones measured."""
        return density_from_pure(conditional_two_qubit(self.alpha, self.beta, p))

    def exact_row(self, p: float) -> SweepRow:
        """Concurrence and coherence of the conditional state.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        psi = conditional_two_qubit(self.alpha, self.beta, p)
        rho = density_from_pure(psi)
        conc, lam = concurrence_two_qubit(rho)

        return {
            "concurrence": conc,
            "lambda": lam,
            "purity_monitored": purity(rho),
            "no_jump_probability": no_jump_probability(self.alpha, self.beta, p, qubits=2),
            "vis_bipartite": bipartite_visibility(rho),
            "c_se": concurrence_pure_bipartite(psi, (0,)),
        }

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Concurrence of the reconstructed conditional state."""
        return {"concurrence": _concurrence}


######################################################################
# Register scenario classes so they can be included in search list.

ScenarioMonitorSingle.register_scenario()
ScenarioDistillation.register_scenario()
