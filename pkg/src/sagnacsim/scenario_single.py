from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from .channels import apply_dilation, make_channel
from .measures import complementarity_triple, predictability, visibility
from .scenario import Scenario, ScenarioType
from .statealg import purity

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .scenario import SweepRow
    from .statealg import DensityMatrix
    from .tomo import StatisticT

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


def _pred_sq(rho: DensityMatrix) -> float:
    return predictability(rho) ** 2


def _vis_sq(rho: DensityMatrix) -> float:
    return visibility(rho) ** 2


def _cse_sq(rho: DensityMatrix) -> float:
    # The joint system-environment state is pure, so the marginal purity fixes C_SE.
    return max(0.0, 2 * (1 - purity(rho)))


######################################################################
# Complementarity of a single qubit


class ScenarioComplementaritySingle(Scenario):
    """P^2, V^2 and C_SE^2 of a qubit coupled to its environment by any channel."""

    scenario_type = ScenarioType.COMPLEMENTARITY_SINGLE
    qubits = 1
    requires_pure = True

    def exact_row(self, p: float) -> SweepRow:
        """Complementarity terms from the dilated pure state.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        (kind,) = self.channel_kinds
        joint = apply_dilation(make_channel(kind, p), self.initial_pure_state(), 0)
        triple = complementarity_triple(joint, 0)

        return {
            "purity": purity(self.evolved_state(p)),
            "pred_sq": triple.pred_sq,
            "vis_sq": triple.vis_sq,
            "cse_sq": triple.conc_sq,
            "complementarity_sum": triple.total,
        }

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:  # noqa: ARG002
        """Complementarity terms of the reconstructed qubit."""
        return {
            "purity": purity,
            "pred_sq": _pred_sq,
            "vis_sq": _vis_sq,
            "cse_sq": _cse_sq,
        }


######################################################################
# Register scenario class so it can be included in search list.

ScenarioComplementaritySingle.register_scenario()
