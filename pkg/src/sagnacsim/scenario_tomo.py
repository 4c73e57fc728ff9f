from __future__ import annotations

import logging
from typing import TYPE_CHECKING

from .measures import concurrence_two_qubit
from .scenario import Scenario, ScenarioType
from .statealg import fidelity, purity
from .tomo import fidelity_with

if TYPE_CHECKING:
    from collections.abc import Mapping

    from .scenario import SweepRow
    from .statealg import DensityMatrix
    from .tomo import StatisticT

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


def _concurrence(rho: DensityMatrix) -> float:
    return concurrence_two_qubit(rho)[0]


######################################################################
# Tomography of the evolved pair


class ScenarioTomoDemo(Scenario):
    """Reconstruct the evolved pair from simulated counts at every grid point."""

    scenario_type = ScenarioType.TOMO_DEMO
    qubits = 2
    requires_exposure = True

    def exact_row(self, p: float) -> SweepRow:
        """Purity and concurrence of the true state; fidelity with itself is 1.

        Args:
            p (float): Transition probability.

        Returns:
            SweepRow
        """
        rho = self.evolved_state(p)

        return {"purity": purity(rho), "concurrence": _concurrence(rho), "fidelity": fidelity(rho, rho)}

    def noisy_statistics(self, p: float) -> Mapping[str, StatisticT]:
        """Purity, concurrence and fidelity with the true state."""
        return {"purity": purity, "concurrence": _concurrence, "fidelity": fidelity_with(self.evolved_state(p))}


######################################################################
# Register scenario class so it can be included in search list.

ScenarioTomoDemo.register_scenario()
