"""Environment monitoring: filtering, no-jump evolution and distillation by post-selection."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .channels import ChannelKind, KrausChannel, apply_channel, check_p, check_qubit_slot, make_channel
from .shared import SagnacSimValueError
from .statealg import (
    DensityMatrix,
    PureStateVector,
    check_amplitudes,
    density_from_pure,
    lift_operator,
    purity,
    single_qubit_state,
)

# Outcomes below this probability have no conditional state.
ZERO_PROBABILITY = 1e-14

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Domain types


@dataclass(frozen=True)
class FilterOutcome:
    """State conditioned on one environment outcome and the probability of that outcome."""

    outcome_index: int
    conditional_state: DensityMatrix | None  # None when the outcome cannot occur
    probability: float

    @property
    def defined(self) -> bool:
        """False for zero-probability outcomes."""
        return self.conditional_state is not None


@dataclass(frozen=True)
class MonitoringRecord:
    """Excited-state population and purity with and without monitoring the environment."""

    pop_V_traced: float
    pop_V_monitored: float
    purity_traced: float
    purity_monitored: float


######################################################################
# Module public


def filter_outcomes(ch: KrausChannel, rho: DensityMatrix, target: int) -> list[FilterOutcome]:
    """Condition a state on each environment outcome of a channel.

    Args:
        ch (KrausChannel): Channel; one outcome per Kraus operator.
        rho (DensityMatrix): State.
        target (int): Qubit position in the layout.

    Returns:
        list[FilterOutcome]: In Kraus operator order.
    """
    check_qubit_slot(rho.layout, target)

    outcomes = []

    for idx, op in enumerate(ch.operators):
        m = lift_operator(op, rho.layout, target)
        unnormalized = m @ rho.matrix @ m.conj().T
        probability = float(np.trace(unnormalized).real)

        if probability < ZERO_PROBABILITY:
            logger.debug(f"{ch!r}: outcome {idx} has probability {probability:.3g}; conditional state undefined")
            outcomes.append(FilterOutcome(idx, None, max(probability, 0.0)))
        else:
            outcomes.append(FilterOutcome(idx, DensityMatrix(unnormalized / probability, rho.layout), probability))

    return outcomes


def no_jump_probability(alpha: complex, beta: complex, p: float, qubits: int = 1) -> float:
    """Probability that no excitation reaches the environment.

    Args:
        alpha (complex): Amplitude of the ground component.
        beta (complex): Amplitude of the excited component.
        p (float): Transition probability.
        qubits (int): 1 for alpha|H> + beta|V>, 2 for alpha|HH> + beta|VV> under dual damping.

    Returns:
        float
    """
    check_amplitudes(alpha, beta)
    p = check_p(p)

    if qubits not in (1, 2):
        raise SagnacSimValueError(f"No-jump probability is defined for one or two qubits; got {qubits}.")

    return abs(alpha) ** 2 + abs(beta) ** 2 * (1 - p) ** qubits


def no_jump_single(alpha: complex, beta: complex, p: float) -> PureStateVector:
    """State conditioned on the environment staying unexcited under amplitude damping.

    Args:
        alpha (complex): Amplitude of |H>.
        beta (complex): Amplitude of |V>.
        p (float): Transition probability.

    Returns:
        PureStateVector: (alpha|H> + beta sqrt(1-p)|V>) normalized.
    """
    psi = single_qubit_state(alpha, beta)
    no_jump = make_channel(ChannelKind.AMPLITUDE_DAMPING, p).operators[0]

    v = no_jump @ psi.amplitudes
    norm = np.linalg.norm(v)

    if norm**2 < ZERO_PROBABILITY:
        raise SagnacSimValueError(f"No-jump outcome has zero probability at p={p}.")

    return PureStateVector(v / norm, (2,))


def monitored_vs_traced(alpha: complex, beta: complex, p: float) -> MonitoringRecord:
    """Compare the environment-traced state with the no-jump conditional state.

    Args:
        alpha (complex): Amplitude of |H>.
        beta (complex): Amplitude of |V>.
        p (float): Transition probability.

    Returns:
        MonitoringRecord
    """
    rho = density_from_pure(single_qubit_state(alpha, beta))
    traced = apply_channel(make_channel(ChannelKind.AMPLITUDE_DAMPING, p), rho, 0)
    monitored = density_from_pure(no_jump_single(alpha, beta, p))

    return MonitoringRecord(
        pop_V_traced=float(traced.matrix[1, 1].real),
        pop_V_monitored=float(monitored.matrix[1, 1].real),
        purity_traced=purity(traced),
        purity_monitored=purity(monitored),
    )


def conditional_two_qubit(alpha: complex, beta: complex, p: float) -> PureStateVector:
    """State of alpha|HH> + beta|VV> conditioned on both environments staying unexcited.

    Args:
        alpha (complex): Amplitude of |HH>.
        beta (complex): Amplitude of |VV>.
        p (float): Transition probability of each local amplitude damping.

    Returns:
        PureStateVector: (alpha|HH> + beta (1-p)|VV>) normalized.
    """
    probability = no_jump_probability(alpha, beta, p, qubits=2)

    if probability < ZERO_PROBABILITY:
        raise SagnacSimValueError(f"No-jump outcome has zero probability at p={p}.")

    amplitudes = np.array([alpha, 0, 0, beta * (1 - p)], dtype=complex) / math.sqrt(probability)

    return PureStateVector(amplitudes, (2, 2))


def distillation_p(alpha: complex, beta: complex) -> float:
    """Transition probability at which the conditional two-qubit state is maximally entangled.

    Args:
        alpha (complex): Amplitude of |HH>.
        beta (complex): Amplitude of |VV>.

    Returns:
        float: 1 - |alpha/beta|.
    """
    check_amplitudes(alpha, beta)

    if abs(alpha) >= abs(beta):
        raise SagnacSimValueError("Post-selection cannot enhance entanglement when |alpha| >= |beta|.")

    return 1 - abs(alpha) / abs(beta)
