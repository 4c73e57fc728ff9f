"""Invariant suite over the channel constructions, reported as pass/fail per invariant."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .channels import (
    ChannelKind,
    apply_channel,
    apply_dilation_mixed,
    compose_ad,
    make_channel,
    sagnac_channel,
)
from .measures import concurrence_two_qubit
from .statealg import (
    IDENTITY2,
    DensityMatrix,
    frobenius_distance,
    herm_eigenvalues,
    lift_operator,
    partial_trace,
    random_density_matrix,
)

if TYPE_CHECKING:
    from collections.abc import Callable, Sequence

    from .channels import KrausChannel

    ChannelFactoryT = Callable[[ChannelKind, float], KrausChannel]

CHECK_P_POINTS = 101
CHECK_RANDOM_STATES = 8
CHECK_SEED = 20240917

COMPLETENESS_TOLERANCE = 1e-12
STATE_TOLERANCE = 1e-12
SAGNAC_TOLERANCE = 1e-10

# Concurrence goes through square roots of eigenvalues; increases below this are round-off.
CONCURRENCE_TOLERANCE = 1e-9

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


@dataclass(frozen=True)
class InvariantResult:
    """Outcome of one invariant check."""

    name: str
    passed: bool
    max_deviation: float | None  # None when the check raised


######################################################################
# Helper functions


def _p_grid() -> list[float]:
    return [float(p) for p in np.linspace(0, 1, CHECK_P_POINTS)]


def _choi(operators: Sequence[np.ndarray]) -> np.ndarray:
    """Choi matrix sum_mu (M_mu x I)|Omega><Omega|(M_mu x I)^dagger, |Omega> = |00> + |11>."""
    omega = np.array([1, 0, 0, 1], dtype=complex)
    vecs = [np.kron(op, IDENTITY2) @ omega for op in operators]
    return sum((np.outer(v, v.conj()) for v in vecs), np.zeros((4, 4), dtype=complex))


def _raw_apply(ch: KrausChannel, rho: np.ndarray, layout: Sequence[int], target: int) -> np.ndarray:
    """Kraus action without state validation."""
    out = np.zeros_like(rho)
    for op in ch.operators:
        m = lift_operator(op, layout, target)
        out += m @ rho @ m.conj().T
    return out


def _check(name: str, tolerance: float, measure: Callable[[], float]) -> InvariantResult:
    try:
        deviation = float(measure())
    except Exception as err:  # noqa: BLE001
        logger.debug(f"{name}: {type(err).__name__}: {err}")
        return InvariantResult(name, passed=False, max_deviation=None)

    passed = bool(np.isfinite(deviation)) and deviation <= tolerance
    logger.debug(f"{name}: max deviation {deviation:.3g} ({'pass' if passed else 'FAIL'})")

    return InvariantResult(name, passed=passed, max_deviation=deviation)


######################################################################
# Module public


def channel_check(channel_factory: ChannelFactoryT = make_channel) -> list[InvariantResult]:
    """Run the channel invariant suite.

    Args:
        channel_factory (ChannelFactoryT): Builds the Kraus set under test; `make_channel` by default.

    Returns:
        list[InvariantResult]: One result per invariant, in a fixed order.
    """
    rng = np.random.default_rng(CHECK_SEED)
    single_states = [random_density_matrix((2,), rng) for _ in range(CHECK_RANDOM_STATES)]
    pair_states = [random_density_matrix((2, 2), rng) for _ in range(CHECK_RANDOM_STATES)]
    pure_pair_states = [random_density_matrix((2, 2), rng, rank=1) for _ in range(CHECK_RANDOM_STATES)]
    grid = _p_grid()

    def _completeness() -> float:
        worst = 0.0
        for kind, p in itertools.product(ChannelKind, grid):
            ch = channel_factory(kind, p)
            total = sum(op.conj().T @ op for op in ch.operators)
            worst = max(worst, float(np.linalg.norm(total - IDENTITY2)))
        return worst

    def _trace_preservation() -> float:
        worst = 0.0
        for kind, p, rho in itertools.product(ChannelKind, grid, pair_states):
            out = _raw_apply(channel_factory(kind, p), rho.matrix, rho.layout, 0)
            worst = max(worst, abs(complex(np.trace(out)) - 1))
        return worst

    def _positivity() -> float:
        worst = 0.0
        for kind, p, rho in itertools.product(ChannelKind, grid, pair_states):
            out = _raw_apply(channel_factory(kind, p), rho.matrix, rho.layout, 1)
            worst = max(worst, -float(herm_eigenvalues(out)[-1]))
        return worst

    def _dilation_equivalence() -> float:
        worst = 0.0
        for kind, p, rho in itertools.product(ChannelKind, grid, single_states):
            ch = channel_factory(kind, p)
            worst = max(worst, frobenius_distance(apply_dilation_mixed(ch, rho, 0), apply_channel(ch, rho, 0)))
        return worst

    def _sagnac(kinds: Sequence[ChannelKind]) -> Callable[[], float]:
        def _measure() -> float:
            worst = 0.0
            for kind, p in itertools.product(kinds, grid):
                expected = _choi(channel_factory(kind, p).operators)
                worst = max(worst, frobenius_distance(_choi(sagnac_channel(kind, p).operators), expected))
            return worst

        return _measure

    def _ad_composition() -> float:
        worst = 0.0
        coarse = grid[:: len(grid) // 10]
        for p1, p2 in itertools.product(coarse, coarse):
            first = channel_factory(ChannelKind.AMPLITUDE_DAMPING, p1).operators
            second = channel_factory(ChannelKind.AMPLITUDE_DAMPING, p2).operators
            composed = [b @ a for a, b in itertools.product(first, second)]
            direct = channel_factory(ChannelKind.AMPLITUDE_DAMPING, compose_ad(p1, p2)).operators
            worst = max(worst, frobenius_distance(_choi(composed), _choi(direct)))
        return worst

    def _locality() -> float:
        worst = 0.0
        for kind, p, rho in itertools.product(ChannelKind, grid, pair_states + pure_pair_states):
            out = _raw_apply(channel_factory(kind, p), rho.matrix, rho.layout, 0)
            # Tr_1 of out, compared with Tr_1 of rho.
            untouched = np.einsum("aiaj->ij", out.reshape(2, 2, 2, 2))
            worst = max(worst, frobenius_distance(untouched, partial_trace(rho, (1,))))

            # A channel on one qubit never creates entanglement.
            gain = concurrence_two_qubit(DensityMatrix(out, rho.layout))[0] - concurrence_two_qubit(rho)[0]
            worst = max(worst, gain - CONCURRENCE_TOLERANCE)
        return worst

    flips = [kind for kind in ChannelKind if kind.is_flip]

    results = [
        _check("cptp_completeness", COMPLETENESS_TOLERANCE, _completeness),
        _check("trace_preservation", STATE_TOLERANCE, _trace_preservation),
        _check("positivity", STATE_TOLERANCE, _positivity),
        _check("dilation_equivalence", STATE_TOLERANCE, _dilation_equivalence),
        _check("sagnac_amplitude_damping", SAGNAC_TOLERANCE, _sagnac([ChannelKind.AMPLITUDE_DAMPING])),
        _check("sagnac_dephasing", SAGNAC_TOLERANCE, _sagnac([ChannelKind.DEPHASING])),
        _check("sagnac_flips", SAGNAC_TOLERANCE, _sagnac(flips)),
        _check("ad_composition", STATE_TOLERANCE, _ad_composition),
        _check("locality", STATE_TOLERANCE, _locality),
    ]

    failed = [result.name for result in results if not result.passed]
    if failed:
        logger.info(f"Failed invariants: {', '.join(failed)}")
    else:
        logger.info(f"All {len(results)} invariants passed")

    return results
