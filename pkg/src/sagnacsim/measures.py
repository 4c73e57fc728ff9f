"""Entanglement and complementarity figures of merit, with closed-form curves used as oracles."""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .channels import ChannelKind
from .shared import SagnacSimValueError
from .statealg import (
    SIGMA_Y,
    DensityMatrix,
    PureStateVector,
    check_amplitudes,
    herm_eigenvalues,
    partial_transpose,
    purity,
    reduced_state,
)

if TYPE_CHECKING:
    from collections.abc import Iterable

# Eigenvalues of rho above this are kept when forming sqrt(rho).
EIGENVALUE_CLIP = 1e-12

# Joint states with purity below 1 - PURE_TOLERANCE are not pure.
PURE_TOLERANCE = 1e-8

SIGMA_YY = np.kron(SIGMA_Y, SIGMA_Y)

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Domain types


@dataclass(frozen=True)
class ComplementarityTriple:
    """Squared predictability, visibility and system-environment concurrence of one qubit."""

    pred_sq: float
    vis_sq: float
    conc_sq: float

    @property
    def total(self) -> float:
        """Sum of the three terms; 1 for a pure joint state."""
        return self.pred_sq + self.vis_sq + self.conc_sq


@dataclass(frozen=True)
class AnalyticCurves:
    """Closed-form two-qubit quantities at one value of p.

    Fields that do not apply to the channel are None.
    """

    kind: ChannelKind
    p: float
    c_s1s2: float
    c_se: float
    c_s1e1: float
    c_e1e2: float | None
    v_s1s2: float
    c_n: float | None = None
    p_esd: float | None = None
    p_esb: float | None = None


######################################################################
# Helper functions


def _check_two_qubit(rho: DensityMatrix) -> None:
    if rho.layout != (2, 2):
        raise SagnacSimValueError(f"Expected a two-qubit state; got layout {rho.layout}.")


def _check_single_qubit(rho: DensityMatrix) -> None:
    if rho.layout != (2,):
        raise SagnacSimValueError(f"Expected a single-qubit state; got layout {rho.layout}.")


def _sqrt_nonneg(x: float) -> float:
    return math.sqrt(max(x, 0.0))


######################################################################
# Module public


def wootters_lambda(rho: DensityMatrix) -> float:
    """Signed Wootters combination sqrt(l1) - sqrt(l2) - sqrt(l3) - sqrt(l4).

    The square roots are the singular values of W^T (sY x sY) W with rho = W W^dagger,
    which avoids taking roots of round-off in rho (sY x sY) rho* (sY x sY).

    Args:
        rho (DensityMatrix): Two-qubit state.

    Returns:
        float
    """
    _check_two_qubit(rho)

    eigvals, eigvecs = np.linalg.eigh(rho.matrix)
    eigvals = np.where(eigvals > EIGENVALUE_CLIP, eigvals, 0.0)
    w = eigvecs * np.sqrt(eigvals)

    roots = np.linalg.svd(w.T @ SIGMA_YY @ w, compute_uv=False)  # descending

    return float(roots[0] - roots[1] - roots[2] - roots[3])


def concurrence_two_qubit(rho: DensityMatrix) -> tuple[float, float]:
    """Wootters concurrence and the signed Lambda it clips.

    Args:
        rho (DensityMatrix): Two-qubit state.

    Returns:
        tuple[float, float]: (max(0, Lambda), Lambda).
    """
    lam = wootters_lambda(rho)
    return max(0.0, lam), lam


def concurrence_pure_bipartite(psi: PureStateVector, partition: Iterable[int]) -> float:
    """sqrt(2 (1 - Tr rho_S^2)) for the subsystem `partition` of a pure state.

    Args:
        psi (PureStateVector): Pure joint state.
        partition (Iterable[int]): Layout positions of one side of the cut.

    Returns:
        float
    """
    return _sqrt_nonneg(2 * (1 - purity(reduced_state(psi, partition))))


def system_environment_concurrence(psi: PureStateVector, system_slots: Iterable[int]) -> float:
    """Concurrence between the system slots and everything else (the environments)."""
    return concurrence_pure_bipartite(psi, system_slots)


def pair_concurrence(psi: PureStateVector, pair: tuple[int, int]) -> float:
    """Wootters concurrence of the two-qubit reduction of a pure multiqubit state.

    Args:
        psi (PureStateVector): Pure state.
        pair (tuple[int, int]): Two qubit positions.

    Returns:
        float
    """
    return concurrence_two_qubit(reduced_state(psi, pair))[0]


def negativity(rho: DensityMatrix, partition: int = 1) -> float:
    """Sum of magnitudes of negative eigenvalues of the partial transpose.

    Args:
        rho (DensityMatrix): Bipartite state.
        partition (int): Layout position to transpose.

    Returns:
        float
    """
    if len(rho.layout) != 2:
        raise SagnacSimValueError(f"Expected a bipartite layout; got {rho.layout}.")

    eigvals = herm_eigenvalues(partial_transpose(rho, partition))
    return float(-np.sum(eigvals[eigvals < 0]))


def predictability(rho: DensityMatrix) -> float:
    """|<sigma_z>|."""
    _check_single_qubit(rho)
    return float(abs(rho.matrix[0, 0].real - rho.matrix[1, 1].real))


def visibility(rho: DensityMatrix) -> float:
    """2 |<sigma_plus>|."""
    _check_single_qubit(rho)
    return float(2 * abs(rho.matrix[0, 1]))


def complementarity_triple(joint: PureStateVector | DensityMatrix, system_slot: int) -> ComplementarityTriple:
    """Squared predictability, visibility and system-environment concurrence of one qubit.

    Args:
        joint (PureStateVector | DensityMatrix): Pure joint state of the qubit and its environment.
        system_slot (int): Position of the qubit.

    Returns:
        ComplementarityTriple
    """
    if isinstance(joint, DensityMatrix):
        if purity(joint) < 1 - PURE_TOLERANCE:
            raise SagnacSimValueError("Complementarity requires a pure joint state.")
        eigvals, eigvecs = np.linalg.eigh(joint.matrix)
        joint = PureStateVector(eigvecs[:, int(np.argmax(eigvals))], joint.layout)

    rho_s = reduced_state(joint, (system_slot,))
    if rho_s.layout != (2,):
        raise SagnacSimValueError(f"Slot {system_slot} is not a qubit.")

    return ComplementarityTriple(
        pred_sq=predictability(rho_s) ** 2,
        vis_sq=visibility(rho_s) ** 2,
        conc_sq=max(0.0, 2 * (1 - purity(rho_s))),
    )


def bipartite_visibility(rho: DensityMatrix) -> float:
    """2 |<11|rho|00>|, the two-particle coherence."""
    _check_two_qubit(rho)
    return float(2 * abs(rho.matrix[3, 0]))


def multipartite_concurrence(psi: PureStateVector) -> float:
    """Multipartite concurrence of a pure N-qubit state.

    C_N = 2^(1 - N/2) sqrt((2^N - 2) - sum_i Tr rho_i^2) over all nontrivial reductions.

    Args:
        psi (PureStateVector): Pure state of N >= 2 qubits.

    Returns:
        float
    """
    n = len(psi.layout)
    if n < 2 or any(d != 2 for d in psi.layout):
        raise SagnacSimValueError(f"Expected at least two qubits; got layout {psi.layout}.")

    purities = sum(purity(reduced_state(psi, keep)) for size in range(1, n) for keep in itertools.combinations(range(n), size))

    return 2 ** (1 - n / 2) * _sqrt_nonneg((2**n - 2) - purities)


def witness_gamma(rho: DensityMatrix, theta: float) -> float:
    """Gamma = 2 (<Phi(theta)|rho|Phi(theta)> - 1/2) with |Phi(theta)> = (|HH> + e^{i theta}|VV>)/sqrt(2).

    Args:
        rho (DensityMatrix): Two-qubit state.
        theta (float): Relative phase of the witness state.

    Returns:
        float
    """
    _check_two_qubit(rho)

    m = rho.matrix
    overlap = 0.5 * (m[0, 0].real + m[3, 3].real) + (np.exp(-1j * theta) * m[3, 0]).real

    return float(2 * (overlap - 0.5))


def witness_best_gamma(rho: DensityMatrix) -> tuple[float, float]:
    """Witness at the phase of the |VV><HH| coherence, which maximizes Gamma over theta.

    Args:
        rho (DensityMatrix): Two-qubit state.

    Returns:
        tuple[float, float]: (theta*, Gamma at theta*); theta* is 0 when the coherence vanishes.
    """
    _check_two_qubit(rho)

    coherence = rho.matrix[3, 0]
    theta = float(np.angle(coherence)) if coherence != 0 else 0.0

    return theta, witness_gamma(rho, theta)


def analytic_curves(kind: ChannelKind, alpha: complex, beta: complex, p: float) -> AnalyticCurves:
    """Closed-form two-qubit curves for alpha|HH> + beta|VV> under a dual local channel.

    Args:
        kind (ChannelKind): Amplitude damping or dephasing.
        alpha (complex): Amplitude of |HH>.
        beta (complex): Amplitude of |VV>.
        p (float): Transition probability.

    Returns:
        AnalyticCurves
    """
    check_amplitudes(alpha, beta)
    a, b = abs(alpha), abs(beta)

    if kind is ChannelKind.AMPLITUDE_DAMPING:
        p_esd = a / b if a < b else None
        return AnalyticCurves(
            kind=kind,
            p=p,
            c_s1s2=max(0.0, 2 * (1 - p) * b * (a - p * b)),
            c_se=2 * math.sqrt(2) * b * _sqrt_nonneg(p * (1 - p)) * _sqrt_nonneg(1 - b**2 * p * (1 - p)),
            c_s1e1=2 * b**2 * _sqrt_nonneg(p * (1 - p)),
            c_e1e2=max(0.0, 2 * p * b * (a - (1 - p) * b)),
            v_s1s2=2 * (1 - p) * a * b,
            p_esd=p_esd,
            p_esb=None if p_esd is None else 1 - p_esd,
        )

    if kind is ChannelKind.DEPHASING:
        return AnalyticCurves(
            kind=kind,
            p=p,
            c_s1s2=2 * (1 - p) * a * b,
            c_se=2 * a * b * _sqrt_nonneg(p * (2 - p)),
            c_s1e1=0.0,
            c_e1e2=None,
            v_s1s2=2 * (1 - p) * a * b,
            c_n=a * b * _sqrt_nonneg(4 + 4 * p - p**2),
        )

    raise SagnacSimValueError(f"No closed-form two-qubit curves for {kind.value}.")


def single_qubit_curves(kind: ChannelKind, alpha: complex, beta: complex, p: float) -> tuple[float, float, float]:
    """Closed-form (P_S, V_S, C_SE) of alpha|H> + beta|V> after a single-qubit channel.

    Flip-channel entries use squares of the complex amplitudes, not of their moduli.

    Args:
        kind (ChannelKind): Channel.
        alpha (complex): Amplitude of |H>.
        beta (complex): Amplitude of |V>.
        p (float): Transition probability.

    Returns:
        tuple[float, float, float]
    """
    check_amplitudes(alpha, beta)
    a_sq, b_sq = abs(alpha) ** 2, abs(beta) ** 2
    ab = abs(alpha * beta)
    flip_weight = _sqrt_nonneg(p * (2 - p))

    match kind:
        case ChannelKind.AMPLITUDE_DAMPING:
            return abs(1 - 2 * (1 - p) * b_sq), 2 * math.sqrt(1 - p) * ab, 2 * b_sq * _sqrt_nonneg(p * (1 - p))
        case ChannelKind.DEPHASING:
            return abs(a_sq - b_sq), 2 * math.sqrt(1 - p) * ab, 2 * ab * math.sqrt(p)
        case ChannelKind.BIT_FLIP:
            vis = abs((2 - p) * alpha * np.conj(beta) + p * np.conj(alpha) * beta)
            return (1 - p) * abs(a_sq - b_sq), float(vis), flip_weight * abs(alpha**2 - beta**2)
        case ChannelKind.PHASE_FLIP:
            return abs(a_sq - b_sq), 2 * (1 - p) * ab, flip_weight * 2 * ab
        case ChannelKind.BIT_PHASE_FLIP:
            vis = abs((2 - p) * alpha * np.conj(beta) - p * np.conj(alpha) * beta)
            return (1 - p) * abs(a_sq - b_sq), float(vis), flip_weight * abs(alpha**2 + beta**2)

    raise SagnacSimValueError(f"Unhandled channel {kind}.")
