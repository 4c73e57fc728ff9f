"""Decoherence channels as Kraus sets, their dilations and the Sagnac realization."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum, unique
from typing import TYPE_CHECKING

import numpy as np
from scipy.linalg import null_space

from .shared import SagnacSimValueError
from .statealg import (
    IDENTITY2,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    DensityMatrix,
    PureStateVector,
    lift_operator,
    partial_trace,
)

if TYPE_CHECKING:
    from collections.abc import Sequence

    from .statealg import ComplexMatrix

# Kraus sets on a qubit have at most d^2 operators.
MAX_KRAUS_OPERATORS = 4

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


@unique
class ChannelKind(Enum):
    """Decoherence channels."""

    AMPLITUDE_DAMPING = "amplitude_damping"
    DEPHASING = "dephasing"
    BIT_FLIP = "bit_flip"
    PHASE_FLIP = "phase_flip"
    BIT_PHASE_FLIP = "bit_phase_flip"

    @classmethod
    def from_name(cls, name: str) -> ChannelKind:
        """Look up a channel kind by configuration name.

        Accepts the enum value, the enum name and a few short aliases, case insensitive.

        Args:
            name (str): Channel name, e.g. "amplitude_damping", "AD" or "bit-flip".

        Returns:
            ChannelKind
        """
        key = name.strip().lower().replace("-", "_").replace(" ", "_")
        key = _CHANNEL_ALIASES.get(key, key)

        try:
            return cls(key)
        except ValueError:
            raise SagnacSimValueError(f"'{name}': Unknown channel; expected one of {', '.join(k.value for k in cls)}.") from None

    @property
    def is_flip(self) -> bool:
        """True for the Pauli error channels."""
        return self in (ChannelKind.BIT_FLIP, ChannelKind.PHASE_FLIP, ChannelKind.BIT_PHASE_FLIP)


_CHANNEL_ALIASES = {
    "ad": ChannelKind.AMPLITUDE_DAMPING.value,
    "amplitude_decay": ChannelKind.AMPLITUDE_DAMPING.value,
    "phase_damping": ChannelKind.DEPHASING.value,
    "pd": ChannelKind.DEPHASING.value,
    "bitflip": ChannelKind.BIT_FLIP.value,
    "phaseflip": ChannelKind.PHASE_FLIP.value,
    "bitphaseflip": ChannelKind.BIT_PHASE_FLIP.value,
}

_FLIP_PAULI = {
    ChannelKind.BIT_FLIP: SIGMA_X,
    ChannelKind.PHASE_FLIP: SIGMA_Z,
    ChannelKind.BIT_PHASE_FLIP: SIGMA_Y,
}


@unique
class TimeModelVariant(Enum):
    """Time dependence of the transition probability."""

    MARKOV = "markov"  # p = 1 - exp(-rate t)
    RABI = "rabi"  # p = sin^2(rate t / 2)


######################################################################
# Domain types


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """Named, p-parameterized set of Kraus operators.

    The no-jump operator comes first so outcome indices are stable.
    Completeness is not enforced here; see `completeness_deviation`.
    """

    kind: ChannelKind
    p: float
    operators: tuple[ComplexMatrix, ...]

    def __post_init__(self) -> None:
        """Validate operator shapes and count."""
        if not 1 <= len(self.operators) <= MAX_KRAUS_OPERATORS:
            raise SagnacSimValueError(f"A qubit channel has 1 to {MAX_KRAUS_OPERATORS} Kraus operators; got {len(self.operators)}.")

        ops = []
        for op in self.operators:
            op = np.array(op, dtype=complex)  # noqa: PLW2901
            if op.shape != (2, 2):
                raise SagnacSimValueError(f"Kraus operators must be 2x2; got {op.shape}.")
            op.flags.writeable = False
            ops.append(op)

        object.__setattr__(self, "operators", tuple(ops))

    def __repr__(self) -> str:
        """Return a string representation of the object for debugging purposes.

        Returns:
            str
        """
        return f"{self.__class__.__name__}({self.kind.value}, p={self.p:.6g})"

    def completeness_deviation(self) -> float:
        """Largest entry of |sum M^dagger M - I|."""
        total = sum((op.conj().T @ op for op in self.operators), np.zeros((2, 2), dtype=complex))
        return float(np.max(np.abs(total - IDENTITY2)))


@dataclass(frozen=True)
class SagnacSettings:
    """Wave-plate angles and phase-plate phase in radians, stored as given."""

    theta_H: float
    theta_V: float
    theta_1: float
    phi: float

    def __post_init__(self) -> None:
        """Reject non-finite angles."""
        if not all(math.isfinite(v) for v in (self.theta_H, self.theta_V, self.theta_1, self.phi)):
            raise SagnacSimValueError(f"Sagnac settings must be finite: {self}.")


@dataclass(frozen=True)
class TimeModel:
    """Decay rate (Markov) or vacuum Rabi frequency (Rabi)."""

    variant: TimeModelVariant
    rate: float

    def __post_init__(self) -> None:
        """Reject non-positive rates."""
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise SagnacSimValueError(f"Time model rate must be positive; got {self.rate}.")


######################################################################
# Module public


def check_p(p: float) -> float:
    """Return p as a float; raise unless it lies in [0, 1]."""
    p = float(p)
    if not 0 <= p <= 1:
        raise SagnacSimValueError(f"Transition probability p={p} outside [0, 1].")
    return p


def check_qubit_slot(layout: Sequence[int], target: int) -> None:
    """Raise unless `target` indexes a qubit slot of `layout`."""
    if not 0 <= target < len(layout):
        raise SagnacSimValueError(f"Qubit index {target} out of range for layout {tuple(layout)}.")
    if layout[target] != 2:
        raise SagnacSimValueError(f"Slot {target} of layout {tuple(layout)} is not a qubit.")


def make_channel(kind: ChannelKind, p: float) -> KrausChannel:
    """Build the Kraus set of a channel.

    Flip channels apply their Pauli error with probability p/2.

    Args:
        kind (ChannelKind): Channel.
        p (float): Transition probability in [0, 1].

    Returns:
        KrausChannel
    """
    p = check_p(p)

    match kind:
        case ChannelKind.AMPLITUDE_DAMPING:
            ops = (
                np.diag([1, math.sqrt(1 - p)]).astype(complex),
                np.array([[0, math.sqrt(p)], [0, 0]], dtype=complex),
            )
        case ChannelKind.DEPHASING:
            ops = (
                np.diag([1, math.sqrt(1 - p)]).astype(complex),
                np.diag([0, math.sqrt(p)]).astype(complex),
            )
        case _:
            ops = (
                math.sqrt(1 - p / 2) * IDENTITY2,
                math.sqrt(p / 2) * _FLIP_PAULI[kind],
            )

    return KrausChannel(kind, p, ops)


def apply_channel(ch: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Apply a channel to one qubit of a state, identity elsewhere.

    Args:
        ch (KrausChannel): Channel.
        rho (DensityMatrix): State.
        target (int): Qubit position in the layout.

    Returns:
        DensityMatrix
    """
    check_qubit_slot(rho.layout, target)

    out = np.zeros_like(rho.matrix)
    for op in ch.operators:
        m = lift_operator(op, rho.layout, target)
        out += m @ rho.matrix @ m.conj().T

    return DensityMatrix(out, rho.layout)


def apply_local(chs: Sequence[KrausChannel], rho: DensityMatrix) -> DensityMatrix:
    """Apply one channel per qubit slot.

    Args:
        chs (Sequence[KrausChannel]): Channels in layout order.
        rho (DensityMatrix): State.

    Returns:
        DensityMatrix
    """
    if len(chs) != len(rho.layout):
        raise SagnacSimValueError(f"Expected {len(rho.layout)} channels for layout {rho.layout}; got {len(chs)}.")

    for target, ch in enumerate(chs):
        rho = apply_channel(ch, rho, target)

    return rho


def dilate(ch: KrausChannel) -> ComplexMatrix:
    """Isometry V with V|phi> = sum_mu M_mu|phi>|mu>.

    V is the restriction of the system-environment unitary to an environment starting in |0>.
    The environment dimension equals the number of Kraus operators.

    Args:
        ch (KrausChannel): Channel.

    Returns:
        ComplexMatrix: (2n x 2) matrix, system index major.
    """
    n = len(ch.operators)
    basis = np.eye(n, dtype=complex)

    return sum((np.kron(op, basis[:, [mu]]) for mu, op in enumerate(ch.operators)), np.zeros((2 * n, 2), dtype=complex))


def apply_dilation(ch: KrausChannel, psi: PureStateVector, target: int) -> PureStateVector:
    """Joint pure state after a qubit interacts with a fresh environment.

    The environment slot is appended to the end of the layout.

    Args:
        ch (KrausChannel): Channel.
        psi (PureStateVector): Pure state.
        target (int): Qubit position in the layout.

    Returns:
        PureStateVector
    """
    check_qubit_slot(psi.layout, target)

    n = len(ch.operators)
    isometry = dilate(ch).reshape(2, n, 2)  # [out, mu, in]

    t = np.tensordot(isometry, psi.amplitudes.reshape(psi.layout), axes=([2], [target]))
    t = np.moveaxis(t, [0, 1], [target, -1])

    return PureStateVector(t.reshape(-1), (*psi.layout, n))


def apply_dilation_mixed(ch: KrausChannel, rho: DensityMatrix, target: int) -> DensityMatrix:
    """Trace out the environment of the dilated evolution of a mixed state.

    Equivalent to `apply_channel` by construction; kept separate to check dilations.

    Args:
        ch (KrausChannel): Channel.
        rho (DensityMatrix): State.
        target (int): Qubit position in the layout.

    Returns:
        DensityMatrix
    """
    check_qubit_slot(rho.layout, target)

    # Columns of the embedded isometry are the dilated basis states.
    columns = [apply_dilation(ch, PureStateVector(col, rho.layout), target) for col in np.eye(rho.dim, dtype=complex)]
    iso = np.stack([psi.amplitudes for psi in columns], axis=1)
    joint = DensityMatrix(iso @ rho.matrix @ iso.conj().T, columns[0].layout)

    return partial_trace(joint, range(len(rho.layout)))


def sagnac_unitary(s: SagnacSettings) -> ComplexMatrix:
    """Unitary of the Sagnac loop on polarization x propagation mode.

    Basis order is |H0>, |H1>, |V0>, |V1>.
    Only the mode-0 columns are physical; the mode-1 columns complete the unitary.

    Args:
        s (SagnacSettings): Optical settings.

    Returns:
        ComplexMatrix: 4x4 unitary.
    """
    c_h, s_h = math.cos(2 * s.theta_H), math.sin(2 * s.theta_H)
    c_v, s_v = math.cos(2 * s.theta_V), math.sin(2 * s.theta_V)
    c_1, s_1 = math.cos(2 * s.theta_1), math.sin(2 * s.theta_1)
    phase = np.exp(1j * s.phi)

    # |H>|0> and |V>|0> images
    h0 = np.array([c_h, phase * s_h * s_1, 0, -phase * s_h * c_1], dtype=complex)
    v0 = np.array([0, phase * s_v * c_1, c_v, phase * s_v * s_1], dtype=complex)

    physical = np.stack([h0, v0], axis=1)
    completion = null_space(physical.conj().T)

    u = np.empty((4, 4), dtype=complex)
    u[:, 0] = h0
    u[:, 2] = v0
    u[:, 1] = completion[:, 0]
    u[:, 3] = completion[:, 1]

    return u


def kraus_from_sagnac(s: SagnacSettings, kind: ChannelKind, p: float) -> KrausChannel:
    """Read the Kraus operators M_mu = <mu|U|0> off the Sagnac unitary.

    Args:
        s (SagnacSettings): Optical settings.
        kind (ChannelKind): Channel the settings realize, used for labelling.
        p (float): Transition probability the settings realize.

    Returns:
        KrausChannel
    """
    u = sagnac_unitary(s).reshape(2, 2, 2, 2)  # [pol_out, mode_out, pol_in, mode_in]
    return KrausChannel(kind, check_p(p), (u[:, 0, :, 0], u[:, 1, :, 0]))


def settings_for(kind: ChannelKind, p: float) -> SagnacSettings:
    """Sagnac settings realizing a channel.

    Amplitude damping and dephasing use sin^2(2 theta) = p.
    Flip channels use sin^2(2 theta) = p/2, which makes the Sagnac Kraus set equal to `make_channel`.

    Args:
        kind (ChannelKind): Channel.
        p (float): Transition probability in [0, 1].

    Returns:
        SagnacSettings
    """
    p = check_p(p)
    theta = 0.5 * math.asin(math.sqrt(p / 2 if kind.is_flip else p))

    match kind:
        case ChannelKind.AMPLITUDE_DAMPING:
            return SagnacSettings(0.0, theta, 0.0, 0.0)
        case ChannelKind.DEPHASING:
            return SagnacSettings(0.0, theta, math.pi / 4, 0.0)
        case ChannelKind.BIT_FLIP:
            return SagnacSettings(-theta, theta, 0.0, 0.0)
        case ChannelKind.PHASE_FLIP:
            return SagnacSettings(theta, -theta, math.pi / 4, 0.0)
        case ChannelKind.BIT_PHASE_FLIP:
            return SagnacSettings(-theta, -theta, 0.0, math.pi / 2)

    raise SagnacSimValueError(f"Unhandled channel {kind}.")


def sagnac_channel(kind: ChannelKind, p: float) -> KrausChannel:
    """Kraus set realized by the Sagnac loop for a channel."""
    return kraus_from_sagnac(settings_for(kind, p), kind, p)


def p_of_time(model: TimeModel, t: float) -> float:
    """Transition probability at time `t`.

    Args:
        model (TimeModel): Time dependence.
        t (float): Time, non-negative.

    Returns:
        float
    """
    if t < 0:
        raise SagnacSimValueError(f"Time must be non-negative; got {t}.")

    if model.variant is TimeModelVariant.MARKOV:
        return -math.expm1(-model.rate * t)

    return math.sin(model.rate * t / 2) ** 2


def compose_ad(p1: float, p2: float) -> float:
    """Transition probability of amplitude damping p1 followed by p2."""
    return 1 - (1 - check_p(p1)) * (1 - check_p(p2))
