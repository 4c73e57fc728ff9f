"""Dense state and operator algebra.

Basis conventions are global: |0> is |H> (ground) and |1> is |V> (excited).
Multi-qubit basis order is lexicographic, e.g. {00, 01, 10, 11}.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import TYPE_CHECKING

import numpy as np

from .shared import SagnacSimValueError

if TYPE_CHECKING:
    from collections.abc import Iterable, Sequence

    import numpy.typing as npt

    ComplexMatrix = npt.NDArray[np.complex128]
    ComplexVector = npt.NDArray[np.complex128]

HERMITIAN_TOLERANCE = 1e-10
TRACE_TOLERANCE = 1e-10
NORM_TOLERANCE = 1e-10
PSD_TOLERANCE = 1e-9

IDENTITY2 = np.eye(2, dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
SIGMA_PLUS = np.array([[0, 1], [0, 0]], dtype=complex)  # |0><1|

_SQRT_HALF = 1 / math.sqrt(2)

# Polarization kets by tomography label.
POLARIZATION_KETS = {
    "H": np.array([1, 0], dtype=complex),
    "V": np.array([0, 1], dtype=complex),
    "+": np.array([_SQRT_HALF, _SQRT_HALF], dtype=complex),
    "-": np.array([_SQRT_HALF, -_SQRT_HALF], dtype=complex),
    "R": np.array([_SQRT_HALF, 1j * _SQRT_HALF], dtype=complex),
    "L": np.array([_SQRT_HALF, -1j * _SQRT_HALF], dtype=complex),
}

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Helper functions


def _readonly(a: npt.ArrayLike) -> np.ndarray:
    arr = np.array(a, dtype=complex)
    arr.flags.writeable = False
    return arr


def _default_layout(dim: int) -> tuple[int, ...]:
    """Qubit layout when `dim` is a power of two, a single slot otherwise."""
    n = dim.bit_length() - 1
    if dim > 1 and (1 << n) == dim:
        return (2,) * n
    return (dim,)


def _check_layout(layout: Sequence[int], dim: int) -> tuple[int, ...]:
    layout = tuple(int(d) for d in layout)

    if not layout or any(d < 1 for d in layout) or math.prod(layout) != dim:
        raise SagnacSimValueError(f"Layout {layout} does not match dimension {dim}.")

    return layout


def _check_slots(slots: Iterable[int], layout: Sequence[int]) -> tuple[int, ...]:
    slots = tuple(slots)

    if not slots:
        raise SagnacSimValueError("At least one subsystem is required.")

    for slot in slots:
        if not 0 <= slot < len(layout):
            raise SagnacSimValueError(f"Subsystem index {slot} out of range for layout {tuple(layout)}.")

    if len(set(slots)) != len(slots):
        raise SagnacSimValueError(f"Duplicate subsystem index in {slots}.")

    return tuple(sorted(slots))


######################################################################
# Domain types


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite operator with a subsystem layout.

    Inputs with asymmetry below `HERMITIAN_TOLERANCE` are symmetrized.
    Negative eigenvalues down to `-PSD_TOLERANCE` are clipped to zero and the trace renormalized.
    Anything else is rejected with `SagnacSimValueError`.
    """

    matrix: ComplexMatrix
    layout: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        """Validate and normalize the matrix."""
        m = np.asarray(self.matrix, dtype=complex)

        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise SagnacSimValueError(f"Density matrix must be square; got shape {m.shape}.")

        layout = _check_layout(self.layout or _default_layout(m.shape[0]), m.shape[0])

        asymmetry = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if asymmetry > HERMITIAN_TOLERANCE:
            raise SagnacSimValueError(f"Density matrix is not Hermitian (asymmetry {asymmetry:.3g}).")
        m = (m + m.conj().T) / 2

        trace = np.trace(m).real
        if abs(trace - 1) > TRACE_TOLERANCE:
            raise SagnacSimValueError(f"Density matrix trace is {trace!r}, expected 1.")

        eigvals, eigvecs = np.linalg.eigh(m)
        if eigvals[0] < -PSD_TOLERANCE:
            raise SagnacSimValueError(f"Density matrix is not positive semidefinite (eigenvalue {eigvals[0]:.3g}).")

        if eigvals[0] < 0:
            eigvals = np.clip(eigvals, 0, None)
            m = (eigvecs * eigvals) @ eigvecs.conj().T
            m /= np.trace(m).real

        object.__setattr__(self, "matrix", _readonly(m))
        object.__setattr__(self, "layout", layout)

    def __repr__(self) -> str:
        """Return a string representation of the object for debugging purposes.

        Returns:
            str
        """
        return f"{self.__class__.__name__}(layout={self.layout}, purity={purity(self):.6g})"

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class PureStateVector:
    """Unit-norm state vector with a subsystem layout."""

    amplitudes: ComplexVector
    layout: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        """Validate the vector."""
        v = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        layout = _check_layout(self.layout or _default_layout(v.size), v.size)

        norm = np.linalg.norm(v)
        if abs(norm - 1) > NORM_TOLERANCE:
            raise SagnacSimValueError(f"State vector norm is {norm!r}, expected 1.")

        object.__setattr__(self, "amplitudes", _readonly(v))
        object.__setattr__(self, "layout", layout)

    def __repr__(self) -> str:
        """Return a string representation of the object for debugging purposes.

        Returns:
            str
        """
        return f"{self.__class__.__name__}(layout={self.layout})"

    @property
    def dim(self) -> int:
        """Hilbert space dimension."""
        return self.amplitudes.size


######################################################################
# Module public


def tensor[T: (DensityMatrix, PureStateVector, np.ndarray)](a: T, b: T) -> T:
    """Kronecker product.

    Density matrices and state vectors keep their layouts concatenated.

    Args:
        a: Left factor.
        b: Right factor.

    Returns:
        Product of the same kind as the inputs.
    """
    if isinstance(a, DensityMatrix) and isinstance(b, DensityMatrix):
        return DensityMatrix(np.kron(a.matrix, b.matrix), a.layout + b.layout)

    if isinstance(a, PureStateVector) and isinstance(b, PureStateVector):
        return PureStateVector(np.kron(a.amplitudes, b.amplitudes), a.layout + b.layout)

    if isinstance(a, DensityMatrix | PureStateVector) or isinstance(b, DensityMatrix | PureStateVector):
        raise SagnacSimValueError("Cannot mix state types in a tensor product.")

    return np.kron(a, b)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix over the kept subsystems.

    Args:
        rho (DensityMatrix): State to reduce.
        keep (Iterable[int]): Layout positions to keep.

    Returns:
        DensityMatrix: Reduced state with the kept layout, in layout order.
    """
    keep = _check_slots(keep, rho.layout)
    layout = rho.layout
    n = len(layout)
    traced = tuple(i for i in range(n) if i not in keep)

    dim_keep = math.prod(layout[i] for i in keep)
    dim_traced = math.prod(layout[i] for i in traced)

    t = rho.matrix.reshape(layout + layout)
    order = keep + traced
    t = t.transpose(order + tuple(i + n for i in order))
    t = t.reshape(dim_keep, dim_traced, dim_keep, dim_traced)

    return DensityMatrix(np.einsum("aibi->ab", t), tuple(layout[i] for i in keep))


def reduced_state(psi: PureStateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state, without forming the full projector.

    Args:
        psi (PureStateVector): Pure state.
        keep (Iterable[int]): Layout positions to keep.

    Returns:
        DensityMatrix
    """
    keep = _check_slots(keep, psi.layout)
    layout = psi.layout
    traced = tuple(i for i in range(len(layout)) if i not in keep)

    dim_keep = math.prod(layout[i] for i in keep)
    a = psi.amplitudes.reshape(layout).transpose(keep + traced).reshape(dim_keep, -1)

    return DensityMatrix(a @ a.conj().T, tuple(layout[i] for i in keep))


def partial_transpose(rho: DensityMatrix, subsystem: int) -> ComplexMatrix:
    """Transpose the designated tensor factor.

    Args:
        rho (DensityMatrix): State.
        subsystem (int): Layout position to transpose.

    Returns:
        ComplexMatrix: Hermitian matrix, not necessarily positive.
    """
    (subsystem,) = _check_slots((subsystem,), rho.layout)
    layout = rho.layout
    n = len(layout)

    axes = list(range(2 * n))
    axes[subsystem], axes[subsystem + n] = axes[subsystem + n], axes[subsystem]

    return rho.matrix.reshape(layout + layout).transpose(axes).reshape(rho.dim, rho.dim)


def herm_eigenvalues(m: npt.ArrayLike) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    Args:
        m (ArrayLike): Hermitian matrix.

    Returns:
        ndarray: Eigenvalues.
    """
    m = np.asarray(m, dtype=complex)

    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SagnacSimValueError(f"Matrix must be square; got shape {m.shape}.")

    if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOLERANCE:
        raise SagnacSimValueError("Matrix is not Hermitian.")

    return np.linalg.eigvalsh((m + m.conj().T) / 2)[::-1]


def purity(rho: DensityMatrix) -> float:
    """Tr(rho^2)."""
    return float(np.sum(np.abs(rho.matrix) ** 2))


def projection_probability(rho: DensityMatrix, phi: PureStateVector) -> float:
    """Probability <phi|rho|phi> of projecting onto `phi`.

    Args:
        rho (DensityMatrix): State.
        phi (PureStateVector): Projection target.

    Returns:
        float
    """
    if phi.dim != rho.dim:
        raise SagnacSimValueError(f"Dimension mismatch: state {rho.dim}, projector {phi.dim}.")

    v = phi.amplitudes
    return float(np.real(v.conj() @ rho.matrix @ v))


def density_from_pure(psi: PureStateVector) -> DensityMatrix:
    """Projector |psi><psi|."""
    v = psi.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), psi.layout)


def maximally_mixed(layout: Sequence[int]) -> DensityMatrix:
    """Identity over the total dimension, normalized."""
    dim = math.prod(layout)
    return DensityMatrix(np.eye(dim, dtype=complex) / dim, tuple(layout))


def mix(rho_a: DensityMatrix, rho_b: DensityMatrix, weight: float) -> DensityMatrix:
    """Convex combination `weight * rho_a + (1 - weight) * rho_b`.

    Args:
        rho_a (DensityMatrix): First state.
        rho_b (DensityMatrix): Second state.
        weight (float): Weight of the first state, in [0, 1].

    Returns:
        DensityMatrix
    """
    if not 0 <= weight <= 1:
        raise SagnacSimValueError(f"Mixing weight {weight} outside [0, 1].")

    if rho_a.layout != rho_b.layout:
        raise SagnacSimValueError(f"Layout mismatch: {rho_a.layout} != {rho_b.layout}.")

    return DensityMatrix(weight * rho_a.matrix + (1 - weight) * rho_b.matrix, rho_a.layout)


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2.

    Reduces to Tr(rho sigma) when either state is pure.

    Args:
        rho (DensityMatrix): First state.
        sigma (DensityMatrix): Second state.

    Returns:
        float: Fidelity in [0, 1].
    """
    if rho.dim != sigma.dim:
        raise SagnacSimValueError(f"Dimension mismatch: {rho.dim} != {sigma.dim}.")

    if purity(rho) > 1 - 1e-12 or purity(sigma) > 1 - 1e-12:
        return float(np.clip(np.real(np.trace(rho.matrix @ sigma.matrix)), 0, 1))

    eigvals, eigvecs = np.linalg.eigh(rho.matrix)
    sqrt_rho = (eigvecs * np.sqrt(np.clip(eigvals, 0, None))) @ eigvecs.conj().T
    inner = np.linalg.eigvalsh(sqrt_rho @ sigma.matrix @ sqrt_rho)

    return float(np.clip(np.sum(np.sqrt(np.clip(inner, 0, None))) ** 2, 0, 1))


def frobenius_distance(a: npt.ArrayLike | DensityMatrix, b: npt.ArrayLike | DensityMatrix) -> float:
    """Frobenius norm of the difference."""
    a = a.matrix if isinstance(a, DensityMatrix) else np.asarray(a)
    b = b.matrix if isinstance(b, DensityMatrix) else np.asarray(b)
    return float(np.linalg.norm(a - b))


def ket(labels: str) -> PureStateVector:
    """Product of polarization kets, e.g. `ket("HV")` is |H>|V>.

    Args:
        labels (str): One of "H", "V", "+", "-", "R", "L" per qubit.

    Returns:
        PureStateVector
    """
    try:
        factors = [POLARIZATION_KETS[label] for label in labels]
    except KeyError as err:
        raise SagnacSimValueError(f"'{labels}': Unknown polarization label {err}.") from None

    if not factors:
        raise SagnacSimValueError("Empty polarization label.")

    return PureStateVector(reduce(np.kron, factors), (2,) * len(factors))


def check_amplitudes(alpha: complex, beta: complex) -> None:
    """Raise unless |alpha|^2 + |beta|^2 = 1.

    Args:
        alpha (complex): Amplitude of the ground component.
        beta (complex): Amplitude of the excited component.
    """
    norm_sq = abs(alpha) ** 2 + abs(beta) ** 2
    if abs(norm_sq - 1) > NORM_TOLERANCE:
        raise SagnacSimValueError(f"Amplitudes are not normalized: |alpha|^2 + |beta|^2 = {norm_sq!r}.")


def single_qubit_state(alpha: complex, beta: complex) -> PureStateVector:
    """alpha|H> + beta|V>."""
    check_amplitudes(alpha, beta)
    return PureStateVector(np.array([alpha, beta], dtype=complex), (2,))


def two_qubit_state(alpha: complex, beta: complex, delta: float = 0.0) -> PureStateVector:
    """alpha|HH> + beta e^{i delta}|VV>.

    Args:
        alpha (complex): Amplitude of |HH>.
        beta (complex): Amplitude of |VV> before the relative phase.
        delta (float): Relative phase in radians.

    Returns:
        PureStateVector
    """
    check_amplitudes(alpha, beta)
    return PureStateVector(np.array([alpha, 0, 0, beta * np.exp(1j * delta)], dtype=complex), (2, 2))


def theta1(delta: float = 0.0) -> PureStateVector:
    """1/2 |HH> + sqrt(3)/2 e^{i delta}|VV>; loses entanglement before full damping."""
    return two_qubit_state(0.5, math.sqrt(3) / 2, delta)


def theta2(delta: float = 0.0) -> PureStateVector:
    """sqrt(3)/2 |HH> + 1/2 e^{i delta}|VV>; stays entangled until full damping."""
    return two_qubit_state(math.sqrt(3) / 2, 0.5, delta)


def random_pure_state(layout: Sequence[int], rng: np.random.Generator) -> PureStateVector:
    """Haar-random pure state."""
    dim = math.prod(layout)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return PureStateVector(v / np.linalg.norm(v), tuple(layout))


def random_density_matrix(layout: Sequence[int], rng: np.random.Generator, rank: int | None = None) -> DensityMatrix:
    """Random mixed state from a Ginibre matrix.

    Args:
        layout (Sequence[int]): Subsystem dimensions.
        rng (Generator): Random number generator.
        rank (int | None): Rank of the state; full rank by default.

    Returns:
        DensityMatrix
    """
    dim = math.prod(layout)
    g = rng.standard_normal((dim, rank or dim)) + 1j * rng.standard_normal((dim, rank or dim))
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, tuple(layout))


def lift_operator(op: npt.ArrayLike, layout: Sequence[int], target: int) -> ComplexMatrix:
    """Embed an operator acting on one slot into the full space, identity elsewhere.

    Args:
        op (ArrayLike): Square operator on the target slot.
        layout (Sequence[int]): Subsystem dimensions.
        target (int): Layout position.

    Returns:
        ComplexMatrix
    """
    (target,) = _check_slots((target,), layout)
    op = np.asarray(op, dtype=complex)

    if op.shape != (layout[target], layout[target]):
        raise SagnacSimValueError(f"Operator shape {op.shape} does not fit slot {target} of layout {tuple(layout)}.")

    before = math.prod(layout[:target])
    after = math.prod(layout[target + 1 :])

    return np.kron(np.kron(np.eye(before), op), np.eye(after))
