"""Simulated photon-count tomography with maximum-likelihood reconstruction."""

from __future__ import annotations

import itertools
import logging
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import minimize

from .channels import ChannelKind, sagnac_unitary, settings_for
from .measures import concurrence_two_qubit, predictability, visibility
from .shared import SagnacSimRuntimeError, SagnacSimValueError, format_number
from .statealg import POLARIZATION_KETS, DensityMatrix, PureStateVector, fidelity, ket, purity

if TYPE_CHECKING:
    from pathlib import Path

SeedT = int | Sequence[int]
StatisticT = Callable[[DensityMatrix], float]

SINGLE_QUBIT_LABELS = ("H", "V", "+", "-", "R", "L")

MAX_ITERATIONS = 10_000
GRADIENT_TOLERANCE = 1e-8
LIKELIHOOD_TOLERANCE = 1e-12

# A line search that stalls at machine precision counts as converged only below this gradient.
STALLED_GRADIENT_TOLERANCE = 1e-6

# Expected probabilities are floored before taking logarithms.
PROBABILITY_FLOOR = 1e-300

# Scale of the seeded diagonal jitter added to the maximally mixed starting point.
INITIAL_JITTER = 1e-3

COUNT_FILE_HEADER = "exposure="

# Use a named logger instead of root logger
logger = logging.getLogger("sagnacsim")


######################################################################
# Domain types


@dataclass(frozen=True)
class ProjectorSetting:
    """Projective measurement setting, e.g. "H" or "+R"."""

    label: str
    projector: PureStateVector

    @classmethod
    def from_label(cls, label: str) -> ProjectorSetting:
        """Setting for a product of polarization kets, one label character per qubit."""
        return cls(label, ket(label))


@dataclass(frozen=True)
class CountRecord:
    """Photon counts for one setting.

    Simulated counts are integers. Noise-free expected records carry real counts.
    """

    label: str
    counts: float
    exposure: float

    def __post_init__(self) -> None:
        """Reject negative or non-finite counts and non-positive exposures."""
        if not (math.isfinite(self.counts) and self.counts >= 0):
            raise SagnacSimValueError(f"'{self.label}': Counts must be non-negative; got {self.counts}.")
        if not (math.isfinite(self.exposure) and self.exposure > 0):
            raise SagnacSimValueError(f"'{self.label}': Exposure must be positive; got {self.exposure}.")


@dataclass(frozen=True)
class MLEResult:
    """Maximum-likelihood reconstruction."""

    rho: DensityMatrix
    log_likelihood: float
    iterations: int
    converged: bool


######################################################################
# Helper functions


def _seed_tuple(seed: SeedT, *extra: int) -> tuple[int, ...]:
    return (seed, *extra) if isinstance(seed, int) else (*seed, *extra)


def _rng(seed: SeedT, *extra: int) -> np.random.Generator:
    return np.random.default_rng(_seed_tuple(seed, *extra))


def _projectors(labels: Sequence[str], dim: int) -> np.ndarray:
    """Stack of rank-one projectors, shape (m, dim, dim)."""
    projectors = []

    for label in labels:
        v = ket(label).amplitudes
        if v.size != dim:
            raise SagnacSimValueError(f"'{label}': Setting dimension {v.size} does not match {dim}.")
        projectors.append(np.outer(v, v.conj()))

    return np.array(projectors)


def _check_informationally_complete(projectors: np.ndarray, dim: int) -> None:
    rank = np.linalg.matrix_rank(projectors.reshape(len(projectors), -1))
    if rank < dim**2:
        raise SagnacSimValueError(f"Measurement settings are not informationally complete: rank {rank} < {dim**2}.")


def _unpack(x: np.ndarray, dim: int) -> np.ndarray:
    """Lower-triangular T from d real diagonal entries and d(d-1)/2 complex off-diagonal entries."""
    t = np.zeros((dim, dim), dtype=complex)
    t[np.diag_indices(dim)] = x[:dim]
    rows, cols = np.tril_indices(dim, -1)
    n_off = rows.size
    t[rows, cols] = x[dim : dim + n_off] + 1j * x[dim + n_off :]
    return t


def _pack_gradient(k: np.ndarray, dim: int) -> np.ndarray:
    """Gradient with respect to the packed parameters, given K with dL/dT_ab = K_ba."""
    rows, cols = np.tril_indices(dim, -1)
    kt = k.T
    return np.concatenate(
        [
            2 * kt[np.diag_indices(dim)].real,
            2 * kt[rows, cols].real,
            -2 * kt[rows, cols].imag,
        ]
    )


def _rho_from_t(t: np.ndarray) -> np.ndarray:
    a = t.conj().T @ t
    return a / np.trace(a).real


######################################################################
# Module public


def single_qubit_settings() -> list[ProjectorSetting]:
    """Projectors onto H, V, +, -, R, L."""
    return [ProjectorSetting.from_label(label) for label in SINGLE_QUBIT_LABELS]


def two_qubit_settings() -> list[ProjectorSetting]:
    """The 36 products of single-qubit settings, HH through LL."""
    return [ProjectorSetting.from_label(a + b) for a, b in itertools.product(SINGLE_QUBIT_LABELS, repeat=2)]


def settings_for_qubits(qubits: int) -> list[ProjectorSetting]:
    """Over-complete product settings for one or two qubits."""
    match qubits:
        case 1:
            return single_qubit_settings()
        case 2:
            return two_qubit_settings()

    raise SagnacSimValueError(f"Tomography settings are defined for one or two qubits; got {qubits}.")


def expected_counts(rho: DensityMatrix, settings: Sequence[ProjectorSetting], exposure: float) -> list[CountRecord]:
    """Noise-free expected counts exposure x <Pi>.

    Args:
        rho (DensityMatrix): State measured.
        settings (Sequence[ProjectorSetting]): Measurement settings.
        exposure (float): Expected total counts per setting.

    Returns:
        list[CountRecord]
    """
    if not exposure > 0:
        raise SagnacSimValueError(f"Exposure must be positive; got {exposure}.")

    records = []
    for setting in settings:
        v = setting.projector.amplitudes
        if v.size != rho.dim:
            raise SagnacSimValueError(f"'{setting.label}': Setting dimension {v.size} does not match state {rho.dim}.")
        probability = max(float(np.real(v.conj() @ rho.matrix @ v)), 0.0)
        records.append(CountRecord(setting.label, exposure * probability, exposure))

    return records


def simulate_counts(rho: DensityMatrix, settings: Sequence[ProjectorSetting], exposure: float, seed: SeedT) -> list[CountRecord]:
    """Poissonian photon counts, deterministic given the seed.

    Args:
        rho (DensityMatrix): State measured.
        settings (Sequence[ProjectorSetting]): Measurement settings.
        exposure (float): Expected total counts per setting.
        seed (int | Sequence[int]): Random seed.

    Returns:
        list[CountRecord]
    """
    means = expected_counts(rho, settings, exposure)
    counts = _rng(seed).poisson([record.counts for record in means])

    return [CountRecord(record.label, int(n), exposure) for record, n in zip(means, counts, strict=True)]


def mle_reconstruct(records: Sequence[CountRecord], dim: int, seed: SeedT = 0) -> MLEResult:
    """Maximum-likelihood density matrix from counts.

    Maximizes sum_j (n_j ln lambda_j - lambda_j), lambda_j = exposure_j Tr(Pi_j rho), over
    rho = T^dagger T / Tr(T^dagger T) with T lower triangular, so rho is always physical.
    The objective is normalized by the total counts so the tolerances are scale free.

    Args:
        records (Sequence[CountRecord]): Counts; settings must be informationally complete.
        dim (int): Hilbert space dimension.
        seed (int | Sequence[int]): Seed of the starting-point jitter.

    Returns:
        MLEResult: `converged` is False when the optimizer did not report success, unless its line search
            stalled with a gradient below `STALLED_GRADIENT_TOLERANCE`.
    """
    if not records:
        raise SagnacSimValueError("No count records.")

    projectors = _projectors([record.label for record in records], dim)
    _check_informationally_complete(projectors, dim)

    n = np.array([record.counts for record in records], dtype=float)
    exposure = np.array([record.exposure for record in records], dtype=float)
    scale = max(float(n.sum()), 1.0)

    def _neg_log_likelihood(x: np.ndarray) -> tuple[float, np.ndarray]:
        t = _unpack(x, dim)
        a = t.conj().T @ t
        trace = np.trace(a).real
        rho = a / trace

        prob = np.maximum(np.einsum("jab,ba->j", projectors, rho).real, PROBABILITY_FLOOR)
        value = float(np.sum(n * np.log(prob) - exposure * prob))

        # dL = Tr(G drho) with G = sum_j (n_j/p_j - e_j) Pi_j
        g = np.einsum("j,jab->ab", n / prob - exposure, projectors)
        h = (g - np.trace(g @ rho).real * np.eye(dim)) / trace
        k = h @ t.conj().T

        return -value / scale, -_pack_gradient(k, dim) / scale

    jitter = INITIAL_JITTER * _rng(seed).standard_normal(dim)
    x0 = np.concatenate([np.full(dim, 1 / math.sqrt(dim)) + jitter, np.zeros(dim * (dim - 1))])

    result = minimize(
        _neg_log_likelihood,
        x0,
        jac=True,
        method="L-BFGS-B",
        options={
            "maxiter": MAX_ITERATIONS,
            "maxfun": 10 * MAX_ITERATIONS,
            "gtol": GRADIENT_TOLERANCE,
            "ftol": LIKELIHOOD_TOLERANCE,
        },
    )

    converged = bool(result.success)
    if not converged and result.status == 2:
        # Status 2 is an abnormal line-search stop
        converged = float(np.max(np.abs(result.jac))) <= STALLED_GRADIENT_TOLERANCE
    if not converged:
        logger.warning(f"Maximum-likelihood reconstruction did not converge after {result.nit} iterations: {result.message}")
    else:
        logger.debug(f"Maximum-likelihood reconstruction stopped after {result.nit} iterations: {result.message}")

    rho = DensityMatrix(_rho_from_t(_unpack(result.x, dim)))

    return MLEResult(rho=rho, log_likelihood=-float(result.fun) * scale, iterations=int(result.nit), converged=converged)


def monte_carlo_statistics(
    records: Sequence[CountRecord],
    n_resamples: int,
    statistics: Mapping[str, StatisticT],
    seed: SeedT,
    dim: int | None = None,
) -> dict[str, tuple[float, float]]:
    """Monte-Carlo mean and standard deviation of several statistics of the reconstructed state.

    Each resample draws every count from Poisson(n_j) and reruns the reconstruction.
    Resample `i` uses the seed (seed, i), independent of evaluation order.
    Resamples whose reconstruction fails or does not converge are dropped and counted.

    Args:
        records (Sequence[CountRecord]): Measured counts.
        n_resamples (int): Number of resamples, at least 2.
        statistics (Mapping[str, StatisticT]): Named functions of the reconstructed state.
        seed (int | Sequence[int]): Random seed.
        dim (int | None): Hilbert space dimension; inferred from the labels by default.

    Returns:
        dict[str, tuple[float, float]]: (mean, sample standard deviation) by statistic name.
    """
    if n_resamples < 2:
        raise SagnacSimValueError(f"At least 2 resamples are required; got {n_resamples}.")
    if not records:
        raise SagnacSimValueError("No count records.")

    if dim is None:
        dim = 2 ** len(records[0].label)

    observed = [record.counts for record in records]
    samples: dict[str, list[float]] = {name: [] for name in statistics}
    dropped = 0

    for i in range(n_resamples):
        rng = _rng(seed, i)
        resampled = [
            CountRecord(record.label, int(c), record.exposure) for record, c in zip(records, rng.poisson(observed), strict=True)
        ]

        try:
            result = mle_reconstruct(resampled, dim, seed=_seed_tuple(seed, i))
        except SagnacSimValueError as err:
            logger.debug(f"Resample {i}: {err}")
            dropped += 1
            continue

        if not result.converged:
            dropped += 1
            continue

        for name, statistic in statistics.items():
            samples[name].append(float(statistic(result.rho)))

    if dropped:
        logger.warning(f"Dropped {dropped} of {n_resamples} Monte-Carlo resamples")

    if n_resamples - dropped < 2:
        raise SagnacSimRuntimeError(f"Only {n_resamples - dropped} Monte-Carlo resamples succeeded.")

    return {name: (float(np.mean(values)), float(np.std(values, ddof=1))) for name, values in samples.items()}


def monte_carlo_errorbars(
    records: Sequence[CountRecord],
    n_resamples: int,
    statistic: StatisticT | str,
    seed: SeedT,
) -> tuple[float, float]:
    """Monte-Carlo mean and standard deviation of one statistic.

    Args:
        records (Sequence[CountRecord]): Measured counts.
        n_resamples (int): Number of resamples, at least 2.
        statistic (StatisticT | str): Function of the reconstructed state, or a name in `STATISTICS`.
        seed (int | Sequence[int]): Random seed.

    Returns:
        tuple[float, float]: (mean, sample standard deviation).
    """
    if isinstance(statistic, str):
        try:
            statistic = STATISTICS[statistic]
        except KeyError:
            raise SagnacSimValueError(f"'{statistic}': Unknown statistic; expected one of {', '.join(STATISTICS)}.") from None

    return monte_carlo_statistics(records, n_resamples, {"statistic": statistic}, seed)["statistic"]


def fidelity_with(target: DensityMatrix) -> StatisticT:
    """Statistic returning the fidelity with a fixed state."""

    def _fidelity(rho: DensityMatrix) -> float:
        return fidelity(rho, target)

    return _fidelity


def pv_from_counts(cH: float, cV: float, cPlus: float, cR: float) -> tuple[float, float]:
    """Predictability and visibility from counts, normalizing every basis by cH + cV.

    V = 2 sqrt((2 c+/(cH+cV) - 1)^2 + (2 cR/(cH+cV) - 1)^2) reaches 2 on perfect |+> statistics;
    see `pv_from_counts_normalized` for the per-basis variant.

    Args:
        cH (float): Counts projecting on H.
        cV (float): Counts projecting on V.
        cPlus (float): Counts projecting on +.
        cR (float): Counts projecting on R.

    Returns:
        tuple[float, float]: (P, V).
    """
    total = cH + cV
    if total <= 0:
        raise SagnacSimValueError("cH + cV must be positive.")

    return abs(cH - cV) / total, 2 * math.sqrt((2 * cPlus / total - 1) ** 2 + (2 * cR / total - 1) ** 2)


def pv_from_counts_normalized(cH: float, cV: float, cPlus: float, cMinus: float, cR: float, cL: float) -> tuple[float, float]:  # noqa: PLR0913
    """Predictability and visibility from counts, normalizing each basis by its own total.

    Reproduces V = 2|<sigma_plus>| on exact statistics; clamped to [0, 1].

    Args:
        cH (float): Counts projecting on H.
        cV (float): Counts projecting on V.
        cPlus (float): Counts projecting on +.
        cMinus (float): Counts projecting on -.
        cR (float): Counts projecting on R.
        cL (float): Counts projecting on L.

    Returns:
        tuple[float, float]: (P, V).
    """
    for name, total in (("cH + cV", cH + cV), ("c+ + c-", cPlus + cMinus), ("cR + cL", cR + cL)):
        if total <= 0:
            raise SagnacSimValueError(f"{name} must be positive.")

    pred = abs(cH - cV) / (cH + cV)
    vis = math.sqrt((2 * cPlus / (cPlus + cMinus) - 1) ** 2 + (2 * cR / (cR + cL) - 1) ** 2)

    return min(pred, 1.0), min(vis, 1.0)


def estimate_p(c0: float, c1: float) -> float:
    """Transition probability c1 / (c0 + c1) from mode-resolved counts."""
    if c0 < 0 or c1 < 0 or c0 + c1 <= 0:
        raise SagnacSimValueError("c0 + c1 must be positive.")

    return c1 / (c0 + c1)


def sagnac_calibration_counts(kind: ChannelKind, p: float, exposure: float, seed: SeedT) -> tuple[int, int]:
    """Counts (c0, c1) in propagation modes 0 and 1 for a |V> photon sent through the loop.

    Only amplitude damping and dephasing map p to the mode-1 probability directly.

    Args:
        kind (ChannelKind): Amplitude damping or dephasing.
        p (float): Transition probability.
        exposure (float): Expected total counts.
        seed (int | Sequence[int]): Random seed.

    Returns:
        tuple[int, int]
    """
    if kind not in (ChannelKind.AMPLITUDE_DAMPING, ChannelKind.DEPHASING):
        raise SagnacSimValueError(f"Calibration counts are defined for amplitude damping and dephasing; got {kind.value}.")

    if not exposure > 0:
        raise SagnacSimValueError(f"Exposure must be positive; got {exposure}.")

    u = sagnac_unitary(settings_for(kind, p)).reshape(2, 2, 2, 2)  # [pol_out, mode_out, pol_in, mode_in]
    out = u[:, :, 1, 0]  # image of |V>|0>
    mode_prob = np.sum(np.abs(out) ** 2, axis=0)

    c0, c1 = _rng(seed).poisson(exposure * np.clip(mode_prob, 0, None))
    return int(c0), int(c1)


def write_count_file(path: Path, records: Sequence[CountRecord]) -> None:
    """Write counts as an `exposure=<real>` header followed by `<label>,<counts>` lines.

    Args:
        path (Path): Output file.
        records (Sequence[CountRecord]): Counts sharing one exposure.
    """
    if not records:
        raise SagnacSimValueError("No count records to write.")

    exposures = {record.exposure for record in records}
    if len(exposures) != 1:
        raise SagnacSimValueError("Count records must share one exposure.")

    lines = [f"{COUNT_FILE_HEADER}{format_number(records[0].exposure)}"]
    for record in records:
        counts = str(int(record.counts)) if float(record.counts).is_integer() else format_number(record.counts)
        lines.append(f"{record.label},{counts}")

    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as err:
        raise SagnacSimRuntimeError(f"'{path}': {err}") from err

    logger.info(f"Wrote {len(records)} count records to '{path}'")


def read_count_file(path: Path) -> list[CountRecord]:
    """Read a count file written by `write_count_file`.

    Args:
        path (Path): Count file.

    Returns:
        list[CountRecord]
    """
    try:
        lines = [line.strip() for line in path.read_text().splitlines()]
    except OSError as err:
        raise SagnacSimRuntimeError(f"'{path}': {err}") from err

    lines = [line for line in lines if line]

    if not lines or not lines[0].startswith(COUNT_FILE_HEADER):
        raise SagnacSimValueError(f"'{path}': Missing '{COUNT_FILE_HEADER}<real>' header.")

    try:
        exposure = float(lines[0].removeprefix(COUNT_FILE_HEADER))
    except ValueError:
        raise SagnacSimValueError(f"'{path}': Invalid exposure '{lines[0]}'.") from None

    records = []
    for lineno, line in enumerate(lines[1:], start=2):
        label, sep, counts = line.partition(",")
        if not sep or not label or not all(c in POLARIZATION_KETS for c in label):
            raise SagnacSimValueError(f"'{path}': line {lineno}: Expected '<label>,<counts>'.")
        try:
            value = float(counts)
        except ValueError:
            raise SagnacSimValueError(f"'{path}': line {lineno}: Invalid counts '{counts}'.") from None
        records.append(CountRecord(label, int(value) if value.is_integer() else value, exposure))

    if not records:
        raise SagnacSimValueError(f"'{path}': No count records.")

    logger.debug(f"Read {len(records)} count records from '{path}'")

    return records


def _concurrence(rho: DensityMatrix) -> float:
    return concurrence_two_qubit(rho)[0]


def _trace(rho: DensityMatrix) -> float:
    return float(np.trace(rho.matrix).real)


# Statistics by name, for configuration and the command line.
STATISTICS: Mapping[str, StatisticT] = {
    "trace": _trace,
    "purity": purity,
    "concurrence": _concurrence,
    "predictability": predictability,
    "visibility": visibility,
}
