from __future__ import annotations  # noqa: INP001

import math

import numpy as np
import pytest

from sagnacsim.shared import SagnacSimValueError
from sagnacsim.statealg import (
    IDENTITY2,
    SIGMA_Z,
    DensityMatrix,
    PureStateVector,
    density_from_pure,
    fidelity,
    herm_eigenvalues,
    ket,
    maximally_mixed,
    mix,
    partial_trace,
    partial_transpose,
    projection_probability,
    purity,
    random_density_matrix,
    random_pure_state,
    reduced_state,
    tensor,
    theta1,
    two_qubit_state,
)

BELL = two_qubit_state(1 / math.sqrt(2), 1 / math.sqrt(2))


def _damped_joint(alpha: float, beta: float, p: float) -> PureStateVector:
    # alpha|H>|0> + beta sqrt(1-p)|V>|0> + beta sqrt(p)|H>|1>, layout (system, environment)
    return PureStateVector(np.array([alpha, beta * math.sqrt(p), beta * math.sqrt(1 - p), 0]), (2, 2))


######################################################################
# Tests


def test_tensor() -> None:  # noqa: D103
    np.testing.assert_array_equal(tensor(IDENTITY2, IDENTITY2), np.eye(4))
    np.testing.assert_array_equal(tensor(SIGMA_Z, SIGMA_Z), np.diag([1, -1, -1, 1]))

    product = tensor(density_from_pure(ket("H")), density_from_pure(ket("V")))
    expected = np.zeros((4, 4))
    expected[1, 1] = 1
    np.testing.assert_array_equal(product.matrix, expected)
    assert product.layout == (2, 2)

    with pytest.raises(SagnacSimValueError):
        tensor(ket("H"), density_from_pure(ket("H")))  # type: ignore[arg-type]


def test_partial_trace() -> None:  # noqa: D103
    reduced = partial_trace(density_from_pure(BELL), (0,))
    np.testing.assert_allclose(reduced.matrix, IDENTITY2 / 2, atol=1e-12)

    product = tensor(density_from_pure(ket("H")), density_from_pure(ket("+")))
    np.testing.assert_allclose(partial_trace(product, (0,)).matrix, np.diag([1, 0]), atol=1e-12)

    # alpha^2 = 1/4, p = 1/2
    joint = density_from_pure(_damped_joint(0.5, math.sqrt(3) / 2, 0.5))
    system = partial_trace(joint, (0,))
    np.testing.assert_allclose(np.diag(system.matrix).real, [0.625, 0.375], atol=1e-12)
    assert purity(system) == pytest.approx(0.78125, abs=1e-12)


def test_partial_trace_matches_reduced_state(rng: np.random.Generator) -> None:  # noqa: D103
    psi = random_pure_state((2, 2, 2), rng)

    for keep in ((0,), (1,), (2,), (0, 2), (1, 2)):
        np.testing.assert_allclose(partial_trace(density_from_pure(psi), keep).matrix, reduced_state(psi, keep).matrix, atol=1e-12)


def test_partial_trace_errors() -> None:  # noqa: D103
    rho = density_from_pure(BELL)

    with pytest.raises(SagnacSimValueError, match="At least one"):
        partial_trace(rho, ())

    with pytest.raises(SagnacSimValueError, match="out of range"):
        partial_trace(rho, (2,))

    with pytest.raises(SagnacSimValueError, match="Duplicate"):
        partial_trace(rho, (0, 0))


def test_partial_transpose() -> None:  # noqa: D103
    eigvals = herm_eigenvalues(partial_transpose(density_from_pure(BELL), 1))
    np.testing.assert_allclose(eigvals, [0.5, 0.5, 0.5, -0.5], atol=1e-12)

    product = density_from_pure(ket("H+"))
    np.testing.assert_allclose(herm_eigenvalues(partial_transpose(product, 0)), herm_eigenvalues(product.matrix), atol=1e-12)

    mixed = maximally_mixed((2, 2))
    np.testing.assert_allclose(partial_transpose(mixed, 1), np.eye(4) / 4, atol=1e-15)


def test_herm_eigenvalues() -> None:  # noqa: D103
    np.testing.assert_allclose(herm_eigenvalues(SIGMA_Z), [1, -1])
    np.testing.assert_allclose(herm_eigenvalues(np.eye(4) / 4), [0.25] * 4)
    np.testing.assert_allclose(herm_eigenvalues(np.diag([0.375, 0.625])), [0.625, 0.375])

    with pytest.raises(SagnacSimValueError, match="not Hermitian"):
        herm_eigenvalues(np.array([[0, 1], [0, 0]]))


def test_purity(rng: np.random.Generator) -> None:  # noqa: D103
    assert purity(density_from_pure(random_pure_state((2, 2), rng))) == pytest.approx(1, abs=1e-12)
    assert purity(maximally_mixed((2,))) == pytest.approx(0.5)

    rho = random_density_matrix((2, 2), rng)
    assert 0.25 - 1e-12 <= purity(rho) <= 1 + 1e-12


def test_projection_probability() -> None:  # noqa: D103
    phi0 = two_qubit_state(1 / math.sqrt(2), 1 / math.sqrt(2))

    assert projection_probability(density_from_pure(phi0), phi0) == pytest.approx(1)
    assert projection_probability(maximally_mixed((2, 2)), phi0) == pytest.approx(0.25)
    assert projection_probability(density_from_pure(theta1()), phi0) == pytest.approx((2 + math.sqrt(3)) / 4, abs=1e-12)

    with pytest.raises(SagnacSimValueError, match="Dimension mismatch"):
        projection_probability(maximally_mixed((2,)), phi0)


def test_density_matrix_validation() -> None:  # noqa: D103
    with pytest.raises(SagnacSimValueError, match="square"):
        DensityMatrix(np.ones((2, 3)) / 2)

    with pytest.raises(SagnacSimValueError, match="Hermitian"):
        DensityMatrix(np.array([[0.5, 0.5], [0, 0.5]]))

    with pytest.raises(SagnacSimValueError, match="trace"):
        DensityMatrix(np.eye(2))

    with pytest.raises(SagnacSimValueError, match="positive semidefinite"):
        DensityMatrix(np.diag([1.5, -0.5]))

    # Round-off negativity is clipped.
    rho = DensityMatrix(np.diag([1 + 1e-11, -1e-11]))
    assert herm_eigenvalues(rho.matrix)[-1] >= 0
    assert np.trace(rho.matrix).real == pytest.approx(1, abs=1e-15)

    with pytest.raises(SagnacSimValueError, match="norm"):
        PureStateVector(np.array([1, 1]))


def test_layout() -> None:  # noqa: D103
    assert maximally_mixed((2, 2, 2)).layout == (2, 2, 2)
    assert DensityMatrix(np.eye(4) / 4).layout == (2, 2)
    assert DensityMatrix(np.eye(3) / 3).layout == (3,)

    with pytest.raises(SagnacSimValueError, match="Layout"):
        DensityMatrix(np.eye(4) / 4, (2, 3))


def test_fidelity(rng: np.random.Generator) -> None:  # noqa: D103
    rho = random_density_matrix((2, 2), rng)
    sigma = random_density_matrix((2, 2), rng)

    assert fidelity(rho, rho) == pytest.approx(1, abs=1e-9)
    assert fidelity(rho, sigma) == pytest.approx(fidelity(sigma, rho), abs=1e-9)
    assert 0 <= fidelity(rho, sigma) <= 1

    # Pure-state shortcut
    assert fidelity(density_from_pure(ket("H")), maximally_mixed((2,))) == pytest.approx(0.5)
    assert fidelity(density_from_pure(ket("H")), density_from_pure(ket("V"))) == pytest.approx(0)


def test_mix() -> None:  # noqa: D103
    rho = mix(density_from_pure(BELL), maximally_mixed((2, 2)), 0.9)
    assert rho.matrix[0, 3].real == pytest.approx(0.45)
    assert rho.matrix[1, 1].real == pytest.approx(0.025)

    with pytest.raises(SagnacSimValueError, match="weight"):
        mix(rho, rho, 1.5)

    with pytest.raises(SagnacSimValueError, match="Layout mismatch"):
        mix(rho, maximally_mixed((4,)), 0.5)


def test_ket() -> None:  # noqa: D103
    r = ket("R").amplitudes
    np.testing.assert_allclose(r, [1 / math.sqrt(2), 1j / math.sqrt(2)])

    assert ket("HV").layout == (2, 2)
    np.testing.assert_array_equal(ket("HV").amplitudes, [0, 1, 0, 0])

    with pytest.raises(SagnacSimValueError, match="Unknown polarization"):
        ket("X")


def test_two_qubit_state() -> None:  # noqa: D103
    psi = two_qubit_state(0.5, math.sqrt(3) / 2, math.pi / 2)
    assert psi.amplitudes[3] == pytest.approx(1j * math.sqrt(3) / 2)

    with pytest.raises(SagnacSimValueError, match="not normalized"):
        two_qubit_state(0.5, 0.5)
