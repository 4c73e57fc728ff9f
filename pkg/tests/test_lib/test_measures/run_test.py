from __future__ import annotations  # noqa: INP001

import cmath
import math

import numpy as np
import pytest

from sagnacsim.channels import ChannelKind, apply_dilation, apply_local, make_channel
from sagnacsim.measures import (
    analytic_curves,
    bipartite_visibility,
    complementarity_triple,
    concurrence_pure_bipartite,
    concurrence_two_qubit,
    multipartite_concurrence,
    negativity,
    pair_concurrence,
    predictability,
    single_qubit_curves,
    system_environment_concurrence,
    visibility,
    witness_best_gamma,
    witness_gamma,
    wootters_lambda,
)
from sagnacsim.shared import SagnacSimValueError
from sagnacsim.statealg import (
    DensityMatrix,
    PureStateVector,
    density_from_pure,
    ket,
    maximally_mixed,
    mix,
    partial_trace,
    random_density_matrix,
    random_pure_state,
    single_qubit_state,
    theta1,
    two_qubit_state,
)

ALPHA1, BETA1 = 0.5, math.sqrt(3) / 2
BELL = two_qubit_state(1 / math.sqrt(2), 1 / math.sqrt(2))


def _dual_channel(kind: ChannelKind, p: float) -> DensityMatrix:
    ch = make_channel(kind, p)
    return apply_local([ch, ch], density_from_pure(theta1()))


def _dual_dilation(kind: ChannelKind, p: float, psi: PureStateVector | None = None) -> PureStateVector:
    # Layout (S1, S2, E1, E2)
    ch = make_channel(kind, p)
    return apply_dilation(ch, apply_dilation(ch, psi or theta1(), 0), 1)


######################################################################
# Tests


def test_concurrence_reference_states() -> None:  # noqa: D103
    assert concurrence_two_qubit(density_from_pure(BELL))[0] == pytest.approx(1, abs=1e-12)
    assert concurrence_two_qubit(density_from_pure(ket("H+")))[0] == pytest.approx(0, abs=1e-7)
    assert concurrence_two_qubit(density_from_pure(theta1()))[0] == pytest.approx(math.sqrt(3) / 2, abs=1e-12)

    c, lam = concurrence_two_qubit(maximally_mixed((2, 2)))
    assert c == 0
    assert lam == pytest.approx(-0.5, abs=1e-12)


def test_concurrence_amplitude_damping() -> None:  # noqa: D103
    rho = _dual_channel(ChannelKind.AMPLITUDE_DAMPING, 0.3)

    c, lam = concurrence_two_qubit(rho)
    assert c == pytest.approx(0.2912, abs=1e-4)
    assert c == pytest.approx(analytic_curves(ChannelKind.AMPLITUDE_DAMPING, ALPHA1, BETA1, 0.3).c_s1s2, abs=1e-10)
    assert lam == pytest.approx(c)

    # Past sudden death Lambda goes negative and the concurrence is clipped.
    c, lam = concurrence_two_qubit(_dual_channel(ChannelKind.AMPLITUDE_DAMPING, 0.8))
    assert c == 0
    assert lam < 0


def test_concurrence_bounds(rng: np.random.Generator) -> None:  # noqa: D103
    for _ in range(20):
        rho = random_density_matrix((2, 2), rng)
        c, lam = concurrence_two_qubit(rho)
        assert 0 <= c <= 1 + 1e-12
        assert c == max(0.0, lam)
        assert wootters_lambda(rho) == lam


def test_concurrence_pure_matches_wootters(rng: np.random.Generator) -> None:  # noqa: D103
    for _ in range(10):
        psi = random_pure_state((2, 2), rng)
        assert concurrence_pure_bipartite(psi, (0,)) == pytest.approx(concurrence_two_qubit(density_from_pure(psi))[0], abs=1e-9)


def test_concurrence_errors() -> None:  # noqa: D103
    with pytest.raises(SagnacSimValueError, match="two-qubit"):
        concurrence_two_qubit(maximally_mixed((2,)))

    with pytest.raises(SagnacSimValueError, match="single-qubit"):
        predictability(maximally_mixed((2, 2)))


def test_negativity() -> None:  # noqa: D103
    assert negativity(density_from_pure(BELL)) == pytest.approx(0.5, abs=1e-12)
    assert negativity(density_from_pure(theta1())) == pytest.approx(math.sqrt(3) / 4, abs=1e-12)
    assert negativity(density_from_pure(theta1()), 0) == pytest.approx(math.sqrt(3) / 4, abs=1e-12)
    assert negativity(maximally_mixed((2, 2))) == pytest.approx(0, abs=1e-15)

    with pytest.raises(SagnacSimValueError, match="bipartite"):
        negativity(maximally_mixed((2, 2, 2)))


def test_negativity_detects_same_states_as_concurrence(rng: np.random.Generator) -> None:  # noqa: D103
    states = [random_density_matrix((2, 2), rng, rank=rank) for rank in (1, 2, 3, 4) for _ in range(10)]
    states += [_dual_channel(ChannelKind.AMPLITUDE_DAMPING, p) for p in (0.5, 0.57, 0.58, 0.7, 0.95, 0.999)]

    for rho in states:
        conc = concurrence_two_qubit(rho)[0]
        neg = negativity(rho)

        # Two-qubit bounds between the two measures; equal for pure states
        assert 2 * neg <= conc + 1e-9
        assert 2 * neg >= math.sqrt((1 - conc) ** 2 + conc**2) - (1 - conc) - 1e-9

        if conc > 1e-4:
            assert neg > 0

    # Sudden death at p = 1/sqrt(3) for both measures
    for p in (0.5, 0.57):
        assert negativity(_dual_channel(ChannelKind.AMPLITUDE_DAMPING, p)) > 0
    for p in (0.58, 0.7, 0.95, 0.999):
        assert negativity(_dual_channel(ChannelKind.AMPLITUDE_DAMPING, p)) == pytest.approx(0, abs=1e-12)


def test_entanglement_witness() -> None:  # noqa: D103
    assert witness_gamma(density_from_pure(BELL), 0) == pytest.approx(1)
    assert witness_gamma(density_from_pure(BELL), math.pi) == pytest.approx(-1)
    assert witness_gamma(maximally_mixed((2, 2)), 0) == pytest.approx(-0.5)

    phased = density_from_pure(two_qubit_state(ALPHA1, BETA1, math.pi / 3))
    theta, gamma = witness_best_gamma(phased)
    assert theta == pytest.approx(math.pi / 3)
    assert gamma == pytest.approx(2 * ((0.5 + ALPHA1 * BETA1) - 0.5))

    assert witness_best_gamma(maximally_mixed((2, 2))) == (0.0, pytest.approx(-0.5))


def test_predictability_visibility() -> None:  # noqa: D103
    assert predictability(density_from_pure(ket("H"))) == pytest.approx(1)
    assert visibility(density_from_pure(ket("H"))) == pytest.approx(0)
    assert predictability(density_from_pure(ket("R"))) == pytest.approx(0)
    assert visibility(density_from_pure(ket("R"))) == pytest.approx(1)


def test_complementarity_amplitude_damping() -> None:  # noqa: D103
    psi = single_qubit_state(ALPHA1, BETA1)
    joint = apply_dilation(make_channel(ChannelKind.AMPLITUDE_DAMPING, 0.5), psi, 0)

    triple = complementarity_triple(joint, 0)
    assert triple.pred_sq == pytest.approx(0.0625, abs=1e-12)
    assert triple.vis_sq == pytest.approx(0.375, abs=1e-12)
    assert triple.conc_sq == pytest.approx(0.5625, abs=1e-12)
    assert triple.total == pytest.approx(1, abs=1e-12)

    p_s, v_s, c_se = single_qubit_curves(ChannelKind.AMPLITUDE_DAMPING, ALPHA1, BETA1, 0.5)
    assert p_s == pytest.approx(0.25)
    assert v_s == pytest.approx(0.6124, abs=1e-4)
    assert c_se == pytest.approx(0.75)

    # Same triple from the joint density matrix
    assert complementarity_triple(density_from_pure(joint), 0).total == pytest.approx(1, abs=1e-9)

    with pytest.raises(SagnacSimValueError, match="pure joint"):
        complementarity_triple(maximally_mixed((2, 2)), 0)


@pytest.mark.parametrize("kind", list(ChannelKind))
@pytest.mark.parametrize(
    ("alpha", "beta"),
    [
        (ALPHA1, BETA1),
        (0.6, 0.8),
        (0.6, 0.8 * cmath.exp(0.7j)),
    ],
)
def test_single_qubit_curves_match_numeric(kind: ChannelKind, alpha: complex, beta: complex) -> None:  # noqa: D103
    psi = single_qubit_state(alpha, beta)

    for p in (0.0, 0.2, 0.5, 0.9, 1.0):
        triple = complementarity_triple(apply_dilation(make_channel(kind, p), psi, 0), 0)
        p_s, v_s, c_se = single_qubit_curves(kind, alpha, beta, p)

        assert triple.pred_sq == pytest.approx(p_s**2, abs=1e-10)
        assert triple.vis_sq == pytest.approx(v_s**2, abs=1e-10)
        assert triple.conc_sq == pytest.approx(c_se**2, abs=1e-10)
        assert triple.total == pytest.approx(1, abs=1e-10)


def test_amplitude_damping_curves_match_numeric() -> None:  # noqa: D103
    for p in (0.0, 0.1, 0.3, 0.5, 0.7, 1.0):
        curves = analytic_curves(ChannelKind.AMPLITUDE_DAMPING, ALPHA1, BETA1, p)
        joint = _dual_dilation(ChannelKind.AMPLITUDE_DAMPING, p)
        rho = partial_trace(density_from_pure(joint), (0, 1))

        assert concurrence_two_qubit(rho)[0] == pytest.approx(curves.c_s1s2, abs=1e-8)
        assert system_environment_concurrence(joint, (0, 1)) == pytest.approx(curves.c_se, abs=1e-7)
        assert pair_concurrence(joint, (0, 2)) == pytest.approx(curves.c_s1e1, abs=1e-8)
        assert pair_concurrence(joint, (2, 3)) == pytest.approx(curves.c_e1e2, abs=1e-8)
        assert bipartite_visibility(rho) == pytest.approx(curves.v_s1s2, abs=1e-12)


@pytest.mark.parametrize("kind", [ChannelKind.AMPLITUDE_DAMPING, ChannelKind.DEPHASING])
def test_analytic_curves_random_states(kind: ChannelKind, rng: np.random.Generator) -> None:  # noqa: D103
    for _ in range(25):
        a = float(rng.uniform(0.05, 0.95))
        alpha = a * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        beta = math.sqrt(1 - a**2) * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        p = float(rng.uniform(0, 1))

        curves = analytic_curves(kind, alpha, beta, p)
        joint = _dual_dilation(kind, p, two_qubit_state(alpha, beta))
        rho = partial_trace(density_from_pure(joint), (0, 1))

        assert concurrence_two_qubit(rho)[0] == pytest.approx(curves.c_s1s2, abs=1e-7)
        assert bipartite_visibility(rho) == pytest.approx(curves.v_s1s2, abs=1e-12)
        assert system_environment_concurrence(joint, (0, 1)) == pytest.approx(curves.c_se, abs=1e-7)
        assert pair_concurrence(joint, (0, 2)) == pytest.approx(curves.c_s1e1, abs=1e-7)

        if curves.c_e1e2 is not None:
            assert pair_concurrence(joint, (2, 3)) == pytest.approx(curves.c_e1e2, abs=1e-7)


def test_sudden_death_and_birth() -> None:  # noqa: D103
    curves = analytic_curves(ChannelKind.AMPLITUDE_DAMPING, ALPHA1, BETA1, 0.5)
    assert curves.p_esd == pytest.approx(1 / math.sqrt(3))
    assert curves.p_esb == pytest.approx(1 - 1 / math.sqrt(3))

    assert analytic_curves(ChannelKind.AMPLITUDE_DAMPING, 0.6, 0.8, 0.9).c_s1s2 == 0
    assert analytic_curves(ChannelKind.AMPLITUDE_DAMPING, 0.6, 0.8, 0.7).c_s1s2 > 0

    # |alpha| >= |beta|: no sudden death
    curves = analytic_curves(ChannelKind.AMPLITUDE_DAMPING, 0.8, 0.6, 0.5)
    assert curves.p_esd is None
    assert curves.p_esb is None

    with pytest.raises(SagnacSimValueError, match="closed-form"):
        analytic_curves(ChannelKind.BIT_FLIP, ALPHA1, BETA1, 0.5)


def test_dephasing_curves() -> None:  # noqa: D103
    for p in (0.0, 0.4, 1.0):
        curves = analytic_curves(ChannelKind.DEPHASING, ALPHA1, BETA1, p)
        rho = _dual_channel(ChannelKind.DEPHASING, p)

        assert concurrence_two_qubit(rho)[0] == pytest.approx(curves.c_s1s2, abs=1e-10)
        assert bipartite_visibility(rho) == pytest.approx(curves.c_s1s2, abs=1e-12)
        assert curves.c_s1e1 == 0
        assert curves.c_e1e2 is None

    assert analytic_curves(ChannelKind.DEPHASING, ALPHA1, BETA1, 1).c_n == pytest.approx(1.1456, abs=1e-4)

    # Numeric multipartite concurrence at the ends of the range
    for p in (0.0, 1.0):
        joint = _dual_dilation(ChannelKind.DEPHASING, p)
        expected = analytic_curves(ChannelKind.DEPHASING, ALPHA1, BETA1, p).c_n
        assert multipartite_concurrence(joint) == pytest.approx(expected, abs=1e-9)


def test_multipartite_concurrence() -> None:  # noqa: D103
    assert multipartite_concurrence(BELL) == pytest.approx(1)
    assert multipartite_concurrence(ket("HV+")) == pytest.approx(0, abs=1e-7)

    with pytest.raises(SagnacSimValueError, match="two qubits"):
        multipartite_concurrence(ket("H"))


def test_white_noise_admixture() -> None:  # noqa: D103
    # Werner-like state: C = max(0, (3v - 1)/2)
    for v in (0.2, 1 / 3, 0.6, 0.9):
        rho = mix(density_from_pure(BELL), maximally_mixed((2, 2)), v)
        assert concurrence_two_qubit(rho)[0] == pytest.approx(max(0.0, (3 * v - 1) / 2), abs=1e-9)
