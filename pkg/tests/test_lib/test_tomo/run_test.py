from __future__ import annotations  # noqa: INP001

import math
from pathlib import Path

import pytest

from sagnacsim.channels import ChannelKind
from sagnacsim.shared import SagnacSimValueError
from sagnacsim.statealg import density_from_pure, ket, maximally_mixed, theta1
from sagnacsim.tomo import (
    CountRecord,
    ProjectorSetting,
    estimate_p,
    expected_counts,
    pv_from_counts,
    pv_from_counts_normalized,
    read_count_file,
    sagnac_calibration_counts,
    settings_for_qubits,
    simulate_counts,
    single_qubit_settings,
    two_qubit_settings,
    write_count_file,
)

######################################################################
# Tests


def test_settings() -> None:  # noqa: D103
    assert [setting.label for setting in single_qubit_settings()] == ["H", "V", "+", "-", "R", "L"]

    pairs = two_qubit_settings()
    assert len(pairs) == 36
    assert pairs[0].label == "HH"
    assert pairs[-1].label == "LL"
    assert pairs[0].projector.layout == (2, 2)

    assert [setting.label for setting in settings_for_qubits(2)] == [setting.label for setting in pairs]

    with pytest.raises(SagnacSimValueError, match="one or two qubits"):
        settings_for_qubits(3)


def test_expected_counts() -> None:  # noqa: D103
    h = expected_counts(density_from_pure(ket("H")), single_qubit_settings(), 1000)
    assert [record.counts for record in h] == pytest.approx([1000, 0, 500, 500, 500, 500])

    mixed = expected_counts(maximally_mixed((2,)), [ProjectorSetting.from_label("H")], 1000)
    assert mixed[0].counts == pytest.approx(500)

    vv = expected_counts(density_from_pure(theta1()), [ProjectorSetting.from_label("VV")], 1000)
    assert vv[0].counts == pytest.approx(750)

    with pytest.raises(SagnacSimValueError, match="does not match"):
        expected_counts(density_from_pure(theta1()), single_qubit_settings(), 1000)

    with pytest.raises(SagnacSimValueError, match="positive"):
        expected_counts(maximally_mixed((2,)), single_qubit_settings(), 0)


def test_simulate_counts() -> None:  # noqa: D103
    rho = density_from_pure(ket("H"))

    records = simulate_counts(rho, single_qubit_settings(), 1000, seed=7)
    assert records[1].label == "V"
    assert records[1].counts == 0
    assert all(isinstance(record.counts, int) for record in records)
    assert all(record.exposure == 1000 for record in records)

    # Identical seeds give identical counts.
    assert simulate_counts(rho, single_qubit_settings(), 1000, seed=7) == records
    assert simulate_counts(rho, single_qubit_settings(), 1000, seed=8) != records


def test_simulate_counts_mean() -> None:  # noqa: D103
    rho = density_from_pure(theta1())
    setting = [ProjectorSetting.from_label("VV")]

    counts = [simulate_counts(rho, setting, 1000, seed=seed)[0].counts for seed in range(200)]
    mean = sum(counts) / len(counts)

    # Poisson(750): standard error of the mean is sqrt(750/200).
    assert abs(mean - 750) < 4 * math.sqrt(750 / 200)


def test_count_record_validation() -> None:  # noqa: D103
    with pytest.raises(SagnacSimValueError, match="non-negative"):
        CountRecord("H", -1, 100)

    with pytest.raises(SagnacSimValueError, match="Exposure"):
        CountRecord("H", 1, 0)


def test_pv_from_counts() -> None:  # noqa: D103
    assert pv_from_counts(1000, 0, 500, 500) == pytest.approx((1, 0))
    assert pv_from_counts(500, 500, 1000, 500) == pytest.approx((0, 2))
    assert pv_from_counts(500, 500, 750, 500) == pytest.approx((0, 1))

    with pytest.raises(SagnacSimValueError, match="positive"):
        pv_from_counts(0, 0, 10, 10)


def test_pv_from_counts_normalized() -> None:  # noqa: D103
    # Exact |+> statistics reproduce V = 1.
    assert pv_from_counts_normalized(500, 500, 1000, 0, 500, 500) == pytest.approx((0, 1))

    # Exact |H> statistics
    counts = expected_counts(density_from_pure(ket("H")), single_qubit_settings(), 1000)
    assert pv_from_counts_normalized(*(record.counts for record in counts)) == pytest.approx((1, 0))

    # Clamped to [0, 1].
    _, vis = pv_from_counts_normalized(500, 500, 1000, 0, 1000, 0)
    assert vis == 1

    with pytest.raises(SagnacSimValueError, match="must be positive"):
        pv_from_counts_normalized(500, 500, 0, 0, 500, 500)


def test_estimate_p() -> None:  # noqa: D103
    assert estimate_p(900, 100) == pytest.approx(0.1)
    assert estimate_p(0, 1000) == 1
    assert estimate_p(1000, 0) == 0

    with pytest.raises(SagnacSimValueError, match="positive"):
        estimate_p(0, 0)


@pytest.mark.parametrize("kind", [ChannelKind.AMPLITUDE_DAMPING, ChannelKind.DEPHASING])
def test_sagnac_calibration(kind: ChannelKind) -> None:  # noqa: D103
    p, exposure = 0.3, 10_000
    successes = 0

    for seed in range(20):
        c0, c1 = sagnac_calibration_counts(kind, p, exposure, seed)
        sigma = math.sqrt(p * (1 - p) / (c0 + c1))
        successes += abs(estimate_p(c0, c1) - p) <= 3 * sigma

    assert successes >= 18

    with pytest.raises(SagnacSimValueError, match="Calibration"):
        sagnac_calibration_counts(ChannelKind.BIT_FLIP, p, exposure, 0)


def test_count_file(tmp_path: Path) -> None:  # noqa: D103
    records = simulate_counts(density_from_pure(theta1()), two_qubit_settings(), 500, seed=3)
    path = tmp_path / "counts.txt"

    write_count_file(path, records)

    lines = path.read_text().splitlines()
    assert lines[0] == "exposure=500"
    assert lines[1] == f"HH,{records[0].counts}"
    assert len(lines) == 37

    assert read_count_file(path) == records


def test_count_file_errors(tmp_path: Path) -> None:  # noqa: D103
    path = tmp_path / "counts.txt"

    path.write_text("H,10\nV,5\n")
    with pytest.raises(SagnacSimValueError, match="header"):
        read_count_file(path)

    path.write_text("exposure=100\nH,10\nX,5\n")
    with pytest.raises(SagnacSimValueError, match="line 3"):
        read_count_file(path)

    path.write_text("exposure=100\nH,ten\n")
    with pytest.raises(SagnacSimValueError, match="Invalid counts"):
        read_count_file(path)

    path.write_text("exposure=100\n")
    with pytest.raises(SagnacSimValueError, match="No count records"):
        read_count_file(path)

    with pytest.raises(SagnacSimValueError, match="one exposure"):
        write_count_file(path, [CountRecord("H", 1, 100), CountRecord("V", 1, 200)])
