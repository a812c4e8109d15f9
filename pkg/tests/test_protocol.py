"""Cyclic depletion protocol tests: distributions, kernels, trajectories."""

import math

import numpy as np
import pytest

from bogodense import (
    InvalidParameterError,
    NumberDistribution,
    ProtocolConfig,
    ProtocolInapplicableError,
    TruncationOverflowError,
    gaussian_distribution,
    oscillation_law,
    point_distribution,
    run_cycle,
    run_protocol,
    two_point_distribution,
)

from oracles import synthetic_coeffs


@pytest.fixture(scope="module")
def cfg100(case100):
    return ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=10, m_max=115)


# ---------------------------------------------------------------- distributions


def test_point_distribution():
    d = point_distribution(7)
    assert d.m_max == 7
    assert d.support_max == 7
    assert d.mean() == 7.0
    assert d.variance() == 0.0
    padded = point_distribution(7, m_max=20)
    assert padded.m_max == 20
    assert padded.support_max == 7


def test_gaussian_distribution_moments():
    d = gaussian_distribution(60.0, 5.0, m_max=120)
    assert d.mean() == pytest.approx(60.0, abs=1e-6)
    assert d.variance() == pytest.approx(25.0, rel=1e-3)
    assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_two_point_distribution():
    d = two_point_distribution(80, 120, weight=0.25)
    assert d.m_max == 120
    assert d.probabilities[80] == 0.25
    assert d.probabilities[120] == 0.75
    assert d.mean() == pytest.approx(0.25 * 80 + 0.75 * 120)


def test_distribution_band_statistics():
    d = two_point_distribution(80, 120, m_max=150)
    assert d.mass_in(70, 90) == pytest.approx(0.5)
    assert d.mass_in(0, 150) == pytest.approx(1.0)
    assert d.mass_in(121, 150) == 0.0
    assert d.conditional_variance(70, 90) == pytest.approx(0.0)
    assert math.isnan(d.conditional_variance(121, 150))
    # Both points inside one band: plain variance of the restriction.
    assert d.conditional_variance(0, 150) == pytest.approx(d.variance())


def test_distribution_validation():
    with pytest.raises(InvalidParameterError):
        NumberDistribution(np.array([0.5, 0.4]))  # does not sum to one
    with pytest.raises(InvalidParameterError):
        NumberDistribution(np.array([1.5, -0.5]))
    with pytest.raises(InvalidParameterError):
        NumberDistribution(np.ones((2, 2)) / 4.0)
    with pytest.raises(InvalidParameterError):
        point_distribution(25, m_max=20)
    with pytest.raises(InvalidParameterError):
        gaussian_distribution(50.0, -1.0, m_max=100)
    with pytest.raises(InvalidParameterError):
        gaussian_distribution(-500.0, 0.1, m_max=10)  # no mass on the lattice
    with pytest.raises(InvalidParameterError):
        two_point_distribution(10, 20, weight=1.5)


# ---------------------------------------------------------------- configuration


def test_config_validation(case100):
    co = case100["coeffs"]
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(n0=100.0, coeffs=co, cycles=0, m_max=115)
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(n0=100.0, coeffs=co, cycles=5, m_max=0)
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(n0=100.0, coeffs=co, cycles=5, m_max=115, depletion="soft")
    # Coefficients must be evaluated at the working point.
    with pytest.raises(InvalidParameterError):
        ProtocolConfig(n0=90.0, coeffs=co, cycles=5, m_max=115)


def test_cycle_time_is_half_transfer_period(cfg100, case100):
    law = oscillation_law(case100["coeffs"], 100)
    assert cfg100.cycle_time == pytest.approx(math.pi / law.omega_prime, rel=1e-12)


def test_unstable_working_point_rejected():
    bad = synthetic_coeffs(
        gamma=0.01, mu=1.5, mu1=1.5, g01=0.005, alpha2=0.0, nbar=100.0
    )
    assert not oscillation_law(bad, 100).stable
    cfg = ProtocolConfig(n0=100.0, coeffs=bad, cycles=1, m_max=110)
    with pytest.raises(ProtocolInapplicableError):
        cfg.cycle_time


def test_kernel_rows_are_probabilities(cfg100):
    assert np.array_equal(cfg100.kernel(0), np.ones(1))
    for m in (1, 5, 40):
        k = cfg100.kernel(m)
        assert k.shape == (m + 1,)
        assert np.all(k >= 0)
        assert k.sum() == pytest.approx(1.0, abs=1e-12)


# ---------------------------------------------------------------- single cycles


def test_cycle_conserves_probability(cfg100):
    d = run_cycle(gaussian_distribution(90.0, 6.0, m_max=115), cfg100)
    assert d.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_cycle_is_linear_in_the_distribution(cfg100):
    d1 = point_distribution(90, m_max=115)
    d2 = point_distribution(110, m_max=115)
    mix = two_point_distribution(90, 110, m_max=115, weight=0.3)
    expect = 0.3 * run_cycle(d1, cfg100).probabilities
    expect = expect + 0.7 * run_cycle(d2, cfg100).probabilities
    got = run_cycle(mix, cfg100).probabilities
    assert np.max(np.abs(got - expect)) < 1e-12


def test_cycle_removal_matches_transfer_law(cfg100, case100):
    # A point distribution modestly below the working point sheds close to
    # the analytic one-cycle transfer 4*c2 evaluated at that occupation.
    for m in (90, 80):
        law = oscillation_law(case100["coeffs"], m)
        d = run_cycle(point_distribution(m, m_max=115), cfg100)
        removal = m - d.mean()
        assert removal == pytest.approx(4.0 * law.c2, rel=0.5)


def test_transfer_accelerates_below_working_point(case100):
    co = case100["coeffs"]
    vals = [4.0 * oscillation_law(co, m).c2 for m in (99, 95, 90, 80, 70, 60)]
    assert np.all(np.diff(vals) > 0)
    assert vals[0] < 1e-2


def test_cycle_records_removed_total(cfg100):
    d0 = point_distribution(80, m_max=115)
    d1 = run_cycle(d0, cfg100)
    assert d1.removed_total == pytest.approx(80.0 - d1.mean(), abs=1e-12)
    d2 = run_cycle(d1, cfg100)
    assert d2.removed_total == pytest.approx(80.0 - d2.mean(), abs=1e-12)


def test_cycle_with_replacement_coefficients(cfg100, case100):
    d = point_distribution(90, m_max=115)
    # Passing the configured coefficients is a no-op path.
    same = run_cycle(d, cfg100, coeffs=case100["coeffs"])
    assert np.array_equal(same.probabilities, run_cycle(d, cfg100).probabilities)
    # Replacement coefficients must match the working point too.
    with pytest.raises(InvalidParameterError):
        run_cycle(d, cfg100, coeffs=synthetic_coeffs(nbar=50.0))


def test_cycle_rejects_overflowing_support(cfg100):
    with pytest.raises(TruncationOverflowError):
        run_cycle(point_distribution(120, m_max=130), cfg100)


# ---------------------------------------------------------------- full protocol


def test_fixed_point_is_nearly_stationary(case100):
    # Right at the working point the transfer is quenched: ten cycles leak
    # well under one particle in the mean.
    cfg = ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=10, m_max=115)
    res = run_protocol(point_distribution(100, m_max=115), cfg)
    assert res.means[0] == 100.0
    assert 100.0 - res.means[-1] < 1.0
    assert np.all(res.removed[1:] < 0.01)


def test_long_run_conservation_and_monotonicity(case100):
    cfg = ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=200, m_max=115)
    res = run_protocol(two_point_distribution(85, 110, m_max=115), cfg)
    assert abs(res.final.probabilities.sum() - 1.0) < 1e-9
    assert np.all(np.diff(res.means) <= 1e-9)
    assert res.final.removed_total == pytest.approx(
        res.means[0] - res.means[-1], abs=1e-9
    )
    # The branch below the working point drains, the branch at/above stays.
    assert res.retained_mass[-1] == pytest.approx(0.5, abs=0.05)
    assert res.lost_mass[-1] == pytest.approx(0.5, abs=0.05)


def test_trajectory_shapes_and_summary(case100):
    cfg = ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=5, m_max=115)
    res = run_protocol(point_distribution(92, m_max=115), cfg)
    assert res.cycles == 5
    for arr in (res.means, res.variances, res.retained_mass, res.lost_mass, res.removed):
        assert arr.shape == (6,)
    assert res.removed[0] == 0.0
    s = res.summary()
    assert set(s) == {
        "cycles",
        "cycle_time",
        "final_mean",
        "final_variance",
        "retained_mass",
        "lost_mass",
        "retained_variance",
        "removed_total",
    }
    assert s["cycles"] == 5
    assert s["final_mean"] == pytest.approx(res.means[-1])
    assert s["removed_total"] == pytest.approx(res.final.removed_total)


def test_protocol_pads_narrow_initial_distributions(case100):
    cfg = ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=2, m_max=115)
    res = run_protocol(point_distribution(95), cfg)  # support only reaches 95
    assert res.final.m_max == 115
    assert res.final.probabilities.sum() == pytest.approx(1.0, abs=1e-12)


def test_protocol_rejects_overflowing_start(case100):
    cfg = ProtocolConfig(n0=100.0, coeffs=case100["coeffs"], cycles=2, m_max=115)
    with pytest.raises(TruncationOverflowError):
        run_protocol(point_distribution(130, m_max=130), cfg)
