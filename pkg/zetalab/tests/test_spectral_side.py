"""
Tests for the frequency side: spectral counting, the spectral zeta function, Weyl remainders and the direct and
inverse spectral experiments.
"""

import numpy as np
import pytest

from zetalab.exceptions import AbscissaViolation, DepthCapExceeded
from zetalab.fractal_strings import FractalString, cantor_string, harmonic_string, power_law_string
from zetalab.spectral_side import (
    CONVOLUTION,
    DIRECT,
    fit_oscillation,
    inverse_problem_experiment,
    lapo_coefficient_check,
    spectral_count_values,
    spectral_counting,
    spectral_zeta,
    spectral_zeta_direct,
    weyl_remainder_profile,
)
from zetalab.zeta_engine import zeta

D_CANTOR = np.log(2) / np.log(3)


def _brute_pair_count(string, x):
    """Number of pairs (k, j) with k / l_j <= x, counted with multiplicity."""
    total = 0
    for length, weight in zip(string.lengths, string.weights):
        k = 1
        while k / length <= x:
            total += weight
            k += 1
    return total


def test_two_interval_count():
    string = FractalString.from_lengths([(1.0, 1), (0.5, 1)])
    counts = spectral_counting(string, 4.5)
    assert [c.method for c in counts] == [DIRECT, CONVOLUTION]
    assert [c.count for c in counts] == [6, 6]


def test_cantor_count():
    counts = spectral_counting(cantor_string(), 30.5)
    assert [c.count for c in counts] == [20, 20]


def test_count_below_first_frequency():
    counts = spectral_counting(cantor_string(), 2.5)
    assert [c.count for c in counts] == [0, 0]


def test_count_beyond_materialized_range():
    with pytest.raises(DepthCapExceeded):
        spectral_counting(cantor_string(depth=2), 100.0)


@pytest.mark.parametrize("seed", [0, 1])
def test_three_way_agreement_on_random_strings(seed):
    rng = np.random.default_rng(seed)
    denominators = rng.integers(2, 40, size=8)
    string = FractalString.from_lengths([(1.0 / d, int(w)) for d, w in zip(denominators, rng.integers(1, 4, 8))])
    for x in rng.uniform(1, 1e3, 100):
        direct, convolution = spectral_counting(string, x)
        assert direct.count == convolution.count == _brute_pair_count(string, x)


def test_three_way_agreement_on_cantor():
    rng = np.random.default_rng(3)
    cantor = cantor_string()
    xs = rng.uniform(1, 1e4, 200)
    direct = spectral_count_values(cantor, xs)
    for x, count in zip(xs, direct):
        assert count == spectral_counting(cantor, x)[1].count == _brute_pair_count(cantor_string(depth=9), x)


def test_harmonic_measure_counts_divisor_sums():
    """The frequencies of the harmonic measure are all products k * n, so N(x) = sum_{m <= x} d(m)."""
    x = 30.5
    divisor_sum = sum(sum(1 for d in range(1, m + 1) if m % d == 0) for m in range(1, 31))
    counts = spectral_counting(harmonic_string(100), x)
    assert [c.count for c in counts] == [divisor_sum, divisor_sum]


def test_spectral_zeta_of_unit_interval():
    s = 2.5 + 3.0j
    assert abs(spectral_zeta(FractalString.from_lengths([(1.0, 1)]), s) - zeta(s)) < 1e-14


def test_spectral_zeta_factorization():
    value = spectral_zeta(cantor_string(), 2.0)
    assert abs(value - np.pi ** 2 / 42) < 1e-12
    s = 1.8 + 4.0j
    assert abs(spectral_zeta(cantor_string(), np.conj(s)) - np.conj(spectral_zeta(cantor_string(), s))) < 1e-12


def test_spectral_zeta_against_frequency_sum():
    rng = np.random.default_rng(11)
    cantor = cantor_string()
    for s in rng.uniform(D_CANTOR + 1.2, 4, 10) + 1j * rng.uniform(-20, 20, 10):
        direct, bound = spectral_zeta_direct(cantor, s, 1e4)
        assert abs(direct - spectral_zeta(cantor, s)) <= bound + 1e-12


def test_frequency_sum_needs_convergence():
    with pytest.raises(AbscissaViolation):
        spectral_zeta_direct(cantor_string(), 1.0, 100.0)


def test_weyl_remainder_of_unit_interval():
    frame = weyl_remainder_profile(FractalString.from_lengths([(1.0, 1)]), np.linspace(1.1, 50, 400))
    assert list(frame.columns) == ["x", "weyl", "count", "remainder"]
    assert np.all(frame["remainder"] >= 0)
    assert np.all(frame["remainder"] < 1)


def test_weyl_remainder_of_cantor_oscillates():
    x = np.geomspace(1e2, 1e4, 2000)
    frame = weyl_remainder_profile(cantor_string(), x)
    scaled = frame["remainder"] / x ** D_CANTOR
    _, amplitude, _ = fit_oscillation(x, scaled, 2 * np.pi / np.log(3))
    assert amplitude > 0.01


def test_fit_oscillation_recovers_harmonic():
    x = np.geomspace(10, 1e4, 500)
    y = 0.3 + 0.2 * np.cos(5 * np.log(x) + 0.4)
    offset, amplitude, phase = fit_oscillation(x, y, 5)
    assert abs(offset - 0.3) < 1e-12
    assert abs(amplitude - 0.2) < 1e-12
    assert abs(phase - 0.4) < 1e-12


def test_lapo_prediction_ingredients():
    report = lapo_coefficient_check(0.5, x_fit=1e4, samples=300)
    assert abs(report.zeta_at_dimension + 1.4603545088) < 1e-9
    assert report.c_D_predicted > 0
    assert report.minkowski_content > 0


@pytest.mark.slow
@pytest.mark.parametrize("D", [0.4, 0.6])
def test_lapo_coefficient(D):
    report = lapo_coefficient_check(D, x_fit=1e5)
    assert report.rel_error < 0.05


def test_inverse_problem_without_oscillation():
    report = inverse_problem_experiment(0.5, 10.0, 0.0, x_min=1e5, x_max=1e7, samples=2000)
    assert report.geometric_amplitude < 1e-3
    assert report.spectral_amplitude < 2e-2


@pytest.mark.slow
def test_inverse_problem_zero_kills_spectral_oscillation():
    at_zero = inverse_problem_experiment(0.5, 14.134725, 0.005)
    off_zero = inverse_problem_experiment(0.5, 10.0, 0.005)
    assert at_zero.amplitude_ratio < 0.15
    assert off_zero.amplitude_ratio > 0.5
    assert at_zero.zeta_modulus < 1e-5
