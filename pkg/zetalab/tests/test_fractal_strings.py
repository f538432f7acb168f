"""
Tests for fractal strings, their counting functions, tube volumes and generalized strings.
"""

import numpy as np
import pytest

from zetalab.exceptions import DepthCapExceeded, GridTooShort, NonMonotoneTarget
from zetalab.fractal_strings import (
    FractalString,
    cantor_string,
    direct_tube_volume,
    estimate_minkowski,
    geometric_counting,
    harmonic_string,
    lapidus_maier_string,
    lattice_string,
    multiplicative_convolution,
    power_law_string,
    prime_harmonic_string,
    prime_string,
    single_interval,
    string_to_measure,
    tube_profile,
)
from zetalab.zeta_engine import zeta

D_CANTOR = np.log(2) / np.log(3)


def test_cantor_lengths():
    cantor = cantor_string()
    assert np.allclose(cantor.lengths[:3], [1 / 3, 1 / 9, 1 / 27])
    assert list(cantor.weights[:3]) == [1, 2, 4]
    assert list(cantor.reciprocals[:4]) == [3, 9, 27, 81]
    assert abs(cantor.total_length - 1) < 1e-12
    assert abs(cantor.dimension - D_CANTOR) < 1e-15
    assert not cantor.is_finite


def test_from_lengths_merges_duplicates():
    string = FractalString.from_lengths([(0.5, 1), (1.0, 1), (0.5, 2)])
    assert list(string.lengths) == [1.0, 0.5]
    assert list(string.weights) == [1, 3]
    assert string.is_finite
    assert string.dimension == 0
    assert string.total_length == 2.5
    with pytest.raises(ValueError):
        FractalString.from_lengths([(0.0, 1)])


def test_lattice_rule_matches_explicit_lengths():
    depth = 6
    lattice = cantor_string(depth=depth)
    explicit = FractalString.from_lengths([(3.0 ** -(j + 1), 2 ** j) for j in range(depth + 1)])
    np.testing.assert_allclose(lattice.lengths, explicit.lengths, rtol=1e-15)
    assert list(lattice.weights) == list(explicit.weights)
    xs = np.array([2.0, 10.0, 100.0, 1000.0])
    np.testing.assert_array_equal(geometric_counting(lattice, xs), geometric_counting(explicit, xs))
    assert lattice.tail_length == pytest.approx((2 / 3) ** (depth + 1), rel=1e-12)
    eps = np.array([1e-3, 1e-2, 0.1])
    difference = direct_tube_volume(lattice, eps) - direct_tube_volume(explicit, eps)
    np.testing.assert_allclose(difference, lattice.tail_length, rtol=0, atol=1e-14)


def test_json_round_trip():
    cantor = cantor_string(depth=5)
    again = FractalString.from_json(cantor.to_json())
    assert again.depth == 5
    assert np.array_equal(again.reciprocals, cantor.reciprocals)
    finite = FractalString.from_json('{"lengths": [[0.5, 2], [0.25, 1]]}')
    assert np.allclose(FractalString.from_json(finite.to_json()).lengths, [0.5, 0.25])
    with pytest.raises(ValueError):
        FractalString.from_json('{"unknown": 1}')


def test_lattice_rule_guards():
    with pytest.raises(ValueError):
        lattice_string(2, 3)
    with pytest.raises(ValueError):
        lattice_string(1, 1)


@pytest.mark.parametrize("x, expected", [(10, 3), (3, 0.5), (2.9, 0), (30.5, 7), (9, 2)])
def test_cantor_counting(x, expected):
    assert geometric_counting(cantor_string(), x) == expected


def test_counting_array_and_harmonic():
    assert geometric_counting(harmonic_string(100), 10.5) == 10
    values = geometric_counting(cantor_string(), np.array([1.0, 5.0, 100.0]))
    assert list(values) == [0, 1, 15]


def test_counting_beyond_materialized_range():
    with pytest.raises(DepthCapExceeded):
        geometric_counting(cantor_string(depth=2), 100.0)


def test_covering_extends_generator_strings():
    string = power_law_string(0.5, 1.0, 10)
    extended = string.covering(1e4)
    assert extended.limit > 1e4
    assert geometric_counting(extended, 1e4 + 0.5) == 100


@pytest.mark.parametrize("eps, expected", [(1 / 18, 7 / 9), (1 / 6, 1.0), (1.0, 1.0)])
def test_cantor_tube_volume(eps, expected):
    assert abs(direct_tube_volume(cantor_string(), eps) - expected) < 1e-12


def test_tube_volume_from_counting_function():
    """V(eps) = 2 eps N(1/(2 eps)) + sum of the lengths below 2 eps."""
    rng = np.random.default_rng(3)
    explicit = FractalString.from_lengths(np.column_stack([rng.uniform(1e-3, 1.0, 40), rng.integers(1, 4, 40)]))
    for string in (cantor_string(), explicit):
        eps = rng.uniform(1e-4, 0.6, 50)
        short = np.array([np.sum(string.weights * string.lengths * (string.lengths < 2 * e)) for e in eps])
        expected = 2 * eps * geometric_counting(string, 1 / (2 * eps)) + short + string.tail_length
        np.testing.assert_allclose(direct_tube_volume(string, eps), expected, rtol=0, atol=1e-11)


def test_single_interval_tube_volume():
    assert abs(direct_tube_volume(single_interval(), 0.2) - 0.4) < 1e-15
    assert direct_tube_volume(single_interval(), 0.7) == 1.0
    with pytest.raises(ValueError):
        direct_tube_volume(single_interval(), 0.0)


def test_unsaturated_tail_is_refused():
    with pytest.raises(DepthCapExceeded):
        direct_tube_volume(power_law_string(0.5, 1.0, 10), 1e-4)


def test_tube_profile_frame():
    frame = tube_profile(cantor_string(), [1 / 18, 1 / 6]).to_frame()
    assert list(frame.columns) == ["epsilon", "volume"]
    assert frame["epsilon"].iloc[0] > frame["epsilon"].iloc[1]
    assert np.allclose(frame["volume"], [1.0, 7 / 9])


def test_cantor_is_not_minkowski_measurable():
    estimate = estimate_minkowski(cantor_string(), D_CANTOR, np.logspace(-7, -1, 200))
    assert estimate.upper_content > estimate.lower_content * 1.01
    assert abs(estimate.dimension_estimate - D_CANTOR) < 0.02


def test_power_law_is_minkowski_measurable():
    estimate = estimate_minkowski(power_law_string(0.6), 0.6, np.logspace(-8, -4, 60))
    assert estimate.upper_content < estimate.lower_content * 1.02
    assert abs(estimate.dimension_estimate - 0.6) < 0.01


def test_single_interval_has_dimension_zero():
    estimate = estimate_minkowski(single_interval(), 0.0, np.logspace(-6, -2, 20))
    assert abs(estimate.dimension_estimate) < 1e-9


def test_minkowski_grid_too_short():
    with pytest.raises(GridTooShort):
        estimate_minkowski(cantor_string(), D_CANTOR, np.logspace(-3, -1, 10))


def test_power_law_lengths_and_total():
    string = power_law_string(0.5, 1.0, 3)
    assert np.allclose(string.lengths, [1, 1 / 4, 1 / 9])
    assert abs(power_law_string(0.6).total_length - zeta(1 / 0.6).real) < 1e-10


def test_power_law_counting_growth():
    x = 1e6 + 0.5
    assert abs(geometric_counting(power_law_string(0.5).covering(x), x) - np.floor(x ** 0.5)) == 0


def test_lapidus_maier_without_oscillation_is_a_power_law():
    oscillating = lapidus_maier_string(0.5, 10.0, 0.0, 100)
    assert np.allclose(oscillating.reciprocals, power_law_string(0.5, 1.0, 100).reciprocals, rtol=1e-10)


def test_lapidus_maier_counts_its_target():
    string = lapidus_maier_string(0.5, 10.0, 0.01, 100)
    xs = np.geomspace(1.5, 0.99 * string.limit, 3000)
    difference = geometric_counting(string, xs) - string.rule.target(xs)
    assert np.all(difference >= -1)
    assert np.all(difference <= 1)


def test_lapidus_maier_monotonicity_guard():
    with pytest.raises(NonMonotoneTarget):
        lapidus_maier_string(0.5, 10.0, 0.3)


def test_string_to_measure():
    measure = string_to_measure(cantor_string())
    assert list(measure.locations[:3]) == [3, 9, 27]
    assert list(measure.weights[:3]) == [1, 2, 4]
    assert geometric_counting(measure, 2.9) == 0
    interval = string_to_measure(single_interval())
    assert list(interval.locations) == [1.0]
    assert list(interval.weights) == [1.0]


def test_prime_harmonic_and_prime_strings():
    assert list(prime_harmonic_string(3, 30).locations) == [1, 3, 9, 27]
    primes = prime_string(10)
    assert list(primes.locations) == [2, 3, 4, 5, 7, 8, 9]
    assert np.allclose(primes.weights, np.log([2, 3, 2, 5, 7, 2, 3]))


def test_harmonic_string_is_convolution_of_prime_harmonic_strings():
    cap = 30
    product = prime_harmonic_string(2, cap)
    for p in [3, 5, 7, 11, 13, 17, 19, 23, 29]:
        product = multiplicative_convolution(product, prime_harmonic_string(p, cap), cap)
    harmonic = harmonic_string(cap)
    assert np.array_equal(product.locations, harmonic.locations)
    assert np.allclose(product.weights, 1)
    assert len(product.factors) == 10
