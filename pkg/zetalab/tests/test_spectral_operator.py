"""
Tests for the spectral operator as a shift sum, its Euler factors and Mobius inverse, and the functional calculus.
"""

import numpy as np
import pytest

from zetalab.exceptions import PoleOnSegment, SupportUnbounded, ZetaLabWarning
from zetalab.grid_functions import GridFunction, bump, gaussian, infinitesimal_shift, weighted_norm
from zetalab.spectral_operator import (
    apply_euler_factor,
    apply_functional_calculus,
    apply_mobius_inverse,
    apply_spectral_operator_direct,
    compose_euler_product,
    conjugate_symmetric_values,
    operator_consistency_report,
    snapped_log_indices,
    symbol_values,
)
from zetalab.zeta_engine import DEFAULT_ACCURACY, zeta


def _grid(func, c=2.0, t_min=-3.0, t_max=5.0, h=2.0 ** -8):
    return GridFunction.from_callable(func, c=c, t_min=t_min, t_max=t_max, h=h, guard_band=1.0)


def test_snapped_indices_are_additive():
    h = 2.0 ** -8
    k = snapped_log_indices(1000, h)
    assert k[1] == 0
    for p in (2, 3, 5, 7, 997):
        assert k[p] == round(np.log(p) / h)
    assert k[6] == k[2] + k[3]
    assert k[360] == 3 * k[2] + 2 * k[3] + k[5]
    assert np.max(np.abs(k[1:] - np.log(np.arange(1, 1001)) / h)) < 5


def test_shift_sum_matches_pointwise_sum():
    profile = bump(0.0, 0.5)
    f = _grid(profile, h=2.0 ** -10)
    out = apply_spectral_operator_direct(f)
    n = np.arange(1, int(np.exp(5.5)) + 1)
    for t in (0.25, 1.75, 3.875):
        expected = np.sum(profile(t - np.log(n)))
        assert abs(out.samples[int(round((t - f.t_min) / f.h))] - expected) < 1e-4


def test_norm_bound_above_one():
    f = _grid(bump(0.5, 0.5), t_max=8.0)
    ratio = weighted_norm(apply_spectral_operator_direct(f)) / (zeta(2.0).real * weighted_norm(f))
    assert ratio <= 1.0


def test_formal_warning_below_one():
    with pytest.warns(ZetaLabWarning):
        apply_spectral_operator_direct(_grid(bump(0.0, 0.5), c=0.5))


def test_support_must_be_bounded_below():
    with pytest.raises(SupportUnbounded):
        apply_spectral_operator_direct(_grid(gaussian(0.0, 1.0)))


def test_zero_function_is_fixed():
    f = _grid(lambda t: np.zeros_like(t))
    assert apply_spectral_operator_direct(f) is f


def test_mobius_round_trip():
    f = _grid(bump(0.0, 1.0))
    back = apply_mobius_inverse(apply_spectral_operator_direct(f, snap=True), snap=True)
    assert np.max(np.abs(back.samples - f.samples)) < 1e-10


def test_euler_factor_is_geometric_series_of_shifts():
    profile = bump(0.0, 0.2)
    f = _grid(profile)
    out = apply_euler_factor(f, 3, snap=True)
    k3 = snapped_log_indices(3, f.h)[3]
    t = f.times
    expected = sum(profile(t - m * k3 * f.h) for m in range(5))
    assert np.max(np.abs(out.samples - expected)) < 1e-14


def test_euler_product_with_all_primes_equals_shift_sum():
    f = _grid(bump(0.0, 0.02), t_min=-1.0, t_max=3.0)
    full = apply_spectral_operator_direct(f, snap=True)
    product = compose_euler_product(f, 23, snap=True)
    assert np.max(np.abs(product.samples - full.samples)) < 1e-12 * np.max(np.abs(full.samples))


def test_functional_calculus_identity():
    f = _grid(gaussian(1.0, 0.3))
    assert np.max(np.abs(apply_functional_calculus("one", f).samples - f.samples)) < 1e-12


def test_functional_calculus_of_s_is_the_derivative():
    f = _grid(gaussian(1.0, 0.3), c=0.5)
    spectral = apply_functional_calculus(lambda s: s, f)
    assert np.max(np.abs(spectral.samples - infinitesimal_shift(f).samples)) < 1e-6


def test_zeta_and_inverse_zeta_cancel():
    f = _grid(gaussian(1.0, 0.3))
    back = apply_functional_calculus("inverse_zeta", apply_functional_calculus("zeta", f))
    assert np.max(np.abs(back.samples - f.samples)) < 1e-10


def test_two_path_agreement():
    g = GridFunction.from_callable(gaussian(0.0, 0.3), c=2.0, t_min=-4.0, t_max=12.0, h=2.0 ** -9, guard_band=1.0)
    direct = apply_spectral_operator_direct(g)
    spectral = apply_functional_calculus("zeta", g)
    assert weighted_norm(spectral - direct) / weighted_norm(direct) < 1e-4


def test_symbol_values():
    freqs = np.array([-3.0, 0.0, 3.0, 14.0])
    values = symbol_values("zeta", 0.5, freqs)
    assert np.allclose(values, zeta(0.5 + 1j * freqs), atol=1e-12)
    assert np.allclose(conjugate_symmetric_values(zeta, 2.0, freqs, DEFAULT_ACCURACY), zeta(2.0 + 1j * freqs))
    assert np.allclose(symbol_values(lambda s: s * s, 1.0, freqs), (1.0 + 1j * freqs) ** 2)


def test_symbol_poles():
    with pytest.raises(PoleOnSegment):
        symbol_values("zeta", 1.0, [0.0, 1.0])
    for c in (0.0, 1.0):
        with pytest.raises(PoleOnSegment):
            symbol_values("xi", c, [0.0, 1.0])
    with pytest.raises(ValueError):
        symbol_values("gamma", 2.0, [0.0])


@pytest.mark.slow
def test_operator_consistency_report():
    report = operator_consistency_report(2.0, 100)
    assert list(report["check"]) == ["norm_bound", "two_path", "mobius_round_trip", "euler_product"]
    assert report["passed"].all()
