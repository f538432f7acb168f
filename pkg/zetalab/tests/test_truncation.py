"""
Tests for truncated spectral operators, their spectra and the invertibility verdicts.
"""

import numpy as np
import pytest

from zetalab.exceptions import PoleInRange
from zetalab.grid_functions import GridFunction, gaussian
from zetalab.spectral_operator import apply_functional_calculus
from zetalab.truncation import (
    INVERTIBLE,
    NOT_INVERTIBLE,
    NOT_QUASI_INVERTIBLE,
    QUASI_INVERTIBLE_UP_TO,
    UNDETERMINED,
    TruncationSpec,
    analytic_floor,
    apply_truncated_inverse,
    apply_truncated_operator,
    approximate_point_spectrum_witness,
    full_line_spectrum_check,
    global_operator_curve,
    local_minima,
    phase_transition_table,
    quasi_invertibility_scan,
    rh_diagnostic,
    truncated_invertibility,
    truncated_spectrum_curve,
    zero_ordinate_symmetry,
)
from zetalab.zeros import find_critical_zeros
from zetalab.zeta_engine import zeta

FIRST_ZERO = 14.134725141734693
FLOOR_AT_TWO = (np.pi ** 4 / 90) / (np.pi ** 2 / 6)


def _grid(func, c):
    return GridFunction.from_callable(func, c=c, t_min=-4.0, t_max=4.0, h=2.0 ** -7, guard_band=1.0)


def test_spec_validation_and_cutoff():
    with pytest.raises(ValueError):
        TruncationSpec(-0.1, 10.0)
    with pytest.raises(ValueError):
        TruncationSpec(0.5, 10.0, 12.0)
    freqs = np.array([-30.0, -3.0, 0.0, 3.0, 30.0])
    assert list(TruncationSpec(0.5, 20.0).cutoff(freqs)) == [-20, -3, 0, 3, 20]
    assert list(TruncationSpec(0.5, 20.0, 15.0).cutoff(freqs)) == [-20, -15, 15, 15, 20]


def test_curve_is_conjugate_symmetric():
    curve = truncated_spectrum_curve(TruncationSpec(0.5, 20.0), resolution=0.05)
    assert curve.tau[0] == -20.0
    assert curve.tau[-1] == 20.0
    assert np.all(np.diff(curve.tau) > 0)
    assert np.allclose(curve.values[::-1], np.conj(curve.values), atol=1e-12)
    frame = curve.to_frame()
    assert list(frame.columns) == ["tau", "re", "im", "modulus"]
    assert abs(curve.argmin_tau - FIRST_ZERO) < 1e-6
    assert curve.min_modulus < 1e-6


def test_curve_with_offset_samples():
    curve = truncated_spectrum_curve(TruncationSpec(2.0, 10.0, 1.0), resolution=0.125, sample_offset=0.5)
    positive = curve.tau[curve.tau > 0]
    assert positive[0] == 1.0
    assert positive[1] == 1.0625
    assert positive[-1] == 10.0
    assert np.all(np.abs(curve.tau) >= 1.0)


def test_curve_floor_above_one():
    curve = truncated_spectrum_curve(TruncationSpec(2.0, 50.0))
    assert curve.min_modulus >= FLOOR_AT_TWO - 1e-6
    assert abs(analytic_floor(2.0) - FLOOR_AT_TWO) < 1e-12


def test_curve_at_the_pole():
    with pytest.raises(PoleInRange):
        truncated_spectrum_curve(TruncationSpec(1.0, 10.0))
    curve = truncated_spectrum_curve(TruncationSpec(1.0, 10.0), puncture=0.1)
    assert curve.pole_flag
    assert np.min(np.abs(curve.tau)) == 0.1


def test_invertibility_on_the_critical_line():
    assert truncated_invertibility(TruncationSpec(0.5, 14.0)).decision == INVERTIBLE
    verdict = truncated_invertibility(TruncationSpec(0.5, 15.0))
    assert verdict.decision == NOT_INVERTIBLE
    assert abs(verdict.argmin_tau - FIRST_ZERO) < 1e-6
    assert len(verdict.zero_brackets_used) == 1
    assert verdict.to_dict()["zero_brackets_used"][0][0] == verdict.zero_brackets_used[0].t
    assert truncated_invertibility(TruncationSpec(0.5, 20.0, 15.0)).decision == INVERTIBLE


def test_invertibility_with_bracket_at_the_range_end():
    first = find_critical_zeros(20.0)[0]
    verdict = truncated_invertibility(TruncationSpec(0.5, first.t))
    assert verdict.decision == UNDETERMINED


def test_invertibility_above_one_and_at_the_pole():
    verdict = truncated_invertibility(TruncationSpec(2.0, 100.0))
    assert verdict.decision == INVERTIBLE
    assert verdict.min_modulus >= FLOOR_AT_TWO - 1e-6
    assert truncated_invertibility(TruncationSpec(1.0, 10.0)).decision == UNDETERMINED


def test_invertibility_off_the_critical_line():
    verdict = truncated_invertibility(TruncationSpec(0.7, 30.0))
    assert verdict.decision == INVERTIBLE
    assert verdict.min_modulus > 0


def test_truncated_operator_and_inverse():
    f = _grid(gaussian(0.0, 0.3), 0.5)
    spec = TruncationSpec(0.5, 10.0)
    back = apply_truncated_inverse(apply_truncated_operator(f, spec), spec)
    assert np.max(np.abs(back.samples - f.samples)) < 1e-10
    with pytest.raises(PoleInRange):
        apply_truncated_inverse(f, TruncationSpec(0.5, 15.0))
    with pytest.raises(ValueError):
        apply_truncated_operator(f, TruncationSpec(2.0, 10.0))
    with pytest.raises(PoleInRange):
        apply_truncated_operator(_grid(gaussian(0.0, 0.3), 1.0), TruncationSpec(1.0, 10.0))


def test_wide_truncation_is_the_functional_calculus():
    f = _grid(gaussian(0.0, 0.3), 2.0)
    wide = apply_truncated_operator(f, TruncationSpec(2.0, 1e3))
    assert np.max(np.abs(wide.samples - apply_functional_calculus("zeta", f).samples)) < 1e-12


def test_quasi_invertibility_on_the_critical_line():
    report = quasi_invertibility_scan(0.5, 50.0)
    assert report.decision == NOT_QUASI_INVERTIBLE
    assert report.zero_count == 10
    assert abs(report.witness - FIRST_ZERO) < 1e-6
    assert report.min_modulus < 1e-6


def test_quasi_invertibility_above_one():
    report = quasi_invertibility_scan(2.0, 100.0)
    assert report.decision == QUASI_INVERTIBLE_UP_TO
    assert report.analytic_floor == pytest.approx(FLOOR_AT_TWO)
    assert report.zero_count == 0


def test_quasi_invertibility_count_unknown_on_the_pole_line():
    report = quasi_invertibility_scan(1.0, 20.0)
    assert report.decision == UNDETERMINED
    assert report.zero_count is None


def test_rh_diagnostic_rejects_bad_abscissas():
    with pytest.raises(ValueError):
        rh_diagnostic([0.5], 10.0)
    with pytest.raises(ValueError):
        rh_diagnostic([1.2], 10.0)


def test_rh_diagnostic_pool_matches_serial():
    serial = rh_diagnostic([0.3, 0.7], 20.0)
    pooled = rh_diagnostic([0.3, 0.7], 20.0, poolsize=2)
    assert list(serial["decision"]) == [QUASI_INVERTIBLE_UP_TO] * 2
    assert list(pooled["c"]) == [0.3, 0.7]
    assert np.allclose(serial["min_modulus"], pooled["min_modulus"])


@pytest.mark.slow
def test_rh_diagnostic_up_to_one_hundred():
    frame = rh_diagnostic([0.3, 0.4, 0.6, 0.7], 100.0, poolsize=2)
    assert list(frame["decision"]) == [QUASI_INVERTIBLE_UP_TO] * 4
    assert list(frame.columns) == ["c", "decision", "min_modulus", "argmin_tau", "witness", "zero_count", "horizon"]


def test_local_minima_near_zeros():
    minima = local_minima(truncated_spectrum_curve(TruncationSpec(0.5, 26.0), resolution=0.01))
    for t in (14.1347, 21.0220, 25.0109):
        assert np.min(np.abs(minima - t)) < 0.01


def test_zero_ordinate_symmetry():
    frame = zero_ordinate_symmetry(0.4, 26.0, resolution=1e-2)
    assert len(frame) == 3
    assert not frame["difference"].isna().any()
    assert (frame["difference"] <= 0.03).all()


def test_full_line_spectrum_check():
    target = zeta(2 + 3j)
    report = full_line_spectrum_check(2.0, 20.0, [target, 0.0])
    near, origin = report.table.to_dict(orient="records")
    assert near["min_distance"] < 1e-8
    assert abs(near["argmin_tau"] - 3.0) < 1e-6
    assert origin["min_distance"] >= FLOOR_AT_TWO - 1e-6
    assert report.annulus == pytest.approx((FLOOR_AT_TWO, np.pi ** 2 / 6))
    assert full_line_spectrum_check(0.5, 20.0, [0.0]).annulus is None


def test_phase_transition_table():
    table = phase_transition_table([2.0, 0.5], [10.0, 50.0, 100.0])
    above = table[table["c"] == 2.0]
    below = table[table["c"] == 0.5]
    assert above["within_bound"].all()
    assert not below["within_bound"].any()
    assert below["sup_modulus"].iloc[-1] > below["sup_modulus"].iloc[0]
    assert below["growing"].any()
    with pytest.raises(PoleInRange):
        phase_transition_table([1.0], [10.0])


def test_global_operator_curve():
    curve = global_operator_curve(0.5, 20.0, resolution=0.05)
    assert curve.symbol == "xi"
    assert np.max(np.abs(curve.values.imag)) < 1e-12 * np.max(np.abs(curve.values))
    assert np.min(np.abs(local_minima(curve) - FIRST_ZERO)) < 0.05
    with pytest.raises(PoleInRange):
        global_operator_curve(0.0, 10.0)
    assert global_operator_curve(1.0, 10.0, puncture=0.5).pole_flag


@pytest.mark.parametrize("c", [0.0, 0.5, 2.0])
@pytest.mark.parametrize("tau", [0.0, 3.0, 14.0])
def test_witness_residual_halves_per_doubling(c, tau):
    frame = approximate_point_spectrum_witness(c, tau, [5, 10, 20, 40])
    ratios = frame["residual"].values[:-1] / frame["residual"].values[1:]
    assert np.all(np.abs(ratios - 2) < 0.1)


def test_witness_off_the_line_stays_away():
    frame = approximate_point_spectrum_witness(0.5, 3.0, [5, 10, 20, 40], offset=0.3)
    assert (frame["residual"] >= 0.3 * (1 - 1e-3)).all()
