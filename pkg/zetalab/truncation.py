""" Truncated spectral operators a^(T) = zeta(c + i phi(V)), their spectra zeta(c + i tau), |tau| <= T, and the
invertibility verdicts built on them. """

import multiprocessing
import warnings
from dataclasses import asdict, dataclass, field

import numpy as np
import pandas as pd
from scipy import optimize

from .exceptions import PoleInRange, ZetaLabWarning
from .grid_functions import GridFunction, bump, infinitesimal_shift, weighted_norm
from .spectral_operator import apply_multiplier, conjugate_symmetric_values
from .zeros import find_critical_zeros
from .zeta_engine import DEFAULT_ACCURACY, EvalAccuracy, xi, zeta, zeta_derivative

INVERTIBLE = "Invertible"
NOT_INVERTIBLE = "NotInvertible"
UNDETERMINED = "Undetermined"
NOT_QUASI_INVERTIBLE = "NotQuasiInvertible"
QUASI_INVERTIBLE_UP_TO = "QuasiInvertibleUpTo"

# An Invertible verdict needs every sampled cell to clear this multiple of (resolution / 2) * max |zeta'|.
LIPSCHITZ_FACTOR = 10.0
DEFAULT_RESOLUTION = 1e-3

_SYMBOLS = {"zeta": zeta, "xi": xi}


@dataclass(frozen=True)
class TruncationSpec:
    """Truncation c + i phi(xi) with phi ranging over T0 <= |tau| <= T; T0 = 0 is the plain truncation."""

    c: float
    T: float
    T0: float = 0.0

    def __post_init__(self):
        if self.c < 0:
            raise ValueError(f"c must be non-negative, got {self.c}.")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}.")
        if not 0 <= self.T0 <= self.T:
            raise ValueError(f"T0 must lie in [0, T], got T0={self.T0}, T={self.T}.")

    def cutoff(self, freqs):
        """phi(xi): the clamp max(-T, min(T, xi)), pushed out to |phi| >= T0 with the sign of xi."""
        freqs = np.asarray(freqs, dtype=float)
        if self.T0 == 0:
            return np.clip(freqs, -self.T, self.T)
        sign = np.where(freqs < 0, -1.0, 1.0)
        return sign * np.clip(np.abs(freqs), self.T0, self.T)


@dataclass(frozen=True, eq=False)
class SpectrumCurve:
    """Samples of g(c + i tau) over the truncation range, both signs of tau, ascending."""

    spec: TruncationSpec
    tau: np.ndarray
    values: np.ndarray
    min_modulus: float
    argmin_tau: float
    resolution: float
    symbol: str = "zeta"
    pole_flag: bool = False

    def to_frame(self):
        return pd.DataFrame({
            "tau": self.tau,
            "re": self.values.real,
            "im": self.values.imag,
            "modulus": np.abs(self.values),
        })


@dataclass(frozen=True)
class InvertibilityVerdict:
    decision: str
    min_modulus: float
    argmin_tau: float
    zero_brackets_used: tuple = ()
    scan_resolution: float = DEFAULT_RESOLUTION
    reason: str = ""

    def to_dict(self):
        out = asdict(self)
        out["zero_brackets_used"] = [[z.t, z.half_width] for z in self.zero_brackets_used]
        return out


@dataclass(frozen=True)
class QuasiInvertibilityReport:
    """Verdict for all truncations T <= horizon, with the zero count in that range.

    ``zero_count`` is None when the scan could not establish the count (an Undetermined row off the line).
    """

    c: float
    horizon: float
    decision: str
    min_modulus: float
    argmin_tau: float
    witness: float = None
    zero_count: int = None
    analytic_floor: float = None
    scan_resolution: float = DEFAULT_RESOLUTION
    reason: str = ""

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True, eq=False)
class SpectrumCheckReport:
    c: float
    T_max: float
    table: pd.DataFrame
    annulus: tuple = field(default=None)


def analytic_floor(c: float) -> float:
    """Lower bound zeta(2c)/zeta(c) of |zeta(c + i tau)| for c > 1."""
    return float((zeta(2 * c) / zeta(c)).real)


def _positive_taus(T0, T, resolution, sample_offset):
    count = max(1, int(np.ceil((T - T0) / resolution)))
    step = (T - T0) / count
    inner = T0 + (np.arange(count) + sample_offset) * step
    return np.unique(np.concatenate([[T0], inner, [T]]))


def _refine_minimum(func, c, taus, moduli, acc):
    """Minimum of |g(c + i tau)| near the smallest sample, refined by bounded Brent search."""
    k = int(np.argmin(moduli))
    lo, hi = taus[max(k - 1, 0)], taus[min(k + 1, len(taus) - 1)]
    best_tau, best = taus[k], moduli[k]
    if hi > lo:
        result = optimize.minimize_scalar(lambda tau: abs(func(complex(c, tau), acc)), bounds=(lo, hi),
                                          method="bounded", options={"xatol": 1e-10})
        if result.fun < best:
            best_tau, best = float(result.x), float(result.fun)
    return best_tau, best


def truncated_spectrum_curve(spec: TruncationSpec, resolution: float = 1e-2, sample_offset: float = 0.0,
                             puncture: float = None, symbol: str = "zeta", acc: EvalAccuracy = DEFAULT_ACCURACY):
    """Spectrum {g(c + i tau): T0 <= |tau| <= T} of the truncated operator g(c + i phi(V)).

    :param spec: Truncation.
    :type spec: :class:`TruncationSpec`
    :param resolution: Largest spacing of the tau samples, defaults to 1e-2.
    :type resolution: float, optional
    :param sample_offset: Position of the interior samples inside their cells, in [0, 1), defaults to 0.
    :type sample_offset: float, optional
    :param puncture: Radius cut out around tau = 0 when the segment meets a pole; the curve then carries
        ``pole_flag`` and stands for a set containing the point at infinity.
    :type puncture: float, optional
    :param symbol: ``"zeta"`` or ``"xi"``, defaults to ``"zeta"``.
    :raises PoleInRange: if the segment passes through a pole and no puncture is given.
    :rtype: :class:`SpectrumCurve`
    """
    if not 0 <= sample_offset < 1:
        raise ValueError(f"sample_offset must lie in [0, 1), got {sample_offset}.")
    func = _SYMBOLS[symbol]
    poles = (1.0,) if symbol == "zeta" else (0.0, 1.0)
    T0, pole_flag = spec.T0, False
    if spec.c in poles and T0 == 0:
        if puncture is None:
            raise PoleInRange(f"{symbol}(c + i tau) has a pole at tau = 0 for c = {spec.c:g}.")
        if not 0 < puncture < spec.T:
            raise ValueError(f"puncture must lie in (0, T), got {puncture}.")
        T0, pole_flag = puncture, True

    taus = _positive_taus(T0, spec.T, resolution, sample_offset)
    values = np.asarray(func(spec.c + 1j * taus, acc), dtype=complex)
    moduli = np.abs(values)
    argmin_tau, min_modulus = _refine_minimum(func, spec.c, taus, moduli, acc)

    # mirror: g(c - i tau) = conj g(c + i tau)
    mirrored = taus[::-1] > 0 if taus[0] == 0 else np.ones(len(taus), dtype=bool)
    tau_all = np.concatenate([-taus[::-1][mirrored], taus])
    values_all = np.concatenate([np.conj(values[::-1][mirrored]), values])
    return SpectrumCurve(spec, tau_all, values_all, float(min_modulus), float(argmin_tau), float(resolution), symbol,
                         pole_flag)


def apply_truncated_operator(f: GridFunction, spec: TruncationSpec, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """a^(T) f = zeta(c + i phi(V)) f with the weight parameter taken from ``spec``.

    :raises PoleInRange: at c = 1 with T0 = 0.
    """
    if spec.c == 1 and spec.T0 == 0:
        raise PoleInRange("The truncated operator at c = 1 meets the pole of zeta at tau = 0.")
    if f.c != spec.c:
        raise ValueError(f"Grid function lives in H_{f.c:g}, truncation is for c={spec.c:g}.")
    return apply_multiplier(f, lambda freqs: conjugate_symmetric_values(zeta, spec.c, spec.cutoff(freqs), acc))


def apply_truncated_inverse(f: GridFunction, spec: TruncationSpec, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """(a^(T))^(-1) f = zeta(c + i phi(V))^(-1) f.

    :raises PoleInRange: if zeta vanishes on the truncation range, or at c = 1 with T0 = 0.
    """
    if spec.c == 1 and spec.T0 == 0:
        raise PoleInRange("The truncated operator at c = 1 meets the pole of zeta at tau = 0.")
    verdict = truncated_invertibility(spec, acc=acc)
    if verdict.decision == NOT_INVERTIBLE:
        raise PoleInRange(f"zeta vanishes at tau = {verdict.argmin_tau:.6f} inside the truncation range.")
    if verdict.decision == UNDETERMINED:
        warnings.warn(f"Invertibility of the truncation is undetermined: {verdict.reason}", ZetaLabWarning)
    if f.c != spec.c:
        raise ValueError(f"Grid function lives in H_{f.c:g}, truncation is for c={spec.c:g}.")
    return apply_multiplier(
        f, lambda freqs: 1 / conjugate_symmetric_values(zeta, spec.c, spec.cutoff(freqs), acc))


def _zeros_in_range(spec):
    zeros = find_critical_zeros(spec.T)
    inside = [z for z in zeros if spec.T0 < z.t]
    straddling = [z for z in zeros if abs(z.t - spec.T0) <= z.half_width or abs(z.t - spec.T) <= z.half_width]
    return inside, straddling


def _lipschitz_cells(spec, resolution, acc):
    """Curve samples and the cells whose modulus does not clear the Lipschitz allowance."""
    taus = _positive_taus(spec.T0, spec.T, resolution, 0.0)
    s = spec.c + 1j * taus
    moduli = np.abs(zeta(s, acc))
    slopes = np.abs(zeta_derivative(s, acc))
    widths = np.diff(taus)
    cell_min = np.minimum(moduli[:-1], moduli[1:])
    cell_slope = np.maximum(slopes[:-1], slopes[1:])
    failing = np.flatnonzero(cell_min <= LIPSCHITZ_FACTOR * 0.5 * widths * cell_slope)
    return taus, moduli, failing


def truncated_invertibility(spec: TruncationSpec, resolution: float = DEFAULT_RESOLUTION,
                            acc: EvalAccuracy = DEFAULT_ACCURACY) -> InvertibilityVerdict:
    """Decide whether zeta(c + i tau) stays away from 0 for T0 <= |tau| <= T.

    c > 1 is decided by the Euler product floor zeta(2c)/zeta(c). On the critical line the decision rests on the
    certified zero brackets. Elsewhere the curve is sampled at ``resolution`` and every cell must clear
    ten times the Lipschitz allowance (resolution / 2) * max |zeta'|; otherwise, and always at c = 1, the
    verdict is Undetermined.

    :param spec: Truncation.
    :type spec: :class:`TruncationSpec`
    :param resolution: Sampling resolution for the cell criterion, defaults to 1e-3.
    :type resolution: float, optional
    :rtype: :class:`InvertibilityVerdict`
    """
    c = spec.c
    if c == 1:
        return InvertibilityVerdict(UNDETERMINED, np.inf, 0.0, (), resolution, "zeta has its pole on the line c = 1")
    if c > 1:
        return InvertibilityVerdict(INVERTIBLE, analytic_floor(c), np.nan, (), resolution,
                                    "Euler product floor zeta(2c)/zeta(c)")
    if c == 0.5:
        inside, straddling = _zeros_in_range(spec)
        if straddling:
            return InvertibilityVerdict(UNDETERMINED, 0.0, straddling[0].t, tuple(straddling), resolution,
                                        "a zero bracket straddles the end of the truncation range")
        if inside:
            moduli = [abs(zeta(z.rho, acc)) for z in inside]
            return InvertibilityVerdict(NOT_INVERTIBLE, float(min(moduli)), inside[0].t, tuple(inside), resolution,
                                        f"{len(inside)} zeros with ordinate in the range")
        curve = truncated_spectrum_curve(spec, resolution, acc=acc)
        return InvertibilityVerdict(INVERTIBLE, curve.min_modulus, curve.argmin_tau, (), resolution,
                                    "no critical zero in the range")

    taus, moduli, failing = _lipschitz_cells(spec, resolution, acc)
    argmin_tau, min_modulus = _refine_minimum(zeta, c, taus, moduli, acc)
    if len(failing):
        return InvertibilityVerdict(UNDETERMINED, min_modulus, argmin_tau, (), resolution,
                                    f"modulus below the Lipschitz allowance near tau = {taus[failing[0]]:.4f}")
    return InvertibilityVerdict(INVERTIBLE, min_modulus, argmin_tau, (), resolution,
                                "every cell clears the Lipschitz allowance")


def quasi_invertibility_scan(c: float, T_max: float, resolution: float = DEFAULT_RESOLUTION,
                             acc: EvalAccuracy = DEFAULT_ACCURACY) -> QuasiInvertibilityReport:
    """Quasi-invertibility of a_c up to the horizon ``T_max``: every truncation T <= T_max is invertible, or a
    witness zero is reported. The zero count in the range gives the almost-invertibility picture.

    :rtype: :class:`QuasiInvertibilityReport`
    """
    if c == 0.5:
        zeros = find_critical_zeros(T_max)
        if zeros:
            first = zeros[0]
            return QuasiInvertibilityReport(c, T_max, NOT_QUASI_INVERTIBLE, float(abs(zeta(first.rho, acc))),
                                            first.t, first.t, len(zeros), None, resolution,
                                            "critical zero inside the horizon")
    verdict = truncated_invertibility(TruncationSpec(c, T_max), resolution, acc)
    decision = {
        INVERTIBLE: QUASI_INVERTIBLE_UP_TO,
        NOT_INVERTIBLE: NOT_QUASI_INVERTIBLE,
        UNDETERMINED: UNDETERMINED,
    }[verdict.decision]
    floor = analytic_floor(c) if c > 1 else None
    zero_count = 0 if decision == QUASI_INVERTIBLE_UP_TO else None
    return QuasiInvertibilityReport(c, T_max, decision, verdict.min_modulus, verdict.argmin_tau, None, zero_count,
                                    floor, resolution, verdict.reason)


def rh_diagnostic(c_grid, T_max: float, resolution: float = DEFAULT_RESOLUTION, poolsize: int = 1,
                  verbose: bool = False) -> pd.DataFrame:
    """Quasi-invertibility verdicts across a grid of c in (0, 1) without 1/2.

    A NotQuasiInvertible or Undetermined row off the critical line would point at a zero off the line.

    :param c_grid: Abscissas.
    :param T_max: Horizon.
    :param resolution: Sampling resolution, defaults to 1e-3.
    :param poolsize: Number of worker processes; 1 runs serially, defaults to 1.
    :type poolsize: int, optional
    :param verbose: Print one line per abscissa, defaults to False.
    :return: One row per c, in grid order.
    :rtype: pandas.DataFrame
    """
    c_grid = [float(c) for c in c_grid]
    for c in c_grid:
        if not 0 < c < 1 or c == 0.5:
            raise ValueError(f"Abscissas must lie in (0, 1) without 1/2, got {c}.")
    args = [(c, T_max, resolution) for c in c_grid]
    if poolsize > 1:
        pool = multiprocessing.Pool(poolsize)
        reports = pool.starmap(quasi_invertibility_scan, args)
        pool.close()
        pool.join()
    else:
        reports = [quasi_invertibility_scan(*arg) for arg in args]
    if verbose:
        for report in reports:
            print(f"c={report.c:.4f}: {report.decision} (min |zeta| = {report.min_modulus:.4g})")
    return report_frame(reports)


def report_frame(reports) -> pd.DataFrame:
    """Table of quasi-invertibility reports, one row each."""
    columns = ["c", "decision", "min_modulus", "argmin_tau", "witness", "zero_count", "horizon"]
    return pd.DataFrame([{name: getattr(r, name) for name in columns} for r in reports], columns=columns)


def local_minima(curve: SpectrumCurve):
    """Ordinates tau > 0 where the sampled |g(c + i tau)| has a strict local minimum."""
    positive = curve.tau > 0
    tau, moduli = curve.tau[positive], np.abs(curve.values[positive])
    inner = np.flatnonzero((moduli[1:-1] < moduli[:-2]) & (moduli[1:-1] < moduli[2:])) + 1
    return tau[inner]


def zero_ordinate_symmetry(c: float, T: float, resolution: float = 1e-2, window: float = 0.5) -> pd.DataFrame:
    """Ordinates of the minima of |zeta| on the lines c and 1 - c next to each critical zero up to height T.

    By the functional equation the two lines see the critical zeros at the same heights.

    :return: Columns ``zero_t``, ``argmin_c``, ``argmin_reflected``, ``difference``.
    :rtype: pandas.DataFrame
    """
    spec, reflected = TruncationSpec(c, T), TruncationSpec(1 - c, T)
    minima_c = local_minima(truncated_spectrum_curve(spec, resolution, puncture=_puncture(c, T)))
    minima_r = local_minima(truncated_spectrum_curve(reflected, resolution, puncture=_puncture(1 - c, T)))
    rows = []
    for zero in find_critical_zeros(T):
        near_c = minima_c[np.abs(minima_c - zero.t) < window]
        near_r = minima_r[np.abs(minima_r - zero.t) < window]
        a = near_c[np.argmin(np.abs(near_c - zero.t))] if len(near_c) else np.nan
        b = near_r[np.argmin(np.abs(near_r - zero.t))] if len(near_r) else np.nan
        rows.append({"zero_t": zero.t, "argmin_c": a, "argmin_reflected": b, "difference": abs(a - b)})
    return pd.DataFrame(rows, columns=["zero_t", "argmin_c", "argmin_reflected", "difference"])


def _puncture(c, T):
    return min(1e-3, T / 2) if c == 1 else None


def full_line_spectrum_check(c: float, T_max: float, targets, resolution: float = 1e-2,
                             acc: EvalAccuracy = DEFAULT_ACCURACY) -> SpectrumCheckReport:
    """Smallest sampled distance from each target to the curve zeta(c + i tau), |tau| <= T_max.

    Small distances are evidence that a target lies in the spectrum of a_c; they never certify absence.
    For c > 1 the report carries the annulus zeta(2c)/zeta(c) <= |zeta(c + i tau)| <= zeta(c).

    :raises PoleInRange: at c = 1.
    :rtype: :class:`SpectrumCheckReport`
    """
    curve = truncated_spectrum_curve(TruncationSpec(c, T_max), resolution, acc=acc)
    rows = []
    for z in np.atleast_1d(np.asarray(targets, dtype=complex)):
        distance = np.abs(curve.values - z)
        k = int(np.argmin(distance))
        lo, hi = curve.tau[max(k - 1, 0)], curve.tau[min(k + 1, len(curve.tau) - 1)]
        best_tau, best = curve.tau[k], distance[k]
        if best > 0 and hi > lo:
            result = optimize.minimize_scalar(lambda tau: abs(zeta(complex(c, tau), acc) - z), bounds=(lo, hi),
                                              method="bounded", options={"xatol": 1e-10})
            if result.fun < best:
                best_tau, best = float(result.x), float(result.fun)
        rows.append({"target_re": z.real, "target_im": z.imag, "min_distance": float(best),
                     "argmin_tau": float(best_tau)})
    annulus = (analytic_floor(c), float(zeta(c).real)) if c > 1 else None
    return SpectrumCheckReport(c, T_max, pd.DataFrame(rows), annulus)


def phase_transition_table(c_values, horizons, resolution: float = 2e-2,
                           acc: EvalAccuracy = DEFAULT_ACCURACY) -> pd.DataFrame:
    """Sampled sup |zeta(c + i tau)| over |tau| <= horizon.

    For c > 1 the sup stays below zeta(c) (bounded operator). For c < 1 it keeps growing with the horizon,
    the sampled trace of an unbounded operator; ``growing`` records whether the sup increased against the
    previous horizon.

    :return: Columns ``c``, ``horizon``, ``sup_modulus``, ``bound``, ``within_bound``, ``growing``.
    :rtype: pandas.DataFrame
    """
    rows = []
    horizons = sorted(float(T) for T in horizons)
    for c in c_values:
        c = float(c)
        if c == 1:
            raise PoleInRange("sup |zeta(1 + i tau)| is infinite.")
        bound = float(zeta(c).real) if c > 1 else np.nan
        taus = _positive_taus(0.0, horizons[-1], resolution, 0.0)
        running = np.maximum.accumulate(np.abs(zeta(c + 1j * taus, acc)))
        previous = None
        for T in horizons:
            sup = float(running[np.searchsorted(taus, T, side="right") - 1])
            rows.append({
                "c": c,
                "horizon": T,
                "sup_modulus": sup,
                "bound": bound,
                "within_bound": bool(c > 1 and sup <= bound * (1 + 1e-12)),
                "growing": bool(previous is not None and sup > previous),
            })
            previous = sup
    return pd.DataFrame(rows)


def global_operator_curve(c: float, T: float, resolution: float = 1e-2, puncture: float = None,
                          acc: EvalAccuracy = DEFAULT_ACCURACY) -> SpectrumCurve:
    """Spectrum curve xi(c + i tau), |tau| <= T, of the global operator xi(d).

    :raises PoleInRange: at c in {0, 1} unless a puncture is given.
    """
    return truncated_spectrum_curve(TruncationSpec(c, T), resolution, puncture=puncture, symbol="xi", acc=acc)


def approximate_point_spectrum_witness(c: float, tau: float, widths, offset: float = 0.0,
                                       h: float = 2.0 ** -7) -> pd.DataFrame:
    """Residuals ||d f_w - lambda f_w||_c for windowed exponentials f_w(t) = exp((c + i tau) t) G(t / w),
    normalized in H_c, with G the smooth bump on [-1, 1] and lambda = c + offset + i tau.

    For ``offset = 0`` the residual decays like 1/w, so c + i tau is an approximate eigenvalue; a real offset
    keeps the residual above |offset|.

    :param widths: Ascending window widths.
    :param offset: Real distance of lambda from the line Re = c, defaults to 0.
    :param h: Grid step, defaults to 2**-7.
    :return: Columns ``width``, ``residual``.
    :rtype: pandas.DataFrame
    """
    widths = [float(w) for w in widths]
    guard = 1.0
    span = np.ceil((max(widths) + guard + 1) / h) * h
    eigen = complex(c, tau)
    rows = []
    for w in widths:
        profile = bump(0.0, w)
        f = GridFunction.from_callable(lambda t: np.exp(eigen * t) * profile(t), c=c, t_min=-span, t_max=span, h=h,
                                       guard_band=guard)
        f = f * (1 / weighted_norm(f))
        residual = infinitesimal_shift(f) - f * (eigen + offset)
        rows.append({"width": w, "residual": weighted_norm(residual)})
    return pd.DataFrame(rows)
