""" Geometric zeta functions, complex dimensions and the explicit formulas built from them.

Meromorphic continuation is only available in closed form: lattice strings (b**-s / (1 - m b**-s)),
power-law strings (L**s zeta(s/D)) and the generalized strings with a known Dirichlet series. Everything else
is evaluated as a truncated Dirichlet series with a certified tail bound, inside its half plane of convergence.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import stats

from .exceptions import AbscissaViolation, PoleAtOne, PoleAtOneInWindow, PoleHit, Unsupported
from .fractal_strings import FractalString, GeneralizedString, LatticeRule, PowerLawRule, geometric_counting
from .special import _as_complex, _unwrap
from .zeta_engine import DEFAULT_ACCURACY, zeta, zeta_derivative

SERIES_TOL = 1e-10
CONTOUR_NODES = 128


@dataclass(frozen=True)
class Window:
    """Region {Re s >= sigma_min, |Im s| <= t_max} in which complex dimensions are visible."""

    sigma_min: float = -1.0
    t_max: float = 50.0

    def __post_init__(self):
        if not self.t_max > 0:
            raise ValueError(f"Window t_max must be positive, got {self.t_max}.")

    def contains(self, s):
        return s.real >= self.sigma_min and abs(s.imag) <= self.t_max


@dataclass(frozen=True)
class ComplexDimension:
    omega: complex
    residue: complex
    order: int = 1
    contour_residue: complex = None


def _lattice_zeta(rule: LatticeRule, s):
    bs = np.exp(-s * np.log(rule.base))
    denominator = 1 - rule.ratio * bs
    if np.any(np.abs(denominator) < 1e-12):
        raise PoleHit(f"s={s} is a complex dimension of the lattice string (b={rule.base}, m={rule.ratio}).")
    return bs / denominator


def _power_law_zeta(rule: PowerLawRule, s, acc):
    try:
        return np.exp(s * np.log(rule.scale)) * zeta(s / rule.dimension, acc)
    except PoleAtOne:
        raise PoleHit(f"s={s} is the complex dimension D={rule.dimension} of the power-law string.")


def series_zeta(string: FractalString, s):
    """Materialized Dirichlet sum sum_j w_j l_j**s with a bound on the unmaterialized remainder.

    :return: ``(value, tail_bound)``; the bound is infinite outside the half plane of convergence.
    """
    arr, scalar = _as_complex(s)
    logl = np.log(string.lengths)
    values = np.exp(np.multiply.outer(arr, logl)) @ string.weights
    if string.is_finite:
        bound = np.zeros(arr.shape)
    else:
        bound = np.vectorize(lambda sigma: string.rule.zeta_tail_bound(string.count, sigma))(arr.real)
    if scalar:
        return complex(values), float(bound)
    return values, bound


def geometric_zeta(eta, s, acc=DEFAULT_ACCURACY):
    """Geometric zeta function of an ordinary or generalized string.

    :param eta: The string.
    :type eta: :class:`FractalString` or :class:`GeneralizedString`
    :param s: Complex scalar or array.
    :raises PoleHit: at a pole of a closed form.
    :raises AbscissaViolation: if a series evaluation cannot certify its tail.
    """
    arr, scalar = _as_complex(s)
    if isinstance(eta, GeneralizedString):
        values = _generalized_zeta(eta, arr, acc)
    elif isinstance(eta.rule, LatticeRule):
        values = _lattice_zeta(eta.rule, arr)
    elif isinstance(eta.rule, PowerLawRule):
        values = _power_law_zeta(eta.rule, arr, acc)
    else:
        values, bound = series_zeta(eta, arr)
        if np.any(bound > SERIES_TOL):
            raise AbscissaViolation(
                f"Dirichlet series of {eta.name} cannot be certified at Re(s)={arr.real.min():g} "
                f"(dimension {eta.dimension:g}); tail bound {np.max(bound):.3g}."
            )
    return _unwrap(np.asarray(values, dtype=complex), scalar)


def _generalized_zeta(eta: GeneralizedString, s, acc):
    if eta.kind == "string":
        return geometric_zeta(eta.source, s, acc)
    if eta.kind == "harmonic":
        return zeta(s, acc)
    if eta.kind == "prime_harmonic":
        denominator = 1 - np.exp(-s * np.log(eta.prime))
        if np.any(np.abs(denominator) < 1e-12):
            raise PoleHit(f"1/(1 - {eta.prime}**-s) has a pole at s={s}.")
        return 1 / denominator
    if eta.kind == "prime":
        z = zeta(s, acc)
        if np.any(np.abs(z) < 1e-14):
            raise PoleHit("-zeta'/zeta has a pole at a zero of zeta.")
        return -zeta_derivative(s, acc) / z
    if eta.kind == "convolution":
        values = np.ones_like(s)
        for factor in eta.factors:
            values = values * _generalized_zeta(factor, s, acc)
        return values
    if np.isfinite(eta.limit):
        raise Unsupported(f"Measure {eta.name} is truncated and has no closed-form geometric zeta function.")
    return np.exp(-np.multiply.outer(s, np.log(eta.locations))) @ eta.weights


def abscissa_fit(string: FractalString, count=10_000):
    """Growth exponent of the counting function from a log-log fit over its last two decades.

    :return: ``(estimate, stderr)``.
    """
    if string.rule is not None and string.count < count:
        string = FractalString.from_rule(string.rule, count, string.name)
    cumulative = np.cumsum(string.weights)
    start = max(0, string.count // 100)
    fit = stats.linregress(np.log(string.reciprocals[start:]), np.log(cumulative[start:]))
    return float(fit.slope), float(fit.stderr)


def abscissa_of_convergence(eta) -> float:
    """Abscissa of convergence of the geometric zeta function (the Minkowski dimension for ordinary strings).

    Exact for lattice strings and the named generalized strings, 0 for finite strings, otherwise a numerical
    estimate from :func:`abscissa_fit`.
    """
    if isinstance(eta, GeneralizedString):
        known = {"harmonic": 1.0, "prime": 1.0, "prime_harmonic": 0.0}
        if eta.kind in known:
            return known[eta.kind]
        if eta.kind == "string":
            return abscissa_of_convergence(eta.source)
        if eta.kind == "convolution":
            return max(abscissa_of_convergence(f) for f in eta.factors)
        return 0.0
    if eta.is_finite:
        return 0.0
    if isinstance(eta.rule, LatticeRule):
        return eta.rule.dimension
    return abscissa_fit(eta)[0]


def contour_residue(func, omega, radius, nodes=CONTOUR_NODES):
    """Residue of ``func`` at ``omega`` by the trapezoid rule on a circle of the given radius."""
    phase = np.exp(2j * np.pi * np.arange(nodes) / nodes)
    return complex(np.mean(func(omega + radius * phase) * radius * phase))


def complex_dimensions_in(string: FractalString, window: Window, acc=DEFAULT_ACCURACY):
    """Visible complex dimensions with analytic residues, each cross-checked by a contour integral.

    Lattice strings have the poles D + i n 2 pi / log b, all with residue 1/(m log b); a power-law string has the
    single pole D with residue D L**D.

    :raises Unsupported: for strings without a closed-form continuation.
    """
    rule = string.rule
    if isinstance(rule, LatticeRule):
        D = rule.dimension
        if D < window.sigma_min:
            return []
        period = 2 * np.pi / np.log(rule.base)
        n_max = int(np.floor(window.t_max / period + 1e-12))
        omegas = D + 1j * period * np.arange(-n_max, n_max + 1)
        residue = 1 / (rule.ratio * np.log(rule.base))
        radius = min(0.25 * period, 0.5)
        func = lambda z: _lattice_zeta(rule, z)
    elif isinstance(rule, PowerLawRule):
        D = rule.dimension
        if D < window.sigma_min:
            return []
        omegas = np.array([complex(D)])
        residue = D * rule.scale ** D
        radius = 0.25 * D
        func = lambda z: _power_law_zeta(rule, z, acc)
    else:
        raise Unsupported(f"String {string.name} has no meromorphic continuation available.")
    return [ComplexDimension(complex(w), complex(residue), 1, contour_residue(func, w, radius)) for w in omegas]


def _checked_dimensions(string, window):
    dims = complex_dimensions_in(string, window)
    for d in dims:
        if abs(d.omega - 1) < 1e-12:
            raise PoleAtOneInWindow("1 is a complex dimension inside the window.")
        if abs(d.omega) < 1e-12:
            raise Unsupported("0 is a complex dimension; the explicit formula has a double pole there.")
    return dims


def _zero_term(string, window):
    """zeta_L(0), included when 0 lies in the window and is not a pole."""
    if window.sigma_min > 0:
        return 0.0
    return geometric_zeta(string, 0.0).real


def tube_formula_via_dimensions(string: FractalString, epsilon, window: Window):
    """Fractal tube formula: sum over visible dimensions of res (2 eps)**(1 - w) / (w (1 - w)) + 2 eps zeta_L(0).

    Conjugate dimensions are summed together, so the result is real.
    """
    dims = _checked_dimensions(string, window)
    eps = np.asarray(epsilon, dtype=float)
    two_eps = 2 * eps
    omegas = np.array([d.omega for d in dims])
    residues = np.array([d.residue for d in dims])
    terms = np.exp(np.multiply.outer(np.log(two_eps), 1 - omegas)) * residues / (omegas * (1 - omegas))
    volumes = terms.sum(axis=-1).real + two_eps * _zero_term(string, window)
    return float(volumes) if eps.ndim == 0 else volumes


def explicit_counting(string: FractalString, x, window: Window, level=1):
    """Pointwise explicit formula for the geometric counting function (level 1) or its density (level 0).

    Level 1: sum res x**w / w + zeta_L(0). Level 0: sum res x**(w - 1). Error terms are omitted.
    """
    if level not in (0, 1):
        raise Unsupported(f"Only levels 0 and 1 are implemented, got {level}.")
    dims = _checked_dimensions(string, window)
    xs = np.asarray(x, dtype=float)
    omegas = np.array([d.omega for d in dims])
    residues = np.array([d.residue for d in dims])
    powers = np.exp(np.multiply.outer(np.log(xs), omegas - (1 - level)))
    if level == 1:
        values = (powers * residues / omegas).sum(axis=-1).real + _zero_term(string, window)
    else:
        values = (powers * residues).sum(axis=-1).real
    return float(values) if xs.ndim == 0 else values


def _spectral_terms(string, window, acc):
    dims = _checked_dimensions(string, window)
    if string.dimension >= 1:
        raise Unsupported("The spectral density formula needs dimension < 1.")
    omegas = np.array([d.omega for d in dims])
    residues = np.array([d.residue for d in dims])
    return geometric_zeta(string, 1.0, acc).real, omegas, residues * zeta(omegas, acc)


def density_spectral_states(string: FractalString, x, window: Window, acc=DEFAULT_ACCURACY):
    """Band-limited density of the frequency measure: zeta_L(1) + sum res zeta(w) x**(w - 1)."""
    constant, omegas, weights = _spectral_terms(string, window, acc)
    xs = np.asarray(x, dtype=float)
    values = constant + (np.exp(np.multiply.outer(np.log(xs), omegas - 1)) * weights).sum(axis=-1).real
    return float(values) if xs.ndim == 0 else values


def integrated_density(string: FractalString, x, window: Window, x0=1.0, acc=DEFAULT_ACCURACY):
    """Integral of :func:`density_spectral_states` from ``x0`` to ``x`` in closed form."""
    constant, omegas, weights = _spectral_terms(string, window, acc)
    xs = np.asarray(x, dtype=float)
    grown = np.exp(np.multiply.outer(np.log(xs), omegas)) - np.exp(np.log(x0) * omegas)
    values = constant * (xs - x0) + (grown * weights / omegas).sum(axis=-1).real
    return float(values) if xs.ndim == 0 else values


def dimension_table(dims) -> pd.DataFrame:
    return pd.DataFrame({
        "re_omega": [d.omega.real for d in dims],
        "im_omega": [d.omega.imag for d in dims],
        "re_residue": [d.residue.real for d in dims],
        "im_residue": [d.residue.imag for d in dims],
        "re_contour_residue": [d.contour_residue.real for d in dims],
        "im_contour_residue": [d.contour_residue.imag for d in dims],
    })


def staircase_table(string: FractalString, xs, window: Window) -> pd.DataFrame:
    """Exact counting function against its level-1 reconstruction, CSV columns ``x,exact,reconstructed,terms``."""
    xs = np.asarray(xs, dtype=float)
    return pd.DataFrame({
        "x": xs,
        "exact": geometric_counting(string, xs),
        "reconstructed": explicit_counting(string, xs, window),
        "terms": len(complex_dimensions_in(string, window)),
    })
