""" Frequencies of a fractal string: spectral counting, spectral zeta function, Weyl remainder and the direct and
inverse spectral experiments.

Frequencies are normalized, f = k / l_j, so the Weyl term is W(x) = total_length * x.
"""

from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy import special

from .complex_dimensions import geometric_zeta
from .exceptions import AbscissaViolation, DepthCapExceeded
from .fractal_strings import (
    JUMP_RTOL,
    FractalString,
    _atoms,
    estimate_minkowski,
    geometric_counting,
    lapidus_maier_string,
    power_law_string,
)
from .zeta_engine import DEFAULT_ACCURACY, zeta

DIRECT = "DirectEnumeration"
CONVOLUTION = "HarmonicConvolution"

# Upper bound on the number of (x, atom) pairs evaluated at once.
_CHUNK_ENTRIES = 2_000_000


@dataclass(frozen=True)
class SpectralCount:
    x: float
    count: float
    method: str


@dataclass(frozen=True)
class LapoReport:
    dimension: float
    c_D_predicted: float
    c_D_measured: float
    rel_error: float
    minkowski_content: float
    zeta_at_dimension: float


@dataclass(frozen=True)
class InverseProblemReport:
    dimension: float
    tau: float
    beta: float
    geometric_amplitude: float
    spectral_amplitude: float
    amplitude_ratio: float
    zeta_modulus: float
    samples: int


def _jump_floor(q):
    """floor(q) with the value k - 1/2 at integers k >= 1."""
    nearest = np.round(q)
    at_jump = (np.abs(q - nearest) <= JUMP_RTOL * np.abs(q)) & (nearest >= 1)
    return np.where(at_jump, nearest - 0.5, np.floor(q))


def _check_covered(limit, xs):
    if np.any(xs >= limit * (1 - JUMP_RTOL)):
        raise DepthCapExceeded(f"Frequencies up to {np.max(xs):g} need reciprocal lengths beyond {limit:g}.")


def spectral_count_values(eta, x):
    """Direct frequency count N_nu(x) = sum_j w_j floor*(x / r_j) for a scalar or array ``x``."""
    locations, weights, limit = _atoms(eta)
    xs = np.asarray(x, dtype=float)
    _check_covered(limit, xs)
    flat = xs.ravel()
    used = np.searchsorted(locations, flat.max() * (1 + JUMP_RTOL), side="right") if flat.size else 0
    locations, weights = locations[:used], weights[:used]
    out = np.empty(flat.shape, dtype=np.result_type(weights, float))
    rows = max(1, _CHUNK_ENTRIES // max(used, 1))
    for start in range(0, flat.size, rows):
        chunk = flat[start:start + rows]
        out[start:start + rows] = _jump_floor(chunk[:, None] / locations[None, :]) @ weights
    out = np.real_if_close(out.reshape(xs.shape))
    return out.item() if xs.ndim == 0 else out


def harmonic_convolution_count(eta, x: float):
    """N_nu(x) = sum_{n >= 1} N_eta(x / n); only n <= x / r_1 contribute."""
    locations, _, limit = _atoms(eta)
    _check_covered(limit, np.asarray(x))
    n_max = int(np.floor(x / locations[0] * (1 + JUMP_RTOL)))
    if n_max < 1:
        return 0.0
    return float(np.sum(geometric_counting(eta, x / np.arange(1, n_max + 1))))


def spectral_counting(eta, x: float):
    """Spectral counting function by pair enumeration and by harmonic convolution of the geometric count.

    :param eta: Ordinary or generalized string materialized beyond ``x``.
    :param x: Positive frequency bound.
    :raises DepthCapExceeded: if reciprocal lengths up to ``x`` are not all materialized.
    :return: ``[direct, convolution]`` records.
    :rtype: list of :class:`SpectralCount`
    """
    x = float(x)
    return [
        SpectralCount(x, spectral_count_values(eta, x), DIRECT),
        SpectralCount(x, harmonic_convolution_count(eta, x), CONVOLUTION),
    ]


def spectral_zeta(eta, s, acc=DEFAULT_ACCURACY):
    """zeta_nu(s) = zeta_L(s) * zeta(s)."""
    return geometric_zeta(eta, s, acc) * zeta(s, acc)


def spectral_zeta_direct(string: FractalString, s: complex, max_frequency: float):
    """Dirichlet sum over the frequencies f <= max_frequency with a bound on the omitted frequencies.

    :return: ``(value, tail_bound)``
    :raises AbscissaViolation: unless Re(s) > max(1, dimension).
    """
    s = complex(s)
    sigma = s.real
    if sigma <= max(1.0, string.dimension):
        raise AbscissaViolation(f"Frequency sum diverges at Re(s)={sigma:g}.")
    F = float(max_frequency)
    inside = string.reciprocals <= F
    r, w = string.reciprocals[inside], string.weights[inside]
    K = np.floor(F / r).astype(np.int64)
    k = np.arange(1, K.max() + 1, dtype=float) if K.size else np.array([1.0])
    partial = np.cumsum(np.exp(-s * np.log(k)))
    value = np.sum(w * np.exp(-s * np.log(r)) * partial[K - 1]) if K.size else 0j

    bound = np.sum(w * r ** (-sigma) * special.zeta(sigma, K + 1.0))
    outside = np.sum(string.weights[~inside] * string.reciprocals[~inside] ** (-sigma))
    if not string.is_finite:
        outside += string.rule.zeta_tail_bound(string.count, sigma)
    bound += outside * special.zeta(sigma, 1.0)
    return complex(value), float(bound)


def weyl_remainder_profile(string: FractalString, x_grid) -> pd.DataFrame:
    """W(x) - N_nu(x) on a grid, with W(x) = total_length * x; CSV columns ``x,weyl,count,remainder``."""
    xs = np.asarray(x_grid, dtype=float)
    weyl = string.total_length * xs
    count = spectral_count_values(string, xs)
    return pd.DataFrame({"x": xs, "weyl": weyl, "count": count, "remainder": weyl - count})


def fit_oscillation(x, y, tau):
    """Least-squares fit y ~ a + A cos(tau log x) + B sin(tau log x).

    :return: ``(a, amplitude, phase)`` with amplitude sqrt(A**2 + B**2).
    """
    logx = np.log(np.asarray(x, dtype=float))
    design = np.column_stack([np.ones_like(logx), np.cos(tau * logx), np.sin(tau * logx)])
    (a, A, B), *_ = np.linalg.lstsq(design, np.asarray(y, dtype=float), rcond=None)
    return float(a), float(np.hypot(A, B)), float(np.arctan2(-B, A))


def lapo_coefficient_check(D: float, x_fit: float = 1e5, samples: int = 2000, eps_grid=None):
    """Compare the measured coefficient of x**D in W(x) - N_nu(x) for the string l_j = j**(-1/D) with
    2**-(1-D) (1-D) (-zeta(D)) M, where M is the Minkowski content measured from tube volumes.

    :param D: Dimension in (0, 1).
    :param x_fit: Upper end of the fitting range [x_fit / 100, x_fit].
    :param samples: Number of log-uniform fitting points.
    :param eps_grid: Epsilons for the content estimate, defaults to 41 points in [1e-9, 1e-5].
    :rtype: :class:`LapoReport`
    """
    if not 0 < D < 1:
        raise ValueError(f"D must lie in (0, 1), got {D}.")
    eps_grid = np.logspace(-9, -5, 41) if eps_grid is None else eps_grid
    string = power_law_string(D, 1.0, 16).covering(x_fit)
    content = estimate_minkowski(string, D, eps_grid).content
    zeta_D = zeta(D).real
    predicted = 2 ** (-(1 - D)) * (1 - D) * (-zeta_D) * content

    xs = np.logspace(np.log10(x_fit / 100), np.log10(x_fit), samples)
    remainder = string.total_length * xs - spectral_count_values(string, xs)
    design = np.column_stack([xs ** D, np.ones_like(xs)])
    (measured, _), *_ = np.linalg.lstsq(design, remainder, rcond=None)
    return LapoReport(D, float(predicted), float(measured), float(abs(measured - predicted) / abs(predicted)),
                      float(content), float(zeta_D))


def inverse_problem_experiment(D: float, tau: float, beta: float, x_min=1e5, x_max=1e8, samples=8000):
    """Geometric against spectral oscillation amplitude for the string with N_L(x) = floor(x**D (1 + 2 beta
    cos(tau log x))).

    The geometric amplitude is fitted on (N_L(x) - x**D) / x**D, the spectral one on (W(x) - N_nu(x)) / x**D, both
    with the harmonic cos/sin(tau log x) on a log-uniform grid. Their ratio tracks |zeta(D + i tau)|.

    :raises NonMonotoneTarget: if beta violates the monotonicity guard.
    :rtype: :class:`InverseProblemReport`
    """
    string = lapidus_maier_string(D, tau, beta, 16)
    # materialize far past x_max so that the total length, hence W, is accurate
    string = string.down_to(1 / (100 * x_max))
    xs = np.exp(np.linspace(np.log(x_min), np.log(x_max), samples))
    scale = xs ** D
    geometric = (geometric_counting(string, xs) - scale) / scale
    spectral = (string.total_length * xs - spectral_count_values(string, xs)) / scale
    _, geometric_amplitude, _ = fit_oscillation(xs, geometric, tau)
    _, spectral_amplitude, _ = fit_oscillation(xs, spectral, tau)
    ratio = spectral_amplitude / geometric_amplitude if geometric_amplitude > 0 else np.nan
    return InverseProblemReport(D, tau, beta, geometric_amplitude, spectral_amplitude, float(ratio),
                                float(abs(zeta(complex(D, tau)))), samples)
