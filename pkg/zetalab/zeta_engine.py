""" Evaluation of the Riemann zeta function, its derivative and the completed zeta function xi.

The right half plane Re(s) >= 0 is handled by Euler-Maclaurin summation with N = max(ceil|Im s|, 30) leading
terms and Bernoulli corrections through B_12; the B_14 term serves as the error estimate and N grows by half
until it drops below the requested tolerance. The left half plane is reached by the functional equation
zeta(s) = chi(s) zeta(1 - s), evaluated in log space so that large imaginary parts do not overflow.
"""

from dataclasses import dataclass
from math import factorial

import numpy as np
from scipy import special

from .arithmetic import primes_up_to
from .exceptions import AccuracyExceeded, PoleAtOne, PoleAtZeroOrOne
from .special import _as_complex, _unwrap

POLE_GUARD = 1e-8

# Largest number of matrix entries evaluated at once in the Euler-Maclaurin head sum.
_CHUNK_ENTRIES = 4_000_000

_BERNOULLI = special.bernoulli(14)
_EM_COEFFS = {k: _BERNOULLI[2 * k] / factorial(2 * k) for k in range(1, 8)}


@dataclass(frozen=True)
class EvalAccuracy:
    """Absolute tolerance and term budget for a zeta evaluation."""

    abs_tol: float = 1e-12
    max_terms: int = 200_000

    def __post_init__(self):
        if not self.abs_tol >= 1e-14:
            raise ValueError(f"abs_tol must be at least 1e-14, got {self.abs_tol}.")
        if int(self.max_terms) < 16:
            raise ValueError(f"max_terms must be at least 16, got {self.max_terms}.")


DEFAULT_ACCURACY = EvalAccuracy()
ZERO_SEARCH_ACCURACY = EvalAccuracy(abs_tol=1e-10)


def _check_pole(arr):
    near = np.abs(arr - 1) < POLE_GUARD
    if np.any(near):
        raise PoleAtOne(f"zeta has a pole at s = 1 (got s = {arr[near].ravel()[0]}).")


def _em_block(s, N, derivative):
    """One Euler-Maclaurin pass for the points ``s`` with per-point cut-offs ``N``."""
    n = np.arange(1, int(N.max()), dtype=float)
    logn = np.log(n)
    mask = n[None, :] < N[:, None]
    terms = np.where(mask, np.exp(-s[:, None] * logn[None, :]), 0)

    Nf = N.astype(float)
    logN = np.log(Nf)
    N_s = np.exp(-s * logN)
    value = terms.sum(axis=1) + Nf * N_s / (s - 1) + 0.5 * N_s
    deriv = None
    if derivative:
        deriv = -(terms * logn[None, :]).sum(axis=1) - logN * Nf * N_s / (s - 1) - Nf * N_s / (s - 1) ** 2
        deriv = deriv - 0.5 * logN * N_s

    # Rising factorial P_m = s(s+1)...(s+m-1) and its derivative, built by recurrence.
    P = np.ones_like(s)
    dP = np.zeros_like(s)
    error = None
    for j in range(13):
        dP = dP * (s + j) + P
        P = P * (s + j)
        order = j + 1
        if order % 2 == 0:
            continue
        k = (order + 1) // 2
        power = N_s * Nf ** (-(2 * k - 1))
        coeff = _EM_COEFFS[k]
        if k <= 6:
            value = value + coeff * P * power
            if derivative:
                deriv = deriv + coeff * power * (dP - logN * P)
        elif derivative:
            error = np.abs(coeff * power) * (np.abs(dP) + logN * np.abs(P))
        else:
            error = np.abs(coeff * P * power)
    return value, deriv, error


def _euler_maclaurin(s, tol, acc, derivative=False):
    """Evaluate zeta (or zeta') at the flat array ``s`` to per-point tolerances ``tol``."""
    s = np.asarray(s, dtype=complex).ravel()
    tol = np.broadcast_to(np.asarray(tol, dtype=float), s.shape).copy()
    if derivative:
        tol = 10 * tol
    N = np.maximum(np.ceil(np.abs(s.imag)), 30).astype(np.int64)
    out = np.empty(s.shape, dtype=complex)
    pending = np.arange(s.size)
    while pending.size:
        if np.any(N[pending] > acc.max_terms):
            worst = pending[np.argmax(N[pending])]
            raise AccuracyExceeded(
                f"Euler-Maclaurin needs more than max_terms={acc.max_terms} terms at s={s[worst]} "
                f"for abs_tol={tol[worst]:.3g}."
            )
        order = pending[np.argsort(N[pending], kind="stable")]
        failed = []
        start = 0
        while start < order.size:
            width = int(N[order[start:]].max())
            rows = max(1, _CHUNK_ENTRIES // width)
            idx = order[start:start + rows]
            value, deriv, error = _em_block(s[idx], N[idx], derivative)
            result = deriv if derivative else value
            ok = error <= tol[idx]
            out[idx[ok]] = result[ok]
            failed.append(idx[~ok])
            start += rows
        pending = np.concatenate(failed) if failed else np.array([], dtype=np.int64)
        N[pending] = np.ceil(1.5 * N[pending]).astype(np.int64)
    return out


def _log_sin_cos(z, cosine=False):
    """log sin(z) or log cos(z) without overflow for large |Im z| (any branch; only exponentiated)."""
    sgn = np.where(z.imag >= 0, 1.0, -1.0)
    w = np.exp(2j * sgn * z)
    with np.errstate(divide="ignore"):
        if cosine:
            return -1j * sgn * z - np.log(2) + np.log1p(w)
        return -1j * sgn * z - np.log(2) + 0.5j * np.pi * sgn + np.log1p(-w)


def log_chi(s):
    """log of chi(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s), the factor in zeta(s) = chi(s) zeta(1-s)."""
    s = np.asarray(s, dtype=complex)
    return s * np.log(2) + (s - 1) * np.log(np.pi) + _log_sin_cos(0.5 * np.pi * s) + special.loggamma(1 - s)


def _reflected(s, acc, derivative):
    """zeta or zeta' for Re(s) < 0 via the functional equation."""
    lc = log_chi(s)
    chi = np.exp(lc)
    inner_tol = np.maximum(acc.abs_tol / np.maximum(np.abs(chi), 1.0), 1e-16)
    z1 = _euler_maclaurin(1 - s, inner_tol, acc)
    if not derivative:
        return chi * z1
    dz1 = _euler_maclaurin(1 - s, inner_tol, acc, derivative=True)
    with np.errstate(divide="ignore", invalid="ignore"):
        cot_part = 0.5 * np.pi * np.exp(
            s * np.log(2) + (s - 1) * np.log(np.pi) + _log_sin_cos(0.5 * np.pi * s, cosine=True)
            + special.loggamma(1 - s)
        )
    return chi * ((np.log(2 * np.pi) - special.digamma(1 - s)) * z1 - dz1) + cot_part * z1


def _evaluate(s, acc, derivative):
    arr, scalar = _as_complex(s)
    _check_pole(arr)
    flat = arr.ravel()
    out = np.empty(flat.shape, dtype=complex)
    right = flat.real >= 0
    if np.any(right):
        out[right] = _euler_maclaurin(flat[right], acc.abs_tol, acc, derivative)
    if np.any(~right):
        out[~right] = _reflected(flat[~right], acc, derivative)
    return _unwrap(out.reshape(arr.shape), scalar)


def zeta(s, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """Riemann zeta function.

    :param s: Complex scalar or array, away from the pole at 1.
    :type s: complex or numpy.ndarray
    :param acc: Target accuracy, defaults to :data:`DEFAULT_ACCURACY`.
    :type acc: :class:`EvalAccuracy`, optional
    :return: zeta(s) with the shape of ``s``.
    :rtype: complex or numpy.ndarray
    """
    return _evaluate(s, acc, derivative=False)


def zeta_derivative(s, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """First derivative zeta'(s), from the term-wise differentiated Euler-Maclaurin expansion.

    :param s: Complex scalar or array, away from the pole at 1.
    :param acc: Target accuracy; the result is within ``10 * acc.abs_tol``.
    :return: zeta'(s) with the shape of ``s``.
    """
    return _evaluate(s, acc, derivative=True)


def xi(s, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """Completed zeta function xi(s) = pi^(-s/2) Gamma(s/2) zeta(s), with simple poles at 0 and 1.

    :param s: Complex scalar or array.
    :param acc: Target accuracy for the zeta factor.
    :return: xi(s) with the shape of ``s``.
    """
    arr, scalar = _as_complex(s)
    if np.any((np.abs(arr) < POLE_GUARD) | (np.abs(arr - 1) < POLE_GUARD)):
        raise PoleAtZeroOrOne("xi has simple poles at s = 0 and s = 1.")
    flat = arr.ravel()
    # xi(s) = xi(1 - s) maps the left half plane onto the right one.
    w = np.where(flat.real >= 0, flat, 1 - flat)
    values = np.exp(-0.5 * w * np.log(np.pi) + special.loggamma(0.5 * w)) * zeta(w, acc)
    return _unwrap(values.reshape(arr.shape), scalar)


def scaled_xi_on_line(t, acc: EvalAccuracy = DEFAULT_ACCURACY):
    """Real function xi(1/2 + it) * exp(pi |t| / 4).

    Has the sign of xi on the critical line, whose zeros are the critical zeros of zeta, while staying of
    moderate size for large t.

    :param t: Real scalar or array of ordinates.
    :return: Real array (or float) of the scaled values.
    """
    tt = np.asarray(t, dtype=float)
    s = 0.5 + 1j * tt
    log_factor = -0.5 * s * np.log(np.pi) + special.loggamma(0.5 * s) + 0.25 * np.pi * np.abs(tt)
    values = (np.exp(log_factor) * zeta(s, acc)).real
    return float(values) if tt.ndim == 0 else values


def riemann_siegel_theta(t):
    """Phase theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi."""
    tt = np.asarray(t, dtype=float)
    return special.loggamma(0.25 + 0.5j * tt).imag - 0.5 * tt * np.log(np.pi)


def riemann_von_mangoldt(T):
    """Smooth estimate theta(T)/pi + 1 of the number of critical zeros with ordinate in (0, T]."""
    return riemann_siegel_theta(T) / np.pi + 1


def euler_product(s, P: int):
    """Partial Euler product over the primes p <= P, convergent to zeta(s) for Re(s) > 1."""
    p = primes_up_to(P).astype(float)
    return complex(np.prod(1.0 / (1.0 - p ** (-complex(s)))))
