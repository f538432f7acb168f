""" Gamma function, logarithmic integral and the complex exponential integral. """

import mpmath
import numpy as np
from scipy import special

from .exceptions import BranchAtOne, PoleAtNonpositiveInteger, PoleHit


def _as_complex(s):
    arr = np.asarray(s, dtype=complex)
    return arr, arr.ndim == 0


def _unwrap(values, scalar):
    return complex(values) if scalar else values


def gamma_fn(s):
    """Euler gamma function for complex arguments.

    Real arguments go through the real gamma so that integer values come back exact.

    :param s: Complex scalar or array, no nonpositive integers.
    :return: Gamma(s), complex scalar or array of the same shape.
    """
    arr, scalar = _as_complex(s)
    nearest = np.round(arr.real)
    at_pole = (np.abs(arr.imag) < 1e-14) & (nearest <= 0) & (np.abs(arr.real - nearest) < 1e-12)
    if np.any(at_pole):
        raise PoleAtNonpositiveInteger(f"Gamma has a pole at {arr[at_pole].ravel()[0]}.")
    if np.all(arr.imag == 0):
        values = special.gamma(arr.real).astype(complex)
    else:
        values = special.gamma(arr)
    return _unwrap(values, scalar)


def log_integral(x):
    """Principal-value logarithmic integral Li(x) = Ei(log x) for real x > 1.

    :param x: Real scalar or array, every entry greater than 1.
    :return: Li(x) with the same shape.
    """
    arr = np.asarray(x, dtype=float)
    if np.any(arr <= 1):
        raise BranchAtOne(f"Li(x) is only evaluated for x > 1, got {arr[arr <= 1].ravel()[0]}.")
    values = special.expi(np.log(arr))
    return float(values) if arr.ndim == 0 else values


def complex_ei(z):
    """Exponential integral Ei(z) on the principal branch, so that Li(x**rho) = Ei(rho * log x).

    :param z: Nonzero complex scalar or array.
    :return: Ei(z), complex scalar or array.
    """
    arr, scalar = _as_complex(z)
    if np.any(arr == 0):
        raise PoleHit("Ei(z) has a logarithmic singularity at z = 0.")
    flat = np.array([complex(mpmath.ei(mpmath.mpc(v.real, v.imag))) for v in arr.ravel()])
    return _unwrap(flat.reshape(arr.shape), scalar)
