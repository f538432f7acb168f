""" Sampled functions on a uniform grid standing in for the weighted space L^2(R, exp(-2ct) dt). """

from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate

from .exceptions import GridMismatch, ShiftOutOfRange, SupportTouchesBoundary

DEFAULT_T_MIN = -40.0
DEFAULT_T_MAX = 40.0
DEFAULT_STEP = 2.0 ** -10
DEFAULT_GUARD_BAND = 5.0

# Samples below this fraction of the peak modulus count as outside the support.
SUPPORT_RTOL = 1e-14


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Complex samples f(t_min + k h), k = 0..n-1, as an element of H_c.

    ``guard_band`` is the margin that the support must keep from both grid ends for derivatives and the
    functional calculus.
    """

    t_min: float
    h: float
    samples: np.ndarray
    c: float = 0.0
    guard_band: float = DEFAULT_GUARD_BAND

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"Grid step must be positive, got {self.h}.")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("Grid function samples must be finite.")

    @classmethod
    def from_callable(cls, func, c=0.0, t_min=DEFAULT_T_MIN, t_max=DEFAULT_T_MAX, h=DEFAULT_STEP,
                      guard_band=DEFAULT_GUARD_BAND):
        """Sample ``func`` on [t_min, t_max]; (t_max - t_min) / h must be an integer."""
        steps = (t_max - t_min) / h
        if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
            raise ValueError(f"(t_max - t_min)/h = {steps} is not an integer.")
        t = t_min + h * np.arange(int(round(steps)) + 1)
        return cls(float(t_min), float(h), np.asarray(func(t), dtype=complex), float(c), float(guard_band))

    @property
    def n(self):
        return len(self.samples)

    @property
    def t_max(self):
        return self.t_min + (self.n - 1) * self.h

    @property
    def times(self):
        return self.t_min + self.h * np.arange(self.n)

    @property
    def weight(self):
        return np.exp(-2 * self.c * self.times)

    def with_samples(self, samples):
        return replace(self, samples=np.asarray(samples, dtype=complex))

    def support(self):
        """(first, last) grid time where the modulus is above ``SUPPORT_RTOL`` of its peak, or None."""
        modulus = np.abs(self.samples)
        peak = modulus.max()
        if peak == 0:
            return None
        idx = np.flatnonzero(modulus > SUPPORT_RTOL * peak)
        return self.times[idx[0]], self.times[idx[-1]]

    def check_support(self):
        support = self.support()
        if support is None:
            return
        if support[0] < self.t_min + self.guard_band or support[1] > self.t_max - self.guard_band:
            raise SupportTouchesBoundary(
                f"Support [{support[0]:.3f}, {support[1]:.3f}] enters the guard band of {self.guard_band} "
                f"at the grid ends [{self.t_min:.3f}, {self.t_max:.3f}]."
            )

    def same_grid(self, other):
        return (self.n == other.n and np.isclose(self.t_min, other.t_min) and np.isclose(self.h, other.h)
                and self.c == other.c)

    def __add__(self, other):
        _require_same_grid(self, other)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other):
        _require_same_grid(self, other)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, scalar):
        return self.with_samples(self.samples * scalar)

    __rmul__ = __mul__


def _require_same_grid(f, g):
    if not f.same_grid(g):
        raise GridMismatch(
            f"Grids differ: (t_min={f.t_min}, h={f.h}, n={f.n}, c={f.c}) vs "
            f"(t_min={g.t_min}, h={g.h}, n={g.n}, c={g.c})."
        )


def weighted_inner(f: GridFunction, g: GridFunction) -> complex:
    """<f, g>_c = int f(t) conj(g(t)) exp(-2ct) dt by the trapezoid rule."""
    _require_same_grid(f, g)
    return complex(integrate.trapezoid(f.samples * np.conj(g.samples) * f.weight, dx=f.h))


def weighted_norm(f: GridFunction) -> float:
    """||f||_c by the trapezoid rule."""
    return float(np.sqrt(integrate.trapezoid(np.abs(f.samples) ** 2 * f.weight, dx=f.h)))


def infinitesimal_shift(f: GridFunction) -> GridFunction:
    """Derivative by fourth-order central differences; the two samples at each end are set to zero.

    :raises SupportTouchesBoundary: if the support enters the guard band.
    """
    f.check_support()
    y = f.samples
    d = np.zeros_like(y)
    d[2:-2] = (-y[4:] + 8 * y[3:-1] - 8 * y[1:-3] + y[:-4]) / (12 * f.h)
    return f.with_samples(d)


def adjoint_shift(f: GridFunction) -> GridFunction:
    """Adjoint 2c - d/dt of the infinitesimal shift in H_c."""
    return f.with_samples(2 * f.c * f.samples - infinitesimal_shift(f).samples)


def shift_group(f: GridFunction, t: float) -> GridFunction:
    """Translation (e^{-t d} f)(u) = f(u - t).

    Lattice shifts (t a multiple of h) move samples; other shifts interpolate linearly.

    :raises ShiftOutOfRange: if the shifted support leaves the grid.
    """
    support = f.support()
    if support is None:
        return f
    if support[0] + t < f.t_min or support[1] + t > f.t_max:
        raise ShiftOutOfRange(f"Shift by {t} moves the support [{support[0]:.3f}, {support[1]:.3f}] off the grid.")
    steps = t / f.h
    if abs(steps - round(steps)) < 1e-9:
        k = int(round(steps))
        out = np.zeros_like(f.samples)
        if k >= 0:
            out[k:] = f.samples[:f.n - k]
        else:
            out[:k] = f.samples[-k:]
        return f.with_samples(out)
    u = f.times - t
    real = np.interp(u, f.times, f.samples.real, left=0.0, right=0.0)
    imag = np.interp(u, f.times, f.samples.imag, left=0.0, right=0.0)
    return f.with_samples(real + 1j * imag)


def weighted_transform(f: GridFunction) -> GridFunction:
    """Unitary map W: H_c -> H_0, (Wf)(t) = exp(-ct) f(t)."""
    return replace(f, samples=f.samples * np.exp(-f.c * f.times), c=0.0)


def inverse_weighted_transform(u: GridFunction, c: float) -> GridFunction:
    """Inverse of :func:`weighted_transform` onto H_c."""
    return replace(u, samples=u.samples * np.exp(c * u.times), c=float(c))


def bump(center=0.0, width=1.0):
    """Smooth compactly supported bump exp(-1/(1 - x**2)), x = (t - center)/width, as a callable."""

    def profile(t):
        x = (np.asarray(t, dtype=float) - center) / width
        inside = np.abs(x) < 1
        out = np.zeros_like(x)
        out[inside] = np.exp(-1 / (1 - x[inside] ** 2))
        return out

    return profile


def gaussian(center=0.0, sigma=1.0):
    """Gaussian exp(-(t - center)**2 / (2 sigma**2)) as a callable."""
    return lambda t: np.exp(-0.5 * ((np.asarray(t, dtype=float) - center) / sigma) ** 2)
