""" Location of the critical zeros of zeta by sign changes of the real function xi(1/2 + it), and the zero cache. """

import os
import tempfile
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import AccuracyExceeded, RangeExceeded, ScanStepTooCoarse, ZetaLabWarning
from .zeta_engine import ZERO_SEARCH_ACCURACY, EvalAccuracy, riemann_von_mangoldt, scaled_xi_on_line

SCAN_STEP = 0.01
MAX_ORDINATE = 1e4
CACHE_FILENAME = "zeros.tsv"
CACHE_HEADER = "# zetalab-zeros v1 t_max={t_max} tol={tol}"


@dataclass(frozen=True)
class ZetaZero:
    """Critical zero 1/2 + it bracketed by [t - half_width, t + half_width]."""

    t: float
    half_width: float

    @property
    def rho(self) -> complex:
        return complex(0.5, self.t)


def cache_dir() -> Path:
    """Directory of the zero cache: ``$ZETALAB_CACHE`` if set, else ``~/.cache/zetalab``."""
    env = os.environ.get("ZETALAB_CACHE")
    return Path(env) if env else Path.home() / ".cache" / "zetalab"


def _suspicious_cells(values):
    """Indices i of interior samples that are a local minimum of |Z| without a sign change around them, where
    the parabola through the three samples dips through zero."""
    a, b, c = values[:-2], values[1:-1], values[2:]
    same_sign = (np.sign(a) == np.sign(b)) & (np.sign(b) == np.sign(c)) & (b != 0)
    local_min = (np.abs(b) < np.abs(a)) & (np.abs(b) < np.abs(c))
    curvature = (a - 2 * b + c) * np.sign(b)
    with np.errstate(divide="ignore", invalid="ignore"):
        vertex = np.abs(b) - (c - a) ** 2 / (8 * curvature)
    return np.flatnonzero(same_sign & local_min & (curvature > 0) & (vertex <= 0)) + 1


def _sign_change_brackets(t, values):
    change = np.flatnonzero(np.sign(values[:-1]) * np.sign(values[1:]) < 0)
    return [(t[i], t[i + 1]) for i in change]


def _scan(t_max, step, acc, verbose):
    t = np.arange(0, int(np.floor(t_max / step)) + 1) * step
    if t[-1] < t_max:
        t = np.append(t, t_max)
    values = scaled_xi_on_line(t, acc)
    brackets = _sign_change_brackets(t, values)
    for i in _suspicious_cells(values):
        fine = np.linspace(t[i - 1], t[i + 1], 21)
        fine_values = scaled_xi_on_line(fine, acc)
        if len(_suspicious_cells(fine_values)):
            raise ScanStepTooCoarse(
                f"Possible pair of zeros near t={t[i]:.6f} not resolved at step {step / 10:g}."
            )
        new = _sign_change_brackets(fine, fine_values)
        if verbose and new:
            print(f"Refined cell around t={t[i]:.4f}: {len(new)} sign changes.")
        brackets.extend(new)
    brackets.sort()
    return brackets


def _bisect(brackets, abs_tol, acc):
    """Halve every bracket until its half width is at most ``abs_tol / 4`` or the float grid stops it."""
    lo = np.array([b[0] for b in brackets], dtype=float)
    hi = np.array([b[1] for b in brackets], dtype=float)
    f_lo = scaled_xi_on_line(lo, acc)
    target = 0.25 * abs_tol
    while True:
        mid = 0.5 * (lo + hi)
        active = (0.5 * (hi - lo) > target) & (mid > lo) & (mid < hi)
        if not np.any(active):
            return lo, hi
        f_mid = scaled_xi_on_line(mid[active], acc)
        left = np.sign(f_mid) != np.sign(f_lo[active])
        hi[active] = np.where(left, mid[active], hi[active])
        lo[active] = np.where(left, lo[active], mid[active])
        f_lo[active] = np.where(left, f_lo[active], f_mid)


def _quantize(lo, hi, abs_tol):
    """Centre and radius as stored in the cache. Both are written with 17 significant digits, so the record
    reads back bit for bit.

    :raises AccuracyExceeded: if a bracket could not be narrowed to ``abs_tol`` at this ordinate.
    """
    zeros = []
    for a, b in zip(lo, hi):
        t = 0.5 * (a + b)
        radius = max(t - a, b - t)
        if radius > abs_tol:
            raise AccuracyExceeded(f"Zero near t={t:.12g} bracketed only to {radius:.3g} > {abs_tol:g}.")
        zeros.append(ZetaZero(float(t), float(radius)))
    return zeros


def _merge_tables(old, zeros, t_max, tol):
    """Merge a new zero list into an existing table ``(zeros, t_max, tol)``.

    Where the ranges overlap the tighter table wins; zeros above its range come from the other one. The
    merged header keeps the larger height and the looser tolerance, which every stored zero satisfies.
    """
    old_zeros, old_t_max, old_tol = old
    (tight, tight_max, tight_tol), (loose, loose_max, loose_tol) = sorted(
        [(zeros, t_max, tol), (old_zeros, old_t_max, old_tol)], key=lambda table: (table[2], -table[1]))
    merged = list(tight) + [z for z in loose if z.t > tight_max]
    return merged, max(tight_max, loose_max), loose_tol if loose_max > tight_max else tight_tol


def save_zero_table(path, zeros, t_max, tol):
    """Write a zero table in the cache format, merged with the table already at ``path``.

    The file only grows: a run over a shorter range or with a looser tolerance never drops zeros the cache
    already holds. The write goes through a temporary file and ``os.replace``.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    old = load_zero_table(path)
    if old is not None:
        zeros, t_max, tol = _merge_tables(old, zeros, t_max, tol)
    lines = [CACHE_HEADER.format(t_max=f"{t_max:.17g}", tol=f"{tol:.17g}")]
    lines += [f"{z.t:.17g}\t{z.half_width:.17g}" for z in zeros]
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".zeros-", suffix=".tmp")
    with os.fdopen(fd, "w") as handle:
        handle.write("\n".join(lines) + "\n")
    os.replace(tmp, path)


def load_zero_table(path):
    """Read a zero table.

    :return: ``(zeros, t_max, tol)`` or ``None`` if the file is missing or malformed.
    :rtype: tuple or None
    """
    path = Path(path)
    if not path.exists():
        return None
    with open(path) as handle:
        lines = handle.read().splitlines()
    try:
        fields = dict(item.split("=") for item in lines[0].split()[3:])
        if not lines[0].startswith("# zetalab-zeros v1"):
            raise ValueError(lines[0])
        zeros = [ZetaZero(*map(float, line.split("\t"))) for line in lines[1:] if line.strip()]
        return zeros, float(fields["t_max"]), float(fields["tol"])
    except (ValueError, KeyError, IndexError, TypeError):
        warnings.warn(f"Ignoring malformed zero cache {path}.", ZetaLabWarning)
        return None


def find_critical_zeros(t_max: float, acc: EvalAccuracy = ZERO_SEARCH_ACCURACY, use_cache=True, verbose=False):
    """Locate the critical zeros 1/2 + it with 0 < t <= t_max.

    The scan runs at step 0.01; a cell where |xi| has a local minimum whose parabola dips through zero
    without a visible sign change is rescanned ten times finer once. Each sign change is then bisected until
    its half width is at most a quarter of ``acc.abs_tol``, so every returned zero has
    ``half_width <= acc.abs_tol``. The cache stores 17 significant digits and reads back exactly.

    :param t_max: Upper end of the ordinate range, at most 1e4.
    :type t_max: float
    :param acc: Accuracy; ``abs_tol`` is the bisection target, defaults to ``ZERO_SEARCH_ACCURACY``.
    :type acc: :class:`EvalAccuracy`, optional
    :param use_cache: Read and update the zero cache, defaults to True.
    :type use_cache: bool, optional
    :param verbose: Print progress, defaults to False.
    :type verbose: bool, optional
    :return: Zeros sorted by ordinate.
    :rtype: list of :class:`ZetaZero`
    """
    if not 0 < t_max <= MAX_ORDINATE:
        raise RangeExceeded(f"t_max must lie in (0, {MAX_ORDINATE:g}], got {t_max}.")
    path = cache_dir() / CACHE_FILENAME
    if use_cache:
        cached = load_zero_table(path)
        if cached is not None and cached[1] >= t_max and cached[2] <= acc.abs_tol:
            if verbose:
                print(f"Reusing zero table {path} (t_max={cached[1]:g}).")
            return [z for z in cached[0] if z.t <= t_max]

    if verbose:
        print(f"Scanning xi(1/2+it) on (0, {t_max:g}] at step {SCAN_STEP}.")
    eval_acc = EvalAccuracy(abs_tol=max(acc.abs_tol * 1e-2, 1e-14), max_terms=acc.max_terms)
    brackets = _scan(t_max, SCAN_STEP, eval_acc, verbose)
    zeros = _quantize(*_bisect(brackets, acc.abs_tol, eval_acc), acc.abs_tol) if brackets else []
    if verbose:
        print(f"Found {len(zeros)} zeros.")

    if use_cache:
        try:
            save_zero_table(path, zeros, t_max, acc.abs_tol)
        except OSError as err:
            warnings.warn(f"Could not write zero cache {path}: {err}", ZetaLabWarning)
    return zeros


def ordinate_for_count(n_zeros: int) -> float:
    """Smallest height (on a 10-unit grid) whose smooth zero count exceeds ``n_zeros`` by a margin of five."""
    T = 20.0
    while riemann_von_mangoldt(T) < n_zeros + 5:
        T += 10.0
    return T
