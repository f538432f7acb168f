""" Ordinary and generalized fractal strings: data model, counting functions, tube volumes and Minkowski estimates.

An ordinary string is stored by its distinct lengths (descending) with multiplicities. Infinite strings come from
a generator rule and are materialized up to a depth cap; the mass of the lengths beyond the cap is kept
(``tail_length``) together with a bound on its error (``truncation_bound``), so totals stay exact for the
infinite string.
"""

import json
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from scipy import special, stats

from .arithmetic import primes_up_to
from .exceptions import DepthCapExceeded, GridTooShort, NonMonotoneTarget

JUMP_RTOL = 1e-12
TAIL_TOL = 1e-12
MAX_MATERIALIZED = 10_000_000


@dataclass(frozen=True)
class LatticeRule:
    """Lengths base**-(j+1) with multiplicity ratio**j, j = 0, 1, 2, ..."""

    base: float
    ratio: float

    def __post_init__(self):
        if not self.base > 1 or not self.ratio >= 1:
            raise ValueError(f"Lattice rule needs base > 1 and ratio >= 1, got b={self.base}, m={self.ratio}.")
        if not self.ratio < self.base:
            raise ValueError(f"Total length is infinite unless m/b < 1 (b={self.base}, m={self.ratio}).")

    @property
    def dimension(self):
        return float(np.log(self.ratio) / np.log(self.base))

    def reciprocals(self, index):
        return float(self.base) ** (np.asarray(index, dtype=float) + 1)

    def weights(self, index):
        return float(self.ratio) ** np.asarray(index, dtype=float)

    def tail(self, count):
        q = self.ratio / self.base
        return self.ratio ** count * self.base ** (-(count + 1)) / (1 - q), 0.0

    def count_for_length(self, length):
        return max(1, int(np.ceil(np.log(1 / length) / np.log(self.base) - 1 - 1e-12)))

    def count_for_tail(self, tol):
        q = self.ratio / self.base
        bound = (np.log(tol) + np.log(self.base) + np.log(1 - q)) / np.log(q)
        return max(1, int(np.floor(bound)) + 1)

    def zeta_tail_bound(self, count, sigma):
        q = self.ratio * self.base ** (-sigma)
        if q >= 1:
            return np.inf
        return self.ratio ** count * self.base ** (-(count + 1) * sigma) / (1 - q)


@dataclass(frozen=True)
class PowerLawRule:
    """Lengths scale * j**(-1/dimension), j = 1, 2, 3, ... (Minkowski measurable of the given dimension)."""

    dimension: float
    scale: float = 1.0

    def __post_init__(self):
        if not 0 < self.dimension < 1 or not self.scale > 0:
            raise ValueError(f"Power law needs 0 < D < 1 and L > 0, got D={self.dimension}, L={self.scale}.")

    def reciprocals(self, index):
        j = np.asarray(index, dtype=float) + 1
        return j ** (1 / self.dimension) / self.scale

    def weights(self, index):
        return np.ones(np.shape(index))

    def tail(self, count):
        return float(self.scale * special.zeta(1 / self.dimension, count + 1)), 0.0

    def count_for_length(self, length):
        return max(1, int(np.ceil((self.scale / length) ** self.dimension)) - 1)

    def zeta_tail_bound(self, count, sigma):
        if sigma <= self.dimension:
            return np.inf
        return float(self.scale ** sigma * special.zeta(sigma / self.dimension, count + 1))


@dataclass(frozen=True)
class OscillatingCountRule:
    """Reciprocal lengths at the jumps of floor(x**D (1 + 2 beta cos(tau log x))).

    The j-th reciprocal length is the smallest x where the target reaches j, found by bisection in log x.
    """

    dimension: float
    tau: float
    beta: float

    def __post_init__(self):
        if not 0 < self.dimension < 1 or self.tau <= 0 or self.beta < 0:
            raise ValueError(f"Invalid oscillating target D={self.dimension}, tau={self.tau}, beta={self.beta}.")
        guard = self.dimension / (2 * np.hypot(self.dimension, self.tau))
        if self.beta > guard:
            raise NonMonotoneTarget(
                f"beta={self.beta} exceeds the monotonicity guard D/(2 sqrt(D^2+tau^2)) = {guard:.6g}."
            )

    @property
    def omega(self):
        return complex(self.dimension, self.tau)

    def target(self, x):
        x = np.asarray(x, dtype=float)
        return x ** self.dimension * (1 + 2 * self.beta * np.cos(self.tau * np.log(x)))

    def reciprocals(self, index):
        D, tau, beta = self.dimension, self.tau, self.beta
        log_j = np.log(np.asarray(index, dtype=float) + 1)
        lo = (log_j - np.log1p(2 * beta)) / D
        hi = (log_j - np.log1p(-2 * beta)) / D
        while np.any(hi - lo > 1e-12):
            mid = 0.5 * (lo + hi)
            above = D * mid + np.log1p(2 * beta * np.cos(tau * mid)) >= log_j
            hi = np.where(above, mid, hi)
            lo = np.where(above, lo, mid)
        return np.exp(hi)

    def weights(self, index):
        return np.ones(np.shape(index))

    def tail(self, count):
        D, beta, omega = self.dimension, self.beta, self.omega
        X = float(self.reciprocals([count - 1])[0])
        estimate = D * X ** (D - 1) / (1 - D) + 2 * beta * (omega * X ** (omega - 1) / (1 - omega)).real - 0.5 / X
        return float(estimate), 2.0 / X

    def count_for_length(self, length):
        return max(1, int(np.ceil((1 / length) ** self.dimension * (1 + 2 * self.beta))))

    def zeta_tail_bound(self, count, sigma):
        if sigma <= self.dimension:
            return np.inf
        X = float(self.reciprocals([count - 1])[0])
        return (1 + 2 * self.beta) * sigma / (sigma - self.dimension) * X ** (self.dimension - sigma)


@dataclass(frozen=True, eq=False)
class FractalString:
    """Ordinary fractal string: distinct lengths (descending) with multiplicities.

    ``reciprocals`` holds 1/length, exact for lattice strings. ``next_length`` is the largest length that is
    not materialized (0 for a finite string); every reciprocal length below ``1/next_length`` is present.
    """

    lengths: np.ndarray
    weights: np.ndarray
    reciprocals: np.ndarray
    tail_length: float = 0.0
    truncation_bound: float = 0.0
    next_length: float = 0.0
    rule: object = None
    name: str = "explicit"

    @classmethod
    def from_lengths(cls, pairs, name="explicit"):
        """Finite string from ``(length, multiplicity)`` pairs; equal lengths are merged."""
        pairs = np.asarray(pairs, dtype=float).reshape(-1, 2)
        lengths, weights = pairs[:, 0], pairs[:, 1]
        if len(lengths) == 0 or np.any(lengths <= 0) or np.any(weights <= 0):
            raise ValueError("A fractal string needs at least one length, all lengths and multiplicities positive.")
        distinct, inverse = np.unique(-lengths, return_inverse=True)
        merged = np.bincount(inverse, weights=weights)
        lengths = -distinct
        return cls(lengths, merged, 1 / lengths, name=name)

    @classmethod
    def from_rule(cls, rule, count, name=None):
        """Materialize the first ``count`` distinct lengths of a generator rule."""
        count = int(count)
        if count > MAX_MATERIALIZED:
            raise DepthCapExceeded(f"Refusing to materialize {count} lengths (cap {MAX_MATERIALIZED}).")
        index = np.arange(count)
        reciprocals = rule.reciprocals(index)
        tail, bound = rule.tail(count)
        next_length = 1 / float(rule.reciprocals([count])[0])
        return cls(
            1 / reciprocals, rule.weights(index).astype(float), reciprocals, tail, bound, next_length, rule,
            name or type(rule).__name__,
        )

    @property
    def count(self):
        return len(self.lengths)

    @property
    def depth(self):
        return self.count - 1

    @property
    def is_finite(self):
        return self.next_length == 0

    @property
    def limit(self):
        """Every reciprocal length strictly below this value is materialized."""
        return np.inf if self.is_finite else 1 / self.next_length

    @property
    def total_length(self):
        return float(np.sum(self.weights * self.lengths) + self.tail_length)

    @property
    def dimension(self):
        if self.is_finite:
            return 0.0
        return float(self.rule.dimension)

    def down_to(self, length):
        """Copy with every length >= ``length`` materialized (generator strings only)."""
        if self.next_length <= length:
            return self
        if self.rule is None:
            raise DepthCapExceeded(f"String {self.name} has no generator rule to extend.")
        return FractalString.from_rule(self.rule, max(self.rule.count_for_length(length), self.count), self.name)

    def covering(self, x):
        """Copy materialized far enough that counting at ``x`` is exact."""
        if x < self.limit * (1 - JUMP_RTOL):
            return self
        return self.down_to(1 / (x * (1 + 1e-9)))

    def to_json(self):
        if isinstance(self.rule, LatticeRule):
            spec = {"lattice": {"b": self.rule.base, "m": self.rule.ratio, "depth": self.depth}}
        elif isinstance(self.rule, PowerLawRule):
            spec = {"power_law": {"D": self.rule.dimension, "L": self.rule.scale, "count": self.count}}
        elif isinstance(self.rule, OscillatingCountRule):
            rule = self.rule
            spec = {"lapidus_maier": {"D": rule.dimension, "tau": rule.tau, "beta": rule.beta, "count": self.count}}
        else:
            spec = {"lengths": [[float(l), float(w)] for l, w in zip(self.lengths, self.weights)]}
        return json.dumps(spec)

    @classmethod
    def from_json(cls, text):
        """Parse ``{"lengths": [[l, w], ...]}`` or ``{"lattice": {"b": .., "m": .., "depth": ..}}`` (also
        ``power_law`` and ``lapidus_maier`` generator records)."""
        spec = json.loads(text) if isinstance(text, str) else dict(text)
        if "lengths" in spec:
            return cls.from_lengths(spec["lengths"])
        if "lattice" in spec:
            p = spec["lattice"]
            return lattice_string(p["b"], p["m"], p.get("depth"))
        if "power_law" in spec:
            p = spec["power_law"]
            return power_law_string(p["D"], p.get("L", 1.0), p["count"])
        if "lapidus_maier" in spec:
            p = spec["lapidus_maier"]
            return lapidus_maier_string(p["D"], p["tau"], p["beta"], p["count"])
        raise ValueError(f"Unrecognised string record with keys {sorted(spec)}.")


@dataclass(frozen=True, eq=False)
class GeneralizedString:
    """Weighted point masses on (0, inf) at increasing locations.

    ``limit`` is the first location that may carry unmaterialized mass. ``kind`` names the closed form of the
    geometric zeta function ("harmonic", "prime_harmonic", "prime", "string", "convolution" or "explicit").
    """

    locations: np.ndarray
    weights: np.ndarray
    limit: float = np.inf
    kind: str = "explicit"
    prime: int = None
    source: FractalString = None
    factors: tuple = field(default=())
    name: str = "measure"

    def __post_init__(self):
        if len(self.locations) and (self.locations[0] <= 0 or np.any(np.diff(self.locations) <= 0)):
            raise ValueError("Atom locations must be positive and strictly increasing.")


@dataclass(frozen=True)
class TubeProfile:
    epsilons: np.ndarray
    volumes: np.ndarray

    def to_frame(self):
        return pd.DataFrame({"epsilon": self.epsilons, "volume": self.volumes})


@dataclass(frozen=True)
class MinkowskiEstimate:
    upper_content: float
    lower_content: float
    dimension_estimate: float
    dimension_stderr: float
    residual: float

    @property
    def content(self):
        """Midpoint of the upper and lower content estimates."""
        return 0.5 * (self.upper_content + self.lower_content)


def lattice_string(b, m, depth=None, name=None):
    """Lattice string with lengths b**-(j+1) of multiplicity m**j, 0 <= j <= depth.

    Without an explicit depth the cap is chosen so that the tail length is below 1e-12.
    """
    rule = LatticeRule(float(b), float(m))
    count = rule.count_for_tail(TAIL_TOL) if depth is None else int(depth) + 1
    return FractalString.from_rule(rule, count, name or f"lattice(b={b:g},m={m:g})")


def cantor_string(depth=None):
    """Cantor string: lengths 3**-(j+1) with multiplicity 2**j."""
    return lattice_string(3, 2, depth, name="cantor")


def power_law_string(D, L=1.0, J=1000):
    """Lengths L * j**(-1/D) for j = 1..J; the tail beyond J is summed exactly by the Hurwitz zeta function."""
    return FractalString.from_rule(PowerLawRule(float(D), float(L)), J, f"power_law(D={D:g})")


def lapidus_maier_string(D, tau, beta, J=1000):
    """String whose geometric counting function is floor(x**D (1 + 2 beta cos(tau log x))) on the first J jumps.

    :raises NonMonotoneTarget: if beta exceeds D / (2 sqrt(D**2 + tau**2)).
    """
    return FractalString.from_rule(OscillatingCountRule(float(D), float(tau), float(beta)), J,
                                   f"lapidus_maier(D={D:g},tau={tau:g},beta={beta:g})")


def single_interval(length=1.0):
    return FractalString.from_lengths([(length, 1)], name="interval")


def _atoms(eta):
    if isinstance(eta, FractalString):
        # reciprocals of descending lengths are ascending
        return eta.reciprocals, eta.weights, eta.limit
    return eta.locations, eta.weights, eta.limit


def geometric_counting(eta, x):
    """Counting function N(x) = eta(0, x) with half the atom weight at a jump.

    :param eta: Ordinary or generalized string.
    :type eta: :class:`FractalString` or :class:`GeneralizedString`
    :param x: Positive real scalar or array.
    :raises DepthCapExceeded: if ``x`` reaches the first unmaterialized reciprocal length.
    :return: N(x), same shape as ``x``.
    """
    locations, weights, limit = _atoms(eta)
    xs = np.asarray(x, dtype=float)
    if np.any(xs >= limit * (1 - JUMP_RTOL)):
        raise DepthCapExceeded(f"Counting at x={xs.max():g} needs atoms beyond the materialized range {limit:g}.")
    cumulative = np.concatenate([[0], np.cumsum(weights)])
    below = np.searchsorted(locations, xs * (1 - JUMP_RTOL), side="left")
    upto = np.searchsorted(locations, xs * (1 + JUMP_RTOL), side="right")
    values = cumulative[below] + 0.5 * (cumulative[upto] - cumulative[below])
    values = np.real_if_close(values)
    return values.item() if xs.ndim == 0 else values


def direct_tube_volume(string: FractalString, epsilon):
    """Inner tube volume V(eps) = sum_j w_j min(2 eps, l_j), including the unmaterialized tail.

    The tail is exact once every unmaterialized length is below 2 eps (then it contributes its full mass);
    otherwise it must be smaller than 1e-12.

    :raises DepthCapExceeded: if the tail is neither saturated nor negligible.
    """
    eps = np.asarray(epsilon, dtype=float)
    if np.any(eps <= 0):
        raise ValueError("Tube volumes need epsilon > 0.")
    two_eps = 2 * eps
    unsaturated = two_eps < string.next_length
    if np.any(unsaturated) and string.tail_length + string.truncation_bound > TAIL_TOL:
        raise DepthCapExceeded(
            f"Tail of {string.name} (mass {string.tail_length:.3g}) is not saturated at eps={eps.min():g}; "
            "materialize more lengths."
        )
    mass = string.weights * string.lengths
    W = np.concatenate([[0], np.cumsum(string.weights)])
    M = np.concatenate([[0], np.cumsum(mass)])
    k = np.searchsorted(-string.lengths, -two_eps, side="right")
    volumes = two_eps * W[k] + (M[-1] - M[k]) + string.tail_length
    return float(volumes) if eps.ndim == 0 else volumes


def tube_profile(string: FractalString, epsilons) -> TubeProfile:
    eps = np.sort(np.asarray(epsilons, dtype=float))[::-1]
    return TubeProfile(eps, direct_tube_volume(string, eps))


def estimate_minkowski(string: FractalString, D_hint: float, eps_grid) -> MinkowskiEstimate:
    """Upper/lower Minkowski content on a grid and the log-log slope estimate of the dimension.

    Generator strings are materialized down to 2 * min(eps_grid) first.

    :param D_hint: Exponent alpha used for V(eps) / eps**(1 - alpha).
    :param eps_grid: Positive epsilons spanning at least four decades.
    :raises GridTooShort: for a grid spanning fewer than four decades.
    """
    eps = np.sort(np.asarray(eps_grid, dtype=float))[::-1]
    if len(eps) < 3 or np.log10(eps[0] / eps[-1]) < 4 - 1e-9:
        raise GridTooShort(f"Epsilon grid must span four decades, spans {np.log10(eps[0] / eps[-1]):.2f}.")
    if string.rule is not None:
        string = string.down_to(2 * eps[-1])
    volumes = direct_tube_volume(string, eps)
    ratios = volumes / eps ** (1 - D_hint)
    fit = stats.linregress(np.log(eps), np.log(volumes))
    residual = np.log(volumes) - (fit.intercept + fit.slope * np.log(eps))
    return MinkowskiEstimate(float(ratios.max()), float(ratios.min()), 1 - fit.slope, fit.stderr,
                             float(np.sqrt(np.mean(residual ** 2))))


def string_to_measure(string: FractalString) -> GeneralizedString:
    """The measure sum_j w_j delta at 1/l_j."""
    return GeneralizedString(string.reciprocals.copy(), string.weights.copy(), string.limit, "string",
                             source=string, name=string.name)


def harmonic_string(cap) -> GeneralizedString:
    """Unit masses at every positive integer <= cap; its geometric zeta function is zeta(s)."""
    n = np.arange(1, int(np.floor(cap)) + 1, dtype=float)
    return GeneralizedString(n, np.ones_like(n), np.floor(cap) + 1, "harmonic", name="harmonic")


def prime_harmonic_string(p: int, cap) -> GeneralizedString:
    """Unit masses at p**k <= cap, k >= 0, so that its geometric zeta function is 1/(1 - p**-s)."""
    powers = [1.0]
    while powers[-1] * p <= cap:
        powers.append(powers[-1] * p)
    return GeneralizedString(np.array(powers), np.ones(len(powers)), powers[-1] * p, "prime_harmonic", prime=int(p),
                             name=f"prime_harmonic({p})")


def prime_string(cap) -> GeneralizedString:
    """Masses log p at every prime power p**m <= cap; its geometric zeta function is -zeta'(s)/zeta(s)."""
    cap = int(np.floor(cap))
    locations, weights = [], []
    for p in primes_up_to(max(cap, 2)):
        if p > cap:
            break
        q = float(p)
        while q <= cap:
            locations.append(q)
            weights.append(np.log(p))
            q *= p
    order = np.argsort(locations)
    return GeneralizedString(np.array(locations)[order], np.array(weights)[order], cap + 1, "prime", name="prime")


def multiplicative_convolution(first: GeneralizedString, second: GeneralizedString, cap) -> GeneralizedString:
    """Measure of products x*y of atoms with x*y <= cap; its geometric zeta function is the product of both."""
    products = np.multiply.outer(first.locations, second.locations).ravel()
    masses = np.multiply.outer(first.weights, second.weights).ravel()
    keep = products <= cap
    locations, inverse = np.unique(products[keep], return_inverse=True)
    weights = np.bincount(inverse, weights=masses[keep].real)
    if np.iscomplexobj(masses):
        weights = weights + 1j * np.bincount(inverse, weights=masses[keep].imag)
    limit = min(first.limit * second.locations[0], second.limit * first.locations[0], np.nextafter(cap, np.inf))
    factors = (first.factors or (first,)) + (second.factors or (second,))
    return GeneralizedString(locations, weights, limit, "convolution", factors=factors,
                             name=f"{first.name}*{second.name}")
