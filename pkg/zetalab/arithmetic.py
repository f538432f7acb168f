""" Elementary arithmetic functions: prime sieves and the Mobius function. """

import numpy as np


def primes_up_to(N: int) -> np.ndarray:
    """Sieve of Eratosthenes.

    :param N: Upper bound (inclusive), at least 2.
    :type N: int
    :return: Ascending array of all primes p <= N.
    :rtype: numpy.ndarray
    """
    N = int(N)
    if N < 2:
        raise ValueError(f"primes_up_to needs N >= 2, got {N}.")
    is_prime = np.ones(N + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(np.sqrt(N)) + 1):
        if is_prime[p]:
            is_prime[p * p::p] = False
    return np.flatnonzero(is_prime)


def smallest_prime_factors(N: int) -> np.ndarray:
    """Array ``spf`` with ``spf[n]`` the smallest prime factor of n for 2 <= n <= N (``spf[0] = spf[1] = 0``)."""
    N = int(N)
    spf = np.zeros(N + 1, dtype=np.int64)
    for p in range(2, int(np.sqrt(N)) + 1):
        if spf[p] == 0:
            block = spf[p::p]
            block[block == 0] = p
    unset = np.flatnonzero(spf == 0)
    unset = unset[unset >= 2]
    spf[unset] = unset
    return spf


def mobius_sieve(N: int) -> np.ndarray:
    """Values of the Mobius function for 0..N as an int8 array (index 0 is unused and set to 0).

    Uses the linear-sieve recurrence mu(p*k) = -mu(k) if p does not divide k, else 0.

    :param N: Largest argument.
    :type N: int
    :return: ``mu`` with ``mu[n]`` the Mobius function of n.
    :rtype: numpy.ndarray
    """
    N = int(N)
    mu = np.ones(N + 1, dtype=np.int8)
    mu[0] = 0
    if N < 2:
        return mu
    is_composite = np.zeros(N + 1, dtype=bool)
    for p in range(2, N + 1):
        if is_composite[p]:
            continue
        is_composite[2 * p::p] = True
        mu[p::p] *= -1
        mu[p * p::p * p] = 0
    return mu


def mobius(n: int) -> int:
    """Mobius function by trial division.

    :param n: Positive integer.
    :type n: int
    :return: (-1)**q if n is a product of q distinct primes, 0 otherwise.
    :rtype: int
    """
    n = int(n)
    if n < 1:
        raise ValueError(f"The Mobius function is defined for n >= 1, got {n}.")
    result = 1
    p = 2
    while p * p <= n:
        if n % p == 0:
            n //= p
            if n % p == 0:
                return 0
            result = -result
        p += 1
    if n > 1:
        result = -result
    return result


def factorize(n: int, spf: np.ndarray) -> list:
    """Prime factorization of n as a list of (p, exponent) pairs, using a smallest-prime-factor table."""
    factors = []
    while n > 1:
        p = int(spf[n])
        k = 0
        while n % p == 0:
            n //= p
            k += 1
        factors.append((p, k))
    return factors


def integer_root(x: float, n: int) -> int:
    """Largest integer r with r**n <= x, exact for x up to double precision."""
    if x < 1:
        return 0
    r = int(round(x ** (1.0 / n)))
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r
