"""
Prime tables for the census and the oracle sweep.
"""

from typing import List

import numpy as np

from .models import PrimeFilter


def prime_table(limit: int) -> np.ndarray:
    """All primes <= limit, ascending, as int64."""
    if limit < 2:
        return np.array([], dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)


def filtered_primes(limit: int, prime_filter: PrimeFilter) -> np.ndarray:
    primes = prime_table(limit)
    if prime_filter == PrimeFilter.ONE_MOD_4:
        return primes[primes % 4 == 1]
    if prime_filter == PrimeFilter.ONE_MOD_8:
        return primes[primes % 8 == 1]
    return primes


def smallest_prime_factor(limit: int) -> np.ndarray:
    """spf[m] is the least prime dividing m for 2 <= m <= limit (0 below)."""
    spf = np.zeros(limit + 1, dtype=np.int64)
    for p in range(2, limit + 1):
        if p * p > limit:
            break
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    unset = spf == 0
    unset[:2] = False
    spf[unset] = np.flatnonzero(unset)
    return spf


def factor_with_table(n: int, spf: np.ndarray) -> List[int]:
    """Prime factors of n with multiplicity, ascending."""
    factors = []
    while n > 1:
        p = int(spf[n])
        factors.append(p)
        n //= p
    return factors
