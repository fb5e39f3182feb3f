"""
Residue symbols over Z and Z[i].

The quartic symbol (alpha/lambda)_4 is evaluated from its definition:
alpha^((N(lambda)-1)/4) reduced modulo lambda. For a split prime lambda of
norm p the residue field is F_p with i sent to the root of -1 fixed by
lambda = 0; for an inert prime q the computation runs in Z[i]/q.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple, Union

from sympy import factorint, isprime, jacobi_symbol

from .exceptions import (
    EvenNorm,
    InputError,
    NotCoprime,
    NotPrimary,
    NotPrime,
    NotQuarticApplicable,
)
from .gaussian import GaussInt, PrimaryPrime, factor_primary, is_gaussian_prime, is_primary

_LABELS = {0: "1", 1: "i", 2: "-1", 3: "-i"}


@dataclass(frozen=True, slots=True)
class QuarticValue:
    """An element of {0, 1, i, -1, -i}; ``exponent`` t means i^t, None means 0."""

    exponent: Optional[int]

    @classmethod
    def power_of_i(cls, t: int) -> QuarticValue:
        return cls(t % 4)

    @classmethod
    def from_sign(cls, sign: int) -> QuarticValue:
        return cls(0 if sign == 1 else 2)

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def __mul__(self, other: QuarticValue) -> QuarticValue:
        if self.exponent is None or other.exponent is None:
            return QUARTIC_ZERO
        return QuarticValue((self.exponent + other.exponent) % 4)

    def __pow__(self, e: int) -> QuarticValue:
        if self.exponent is None:
            return QUARTIC_ZERO if e > 0 else QUARTIC_ONE
        return QuarticValue((self.exponent * e) % 4)

    def conjugate(self) -> QuarticValue:
        if self.exponent is None:
            return self
        return QuarticValue(-self.exponent % 4)

    def to_sign(self) -> int:
        """Return the value as +1/-1; only valid for real nonzero values."""
        if self.exponent == 0:
            return 1
        if self.exponent == 2:
            return -1
        raise ValueError(f"{self} is not a real unit")

    def __str__(self) -> str:
        if self.exponent is None:
            return "0"
        return _LABELS[self.exponent]


QUARTIC_ZERO = QuarticValue(None)
QUARTIC_ONE = QuarticValue(0)
QUARTIC_I = QuarticValue(1)
QUARTIC_MINUS_ONE = QuarticValue(2)
QUARTIC_MINUS_I = QuarticValue(3)


def _pow_mod_q(alpha: GaussInt, e: int, q: int) -> Tuple[int, int]:
    """alpha^e in Z[i]/q, as a pair of residues."""
    rx, ry = 1, 0
    bx, by = alpha.re % q, alpha.im % q
    while e:
        if e & 1:
            rx, ry = (rx * bx - ry * by) % q, (rx * by + ry * bx) % q
        bx, by = (bx * bx - by * by) % q, (2 * bx * by) % q
        e >>= 1
    return rx, ry


def _residue_power(alpha: GaussInt, prime: GaussInt, divisor: int) -> Optional[int]:
    """
    Reduce alpha^((N(prime)-1)/divisor) modulo prime and return the exponent t
    with result = i^t, or None when prime divides alpha.
    """
    n = prime.norm()
    if prime.re == 0 or prime.im == 0:
        q = abs(prime.re) + abs(prime.im)
        if alpha.re % q == 0 and alpha.im % q == 0:
            return None
        value = _pow_mod_q(alpha, (n - 1) // divisor, q)
        units = {(1, 0): 0, (0, 1): 1, (q - 1, 0): 2, (0, q - 1): 3}
        return units[value]
    root = (-prime.re * pow(prime.im, -1, n)) % n
    image = (alpha.re + alpha.im * root) % n
    if image == 0:
        return None
    value = pow(image, (n - 1) // divisor, n)
    units = {1: 0, root: 1, n - 1: 2, n - root: 3}
    return units[value]


def _as_gauss(lam: Union[PrimaryPrime, GaussInt]) -> GaussInt:
    return lam.value if isinstance(lam, PrimaryPrime) else lam


def quartic_symbol(alpha: GaussInt, lam: Union[PrimaryPrime, GaussInt]) -> QuarticValue:
    """(alpha/lam)_4 for a prime lam of odd norm."""
    prime = _as_gauss(lam)
    if prime.norm() % 2 == 0:
        raise EvenNorm(f"{prime} has even norm")
    if not is_gaussian_prime(prime):
        raise NotPrime(f"{prime} is not a Gaussian prime")
    return QuarticValue(_residue_power(alpha, prime, 4))


def quartic_symbol_composite(alpha: GaussInt, theta: GaussInt) -> QuarticValue:
    """Multiplicative extension over the primary factorisation of theta."""
    result = QUARTIC_ONE
    for prime in factor_primary(theta).primes():
        result = result * QuarticValue(_residue_power(alpha, prime.value, 4))
    return result


def quartic_symbol_of_two(theta: GaussInt) -> QuarticValue:
    """(2/theta)_4 = i^(-b) for primary theta = a + 2bi."""
    if not is_primary(theta):
        raise NotPrimary(f"{theta} is not primary")
    return QuarticValue.power_of_i(-(theta.im // 2))


def legendre_symbol_zi(alpha: GaussInt, theta: GaussInt) -> int:
    """The general Legendre symbol (alpha/theta) over Z[i]."""
    result = 1
    for prime in factor_primary(theta).primes():
        t = _residue_power(alpha, prime.value, 2)
        if t is None:
            return 0
        if t == 2:
            result = -result
    return result


def jacobi(a: int, n: int) -> int:
    if n <= 0 or n % 2 == 0:
        raise InputError(f"Jacobi symbol needs an odd positive modulus, got {n}")
    return int(jacobi_symbol(a, n))


def additive_two(a: int) -> int:
    """[2/a]: 1 when a = 3, 5 mod 8 and 0 when a = 1, 7 mod 8."""
    if a % 2 == 0:
        raise InputError(f"[2/a] needs odd a, got {a}")
    return 1 if a % 8 in (3, 5) else 0


def additive(a: int, d: int) -> int:
    """[a/d]: 1 when the Jacobi symbol (a/d) is -1, 0 when it is 1."""
    j = jacobi(a, d)
    if j == 0:
        raise NotCoprime(f"gcd({a}, {d}) > 1")
    return 1 if j == -1 else 0


def _quartic_rational(q: int, p: int) -> int:
    residue = q % p
    if residue == 0 or pow(residue, (p - 1) // 2, p) != 1:
        raise NotQuarticApplicable(f"({q}/{p}) is not 1")
    return 1 if pow(residue, (p - 1) // 4, p) == 1 else -1


def quartic_rational(q: int, p: int) -> int:
    """(q/p)_4 for a prime p = 1 mod 4 with (q/p) = 1."""
    if p % 4 != 1 or not isprime(p):
        raise NotPrime(f"{p} is not a prime congruent to 1 mod 4")
    return _quartic_rational(q, p)


def quartic_rational_composite(
    q: int, d: int, primes: Optional[Iterable[int]] = None
) -> int:
    """
    (q/d)_4 as the product of (q/p)_4^(v_p(d)).

    Args:
        q: Numerator.
        d: Positive integer whose prime factors are all 1 mod 4.
        primes: Distinct prime factors of a squarefree d when already known.
    """
    if d < 1:
        raise InputError(f"(q/d)_4 needs positive d, got {d}")
    if primes is None:
        factors = factorint(d).items()
    else:
        factors = ((p, 1) for p in primes)
    result = 1
    for p, exponent in factors:
        if p % 4 != 1:
            raise NotQuarticApplicable(f"{d} has the prime factor {p}, not 1 mod 4")
        if exponent % 2:
            result *= _quartic_rational(q, p)
        else:
            _quartic_rational(q, p)
    return result
