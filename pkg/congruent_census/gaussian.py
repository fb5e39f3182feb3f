"""
Exact arithmetic in the Gaussian integers Z[i].

Norms, units, primary normalisation, factorisation into primary primes,
and the primes of the set P (primary primes with positive imaginary part,
one above each rational prime p = 1 mod 4).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import isqrt
from typing import Iterator, List, Tuple

from sympy import factorint, isprime, primerange, sqrt_mod

from .exceptions import NotOdd, NotPrime


@dataclass(frozen=True, slots=True)
class GaussInt:
    """A Gaussian integer re + im*i with unbounded components."""

    re: int
    im: int = 0

    @classmethod
    def parse(cls, text: str) -> GaussInt:
        """Parse notation such as ``3+2i``, ``-1-2i``, ``-i``, ``2i`` or ``5``."""
        s = text.replace(" ", "")
        if not s:
            raise ValueError("empty Gaussian integer")
        if not s.endswith("i"):
            return cls(int(s), 0)
        body = s[:-1]
        cut = max(body.rfind("+"), body.rfind("-"))
        if cut <= 0:
            real, imag = "0", body
        else:
            real, imag = body[:cut], body[cut:]
        if imag in ("", "+"):
            im = 1
        elif imag == "-":
            im = -1
        else:
            im = int(imag)
        return cls(int(real), im)

    def __add__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re + other.re, self.im + other.im)

    def __sub__(self, other: GaussInt) -> GaussInt:
        return GaussInt(self.re - other.re, self.im - other.im)

    def __neg__(self) -> GaussInt:
        return GaussInt(-self.re, -self.im)

    def __mul__(self, other: GaussInt) -> GaussInt:
        return GaussInt(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    def __pow__(self, exponent: int) -> GaussInt:
        result = ONE
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __str__(self) -> str:
        if self.im == 0:
            return str(self.re)
        imag = "i" if abs(self.im) == 1 else f"{abs(self.im)}i"
        if self.re == 0:
            return imag if self.im > 0 else f"-{imag}"
        return f"{self.re}{'+' if self.im > 0 else '-'}{imag}"

    def conjugate(self) -> GaussInt:
        return GaussInt(self.re, -self.im)

    def norm(self) -> int:
        return self.re * self.re + self.im * self.im

    def times_unit(self, t: int) -> GaussInt:
        """Return i^t * self."""
        re, im = self.re, self.im
        for _ in range(t % 4):
            re, im = -im, re
        return GaussInt(re, im)

    def divides(self, other: GaussInt) -> bool:
        """True when self | other in Z[i]."""
        n = self.norm()
        if n == 0:
            return other.re == 0 and other.im == 0
        num = other * self.conjugate()
        return num.re % n == 0 and num.im % n == 0

    def exact_div(self, divisor: GaussInt) -> GaussInt:
        """Return self / divisor, which must be a Gaussian integer."""
        n = divisor.norm()
        num = self * divisor.conjugate()
        if n == 0 or num.re % n or num.im % n:
            raise ValueError(f"{divisor} does not divide {self}")
        return GaussInt(num.re // n, num.im // n)


ZERO = GaussInt(0, 0)
ONE = GaussInt(1, 0)
I = GaussInt(0, 1)
UNITS: Tuple[GaussInt, ...] = (ONE, I, GaussInt(-1, 0), GaussInt(0, -1))


@dataclass(frozen=True, slots=True)
class PrimaryPrime:
    """A primary Gaussian prime of odd norm; ``in_P`` marks im > 0."""

    value: GaussInt
    in_P: bool = False

    @classmethod
    def of(cls, g: GaussInt) -> PrimaryPrime:
        if g.norm() % 2 == 0:
            raise NotOdd(f"{g} has even norm")
        if not is_gaussian_prime(g):
            raise NotPrime(f"{g} is not a Gaussian prime")
        if not is_primary(g):
            raise NotPrime(f"{g} is prime but not primary")
        return cls(g, g.im > 0)

    @classmethod
    def member_of_P(cls, g: GaussInt) -> PrimaryPrime:
        prime = cls.of(g)
        if not prime.in_P:
            raise NotPrime(f"{g} is primary but its imaginary part is not positive")
        return prime

    @property
    def norm(self) -> int:
        return self.value.norm()

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True)
class PrimaryFactorization:
    """g = i^unit_exp * prod(prime^multiplicity)."""

    unit_exp: int
    factors: Tuple[Tuple[PrimaryPrime, int], ...]

    def reconstruct(self) -> GaussInt:
        value = UNITS[self.unit_exp % 4]
        for prime, mult in self.factors:
            value = value * prime.value**mult
        return value

    def primes(self) -> Iterator[PrimaryPrime]:
        """Every prime factor, repeated by multiplicity."""
        for prime, mult in self.factors:
            for _ in range(mult):
                yield prime


def norm(g: GaussInt) -> int:
    return g.norm()


def is_primary(g: GaussInt) -> bool:
    """True iff g = 1 mod 2+2i, i.e. im even and re + im = 1 mod 4."""
    return g.im % 2 == 0 and (g.re + g.im) % 4 == 1


def is_gaussian_prime(g: GaussInt) -> bool:
    n = g.norm()
    if n < 2:
        return False
    if isprime(n):
        return True
    r = isqrt(n)
    return r * r == n and r % 4 == 3 and isprime(r) and (g.re == 0 or g.im == 0)


def primary_associate(g: GaussInt) -> Tuple[int, GaussInt]:
    """Return (t, i^t * g) where i^t * g is the primary associate of g."""
    if g.norm() % 2 == 0:
        raise NotOdd(f"{g} has even norm {g.norm()}")
    for t in range(4):
        candidate = g.times_unit(t)
        if is_primary(candidate):
            return t, candidate
    raise AssertionError(f"no primary associate found for {g}")


def two_squares(p: int) -> Tuple[int, int]:
    """Write a prime p = 1 mod 4 as x^2 + y^2 (Cornacchia with d = 1)."""
    root = sqrt_mod(-1, p)
    a, b = p, root
    limit = isqrt(p)
    while b > limit:
        a, b = b, a % b
    y = isqrt(p - b * b)
    if b * b + y * y != p:
        raise NotPrime(f"{p} is not a sum of two squares")
    return b, y


def prime_in_P_above(p: int) -> PrimaryPrime:
    """The unique element of P with norm p."""
    if p % 4 != 1 or not isprime(p):
        raise NotPrime(f"{p} is not a rational prime congruent to 1 mod 4")
    x, y = two_squares(p)
    for candidate in (GaussInt(x, y), GaussInt(x, -y)):
        _, primary = primary_associate(candidate)
        if primary.im > 0:
            return PrimaryPrime(primary, True)
    raise AssertionError(f"no primary prime with positive imaginary part above {p}")


def primes_in_P_up_to(x: int) -> List[PrimaryPrime]:
    return [prime_in_P_above(p) for p in primerange(5, x + 1) if p % 4 == 1]


def factor_primary(g: GaussInt) -> PrimaryFactorization:
    """Factor g into primary primes times a unit, ordered by (norm, im)."""
    n = g.norm()
    if n % 2 == 0:
        raise NotOdd(f"{g} has even norm {n}")
    remaining = g
    found: List[Tuple[PrimaryPrime, int]] = []
    for p, exponent in factorint(n).items():
        if p % 4 == 3:
            inert = GaussInt(-p, 0)
            mult = exponent // 2
            for _ in range(mult):
                remaining = remaining.exact_div(inert)
            found.append((PrimaryPrime(inert, False), mult))
            continue
        upper = prime_in_P_above(p)
        lower = PrimaryPrime(primary_associate(upper.value.conjugate())[1], False)
        for prime in (upper, lower):
            mult = 0
            while prime.value.divides(remaining):
                remaining = remaining.exact_div(prime.value)
                mult += 1
            if mult:
                found.append((prime, mult))
    found.sort(key=lambda item: (item[0].norm, item[0].value.im))
    return PrimaryFactorization(UNITS.index(remaining), tuple(found))
