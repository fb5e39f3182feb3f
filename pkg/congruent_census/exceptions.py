"""
Error types raised across the census package.

Input errors subclass ValueError so callers that only know the builtin
still catch them; InternalInconsistency marks a mathematical contradiction
(an oracle mismatch or a criterion that produced an impossible state).
"""


class CensusError(Exception):
    """Base class for all census errors."""


class InputError(CensusError, ValueError):
    """An argument violates an operation's precondition."""


class NotOdd(InputError):
    """A Gaussian integer has even norm where an odd one is required."""


class EvenNorm(InputError):
    """The modulus of a residue symbol lies above 2."""


class NotPrime(InputError):
    """A value expected to be prime (in Z or Z[i]) is not."""


class NotPrimary(InputError):
    """A Gaussian integer is not congruent to 1 mod 2+2i."""


class NotCoprime(InputError):
    """Arguments of an additive symbol share a factor."""


class NotQuarticApplicable(InputError):
    """The rational quartic symbol is only defined when (q/p) = 1."""


class NoSolution(InputError):
    """The right-hand side is not in the image of the matrix."""


class BadMatrix(InputError):
    """A matrix fails the rank or row-sum requirement of its family."""


class BadAlpha(InputError):
    """A residue tuple is outside {1,5,9,13} or its product is not 1 mod 8."""


class NotInQk(InputError):
    """n is not squarefree with all primes 1 mod 4 and n = 1 mod 8."""


class NotInQtilde(InputError):
    """n has a prime factor that is not 1 mod 8."""


class H8Undefined(InputError):
    """The 8-rank criterion needs a 4-rank of exactly one."""


class TooLarge(InputError):
    """An exhaustive enumeration would exceed the configured bound."""


class BadDiscriminant(InputError):
    """The discriminant is not negative or not 0, 1 mod 4."""


class DiscMismatch(InputError):
    """Two forms with different discriminants cannot be composed."""


class ResourceLimit(InputError):
    """A census table would exceed the configured memory budget."""


class InternalInconsistency(CensusError, RuntimeError):
    """Two independent computations of the same invariant disagree."""
