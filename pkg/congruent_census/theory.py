"""
Exact limiting densities the census is compared against.
"""

from fractions import Fraction
from math import comb

from .exceptions import InputError
from .f2_matrix import count_B, u


def _check_k(k: int, least: int = 1) -> None:
    if k < least:
        raise InputError(f"k must be at least {least}, got {k}")


def theoretical_limit_Pk(k: int) -> Fraction:
    """lim #P_k(x)/#Q_k(x) = (u_k + (1/2 - 2^-k) u_{k-1}) / 2."""
    _check_k(k)
    return (u(k) + (Fraction(1, 2) - Fraction(1, 2**k)) * u(k - 1)) / 2


def theoretical_density_Ck_alpha_B(k: int) -> Fraction:
    """Share of C_k(x) in one (alpha, B) bucket: 2^-(3k + C(k,2) + 1)."""
    _check_k(k)
    return Fraction(1, 2 ** (3 * k + comb(k, 2) + 1))


def theoretical_density_Qk(k: int) -> Fraction:
    _check_k(k)
    return Fraction(1, 2 ** (k + 1))


def theoretical_density_Qtilde(k: int) -> Fraction:
    _check_k(k)
    return Fraction(1, 4**k)


def theoretical_bound_tilde(k: int) -> Fraction:
    """Lower bound for the split construction inside Qtilde_k."""
    _check_k(k, 2)
    total = sum(
        (u(j) * u(k - j) * comb(k, j) / Fraction(2 ** (j * (k - j))) for j in range(1, k)),
        Fraction(0),
    )
    return Fraction(2) ** (k - 4) * total


def theoretical_bound_tilde_by_buckets(k: int) -> Fraction:
    """
    The same bound summed bucket by bucket: residue vectors from {1, 9}
    (2^(2k) as counted in the construction), matrix counts of both halves and
    the choice of split, over the Qtilde_k density.
    """
    _check_k(k, 2)
    residue_vectors = 2 ** (2 * k)
    total = sum(
        (
            Fraction(residue_vectors * count_B(j) * count_B(k - j) * comb(k, j))
            for j in range(1, k)
        ),
        Fraction(0),
    )
    return total / 2 ** (4 + 3 * k + comb(k, 2)) / theoretical_density_Qtilde(k)


def theoretical_bucket_total(k: int) -> Fraction:
    """Sum of the bucket densities over every admissible alpha and every B in B_k."""
    _check_k(k)
    admissible = Fraction(4**k, 2)
    return admissible * count_B(k) * theoretical_density_Ck_alpha_B(k)
