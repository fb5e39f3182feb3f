"""
Residue-class counts behind the Gaussian bucket densities.

For epsilon = lambda_1 ... lambda_{k-1} (primes of P, ascending norms) the
admissible classes are the primary invertible classes a mod 16*epsilon
whose norm is alpha_k mod 16, whose quadratic character at each lambda_j
matches column k of B, and whose quartic symbol (2/a)_4 times (a/theta_1)
takes the value forced by the other primes. The classes are enumerated
through the CRT decomposition Z[i]/16 x prod Z[i]/lambda_j, with
Z[i]/lambda_j identified with F_p by i -> the root of -1 that lambda_j kills.
"""

from __future__ import annotations

from functools import reduce
from itertools import product
from math import prod
from operator import mul
from typing import List, Optional, Sequence, Tuple

from .config import get_config
from .exceptions import BadAlpha, BadMatrix, InputError, TooLarge
from .f2_matrix import SymMatF2, anchored_solution, b_alpha, in_B
from .gaussian import GaussInt, PrimaryPrime
from .residue_symbols import (
    QuarticValue,
    additive,
    legendre_symbol_zi,
    quartic_symbol_composite,
)


def _primary_classes_mod_16() -> List[Tuple[int, int]]:
    """Invertible classes mod 16 that are 1 mod 2+2i, as (re, im) pairs."""
    classes = []
    for re, im in product(range(16), repeat=2):
        if (re * re + im * im) % 2 == 0:
            continue
        if im % 2 == 0 and (re + im) % 4 == 1:
            classes.append((re, im))
    return classes


def _validate(
    epsilon_primes: Sequence[PrimaryPrime], alpha: Sequence[int], B: SymMatF2
) -> None:
    k = len(epsilon_primes) + 1
    if len(alpha) != k:
        raise BadAlpha(f"alpha must have {k} entries, got {tuple(alpha)}")
    if reduce(mul, alpha, 1) % 8 != 1 or any(a % 4 != 1 for a in alpha):
        raise BadAlpha(f"{tuple(alpha)} is not an admissible residue vector")
    if B.k != k or not in_B(B):
        raise BadMatrix(f"{B} is not a rank k-1 matrix with zero row sums of size {k}")
    norms = [lam.norm for lam in epsilon_primes]
    if not all(lam.in_P for lam in epsilon_primes):
        raise InputError("epsilon must be a product of primes of P")
    if any(a >= b for a, b in zip(norms, norms[1:])):
        raise InputError(f"epsilon primes must have strictly increasing norms, got {norms}")
    for j, (norm, a) in enumerate(zip(norms, alpha)):
        if norm % 16 != a:
            raise BadAlpha(f"N(lambda_{j + 1}) = {norm} is not {a} mod 16")
    for l in range(len(norms)):
        for j in range(l + 1, len(norms)):
            if additive(norms[l], norms[j]) != B.entry(l, j):
                raise BadMatrix(f"B[{l}][{j}] disagrees with ({norms[l]}/{norms[j]})")


def expected_admissible_classes(epsilon_primes: Sequence[PrimaryPrime]) -> int:
    """phi(16 epsilon) / 2^(k+4) with phi(16 epsilon) = 128 prod(N lambda_j - 1)."""
    k = len(epsilon_primes) + 1
    phi = 128 * prod(lam.norm - 1 for lam in epsilon_primes)
    return phi // 2 ** (k + 4)


def count_admissible_classes(
    epsilon_primes: Sequence[PrimaryPrime] = (),
    alpha: Sequence[int] = (9,),
    B: SymMatF2 = SymMatF2.zeros(1),
    limit: Optional[int] = None,
) -> int:
    """
    Count the admissible classes mod 16*epsilon by full enumeration.

    Args:
        epsilon_primes: The primes lambda_1..lambda_{k-1} of epsilon, empty for k = 1.
        alpha: Residues mod 16 of all k norms; alpha[-1] is the target for a.
        B: A matrix of B_k consistent with epsilon.
        limit: Largest N(16 epsilon) that may be enumerated; defaults to the
            class_enumeration_limit setting.

    Returns:
        The number of classes; equals expected_admissible_classes(epsilon_primes).
    """
    _validate(epsilon_primes, alpha, B)
    if limit is None:
        limit = get_config().class_enumeration_limit
    modulus_norm = 256 * prod(lam.norm for lam in epsilon_primes)
    if modulus_norm > limit:
        raise TooLarge(f"N(16 epsilon) = {modulus_norm} exceeds {limit}")

    k = len(epsilon_primes) + 1
    z = anchored_solution(B, b_alpha(alpha))
    if z[k - 1]:
        z = z + type(z).ones(k)
    theta1 = reduce(mul, (lam.value for j, lam in enumerate(epsilon_primes) if z[j]), GaussInt(1))
    rest = reduce(
        mul, (lam.value for j, lam in enumerate(epsilon_primes) if not z[j]), GaussInt(1)
    )
    epsilon = theta1 * rest

    product_alpha = reduce(mul, alpha, 1)
    product_alpha_z = reduce(mul, (a for j, a in enumerate(alpha) if z[j]), 1)
    sign_exponent = (product_alpha - 1) // 8 + (product_alpha_z - 5) // 4
    target = (
        quartic_symbol_composite(GaussInt(2), epsilon).conjugate()
        * QuarticValue.from_sign(legendre_symbol_zi(rest, theta1))
        * QuarticValue.from_sign(-1 if sign_exponent % 2 else 1)
    )

    primes = [lam.norm for lam in epsilon_primes]
    wanted_characters = [B.entry(j, k - 1) for j in range(k - 1)]
    count = 0
    for re, im in _primary_classes_mod_16():
        if (re * re + im * im) % 16 != alpha[-1]:
            continue
        two_over_a = QuarticValue.power_of_i(-(im // 2))
        for components in product(*(range(1, p) for p in primes)):
            characters = [
                0 if pow(c, (p - 1) // 2, p) == 1 else 1 for c, p in zip(components, primes)
            ]
            if characters != wanted_characters:
                continue
            theta1_character = sum(ch for j, ch in enumerate(characters) if z[j]) % 2
            value = two_over_a * QuarticValue.from_sign(-1 if theta1_character else 1)
            if value == target:
                count += 1
    return count
