"""
Genus-theory criteria for squarefree n with prime factors 1 mod 4.

Implements the Redei matrix R = (A | b) of n, the 4-rank h4 = k - rank R,
the quartic-symbol criteria for the 8-rank when h4 = 1, the P_k
classification under both parity conventions, and the membership
predicates of the counting families (rational, Gaussian, rank k-2, and the
split construction over primes 1 mod 8).

Primes are always taken in ascending order and matrix indices follow it.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from math import prod
from operator import mul
from typing import List, Optional, Sequence, Tuple

from sympy import factorint

from .exceptions import (
    BadAlpha,
    BadMatrix,
    H8Undefined,
    InputError,
    InternalInconsistency,
    NotInQk,
    NotInQtilde,
)
from .f2_matrix import (
    ALPHA_RESIDUES,
    SymMatF2,
    VecF2,
    anchored_solution,
    augment,
    b_alpha,
    in_B,
    in_Bprime,
    rank,
    solve,
)
from .gaussian import GaussInt, PrimaryPrime, prime_in_P_above
from .models import Convention, H8Case, H8Verdict, PkVerdict
from .residue_symbols import (
    QuarticValue,
    additive,
    additive_two,
    legendre_symbol_zi,
    quartic_rational_composite,
    quartic_symbol_composite,
)


@dataclass(frozen=True, slots=True)
class FactoredSquarefree:
    """A squarefree n with its ascending prime factors and congruence flags."""

    n: int
    primes: Tuple[int, ...]
    all_1mod4: bool
    all_1mod8: bool
    n_1mod8: bool

    @classmethod
    def from_primes(cls, primes: Sequence[int]) -> FactoredSquarefree:
        ps = tuple(primes)
        if any(a >= b for a, b in zip(ps, ps[1:])):
            raise InputError(f"primes must be strictly ascending, got {ps}")
        n = prod(ps)
        return cls(
            n=n,
            primes=ps,
            all_1mod4=all(p % 4 == 1 for p in ps),
            all_1mod8=all(p % 8 == 1 for p in ps),
            n_1mod8=n % 8 == 1,
        )

    @classmethod
    def from_int(cls, n: int) -> FactoredSquarefree:
        if n < 2:
            raise InputError(f"n must be at least 2, got {n}")
        factors = factorint(n)
        if any(e > 1 for e in factors.values()):
            raise InputError(f"{n} is not squarefree")
        return cls.from_primes(sorted(factors))

    @property
    def k(self) -> int:
        return len(self.primes)

    @property
    def in_Qk(self) -> bool:
        return self.n_1mod8 and self.all_1mod4

    @property
    def in_Qtilde(self) -> bool:
        return self.all_1mod8

    def divisor(self, x: VecF2) -> int:
        """prod p_i^(x_i) over the first k coordinates of x."""
        return prod(p for i, p in enumerate(self.primes) if x[i])

    def split(self, d: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """Primes of d and of n/d."""
        inside = tuple(p for p in self.primes if d % p == 0)
        outside = tuple(p for p in self.primes if d % p)
        return inside, outside


@dataclass(frozen=True)
class RedeiData:
    A: SymMatF2
    b: VecF2
    rank_R: int
    rank_A: int
    h4: int


def redei_matrix_A(primes: Sequence[int]) -> SymMatF2:
    """a_ij = [p_j/p_i] off the diagonal, a_ii = sum of the rest of row i."""
    k = len(primes)
    rows = [0] * k
    for i in range(k):
        for j in range(i + 1, k):
            if additive(primes[j], primes[i]):
                rows[i] |= 1 << j
                rows[j] |= 1 << i
    for i in range(k):
        if bin(rows[i]).count("1") % 2:
            rows[i] |= 1 << i
    return SymMatF2(k, tuple(rows))


def redei(n: FactoredSquarefree) -> RedeiData:
    if not n.in_Qk:
        raise NotInQk(f"{n.n} is not in Q_k")
    A = redei_matrix_A(n.primes)
    b = VecF2.from_list([additive_two(p) for p in n.primes])
    rank_A = rank(A)
    rank_R = rank(augment(A, b))
    h4 = n.k - rank_R
    if h4 < 0:
        raise InternalInconsistency(f"negative 4-rank for {n.n}")
    return RedeiData(A=A, b=b, rank_R=rank_R, rank_A=rank_A, h4=h4)


def admissible_kernel_vectors(r: RedeiData) -> List[VecF2]:
    """Every X with RX = 0 other than 0 and X0 = (1,...,1,0), ascending."""
    k = r.A.k
    R = augment(r.A, r.b)
    x0 = VecF2(k + 1, (1 << k) - 1)
    vectors = solve(R, VecF2.zeros(k)).solutions()
    admissible = [v for v in vectors if v.bits not in (0, x0.bits)]
    return sorted(admissible, key=lambda v: v.to_list())


def _anchored(vectors: Sequence[VecF2]) -> VecF2:
    """Lexicographically smallest vector with first coordinate 1."""
    anchored = sorted((v for v in vectors if v[0] == 1), key=lambda v: v.to_list())
    if not anchored:
        raise InternalInconsistency("no kernel vector with first coordinate 1")
    return anchored[0]


def _sign(exponent: int) -> int:
    return -1 if exponent % 2 else 1


def h8_jung_yue(n: FactoredSquarefree, r: RedeiData) -> H8Verdict:
    """
    The 8-rank of Cl(-4n) when the 4-rank is one.

    Args:
        n: A member of Q_k.
        r: Its Redei data.

    Returns:
        The verdict with the divisor d that decided it.
    """
    if r.h4 != 1:
        raise H8Undefined(f"h4({n.n}) = {r.h4}, the 8-rank criterion needs h4 = 1")
    k = n.k
    if r.rank_A == k - 1:
        x = _anchored(solve(r.A, r.b).solutions())
        d = n.divisor(x)
        d_prime = n.n // d
        inside, outside = n.split(d)
        lhs = quartic_rational_composite(
            2 * d, d_prime, outside
        ) * quartic_rational_composite(2 * d_prime, d, inside)
        h8 = 1 if lhs == _sign((n.n - 1) // 8) else 0
        case = H8Case.RANK_A_K_MINUS_1
    elif r.rank_A == k - 2:
        ones = VecF2.ones(k)
        kernel = [
            v for v in solve(r.A, VecF2.zeros(k)).solutions() if v.bits not in (0, ones.bits)
        ]
        x = _anchored(kernel)
        d = n.divisor(x)
        if d % 8 != 5:
            raise InternalInconsistency(
                f"rank A = k-2 for {n.n} but the kernel divisor {d} is not 5 mod 8"
            )
        d_prime = n.n // d
        inside, outside = n.split(d)
        lhs = quartic_rational_composite(d, d_prime, outside) * quartic_rational_composite(
            d_prime, d, inside
        )
        h8 = 1 if lhs == -1 else 0
        case = H8Case.RANK_A_K_MINUS_2
    else:
        raise InternalInconsistency(f"h4 = 1 but rank A = {r.rank_A} for k = {k}")
    return H8Verdict(h8=h8, case_tag=case, d=d, d_prime=n.n // d)


def kernel_parity_invariant(n: FactoredSquarefree, r: RedeiData) -> bool:
    """True when (d-1)/4 mod 2 agrees across all admissible kernel vectors."""
    parities = {((n.divisor(x) - 1) // 4) % 2 for x in admissible_kernel_vectors(r)}
    return len(parities) <= 1


def pk_verdict(
    n: FactoredSquarefree,
    convention: Convention = Convention.D1,
    r: Optional[RedeiData] = None,
) -> PkVerdict:
    """Classify n under both conventions and report the requested one."""
    if r is None:
        r = redei(n)
    if r.h4 != 1:
        return PkVerdict(
            n=n.n,
            k=n.k,
            h4=r.h4,
            convention=convention,
            in_Pk=False,
            verdict_d5=False,
            verdict_d1=False,
        )
    h8 = h8_jung_yue(n, r).h8
    candidates = admissible_kernel_vectors(r)
    d = n.divisor(_anchored(candidates))
    verdict_d5 = h8 == ((d - 5) // 4) % 2
    verdict_d1 = h8 == ((d - 1) // 4) % 2
    return PkVerdict(
        n=n.n,
        k=n.k,
        h4=r.h4,
        h8=h8,
        convention=convention,
        in_Pk=verdict_d1 if convention == Convention.D1 else verdict_d5,
        d=d,
        d_candidates=sorted(n.divisor(x) for x in candidates),
        verdict_d5=verdict_d5,
        verdict_d1=verdict_d1,
    )


def classify_Pk(n: FactoredSquarefree, convention: Convention = Convention.D1) -> bool:
    return pk_verdict(n, convention).in_Pk


def _check_alpha(alpha: Sequence[int], k: int, residues: Sequence[int] = ALPHA_RESIDUES) -> None:
    if len(alpha) != k:
        raise BadAlpha(f"alpha has length {len(alpha)}, expected {k}")
    if any(a not in residues for a in alpha):
        raise BadAlpha(f"alpha entries must lie in {tuple(residues)}, got {tuple(alpha)}")
    if reduce(mul, alpha, 1) % 8 != 1:
        raise BadAlpha(f"product of {tuple(alpha)} is not 1 mod 8")


def _matches_residues_and_matrix(
    values: Sequence[int], alpha: Sequence[int], B: SymMatF2
) -> bool:
    if any(v % 16 != a for v, a in zip(values, alpha)):
        return False
    k = len(values)
    return all(
        additive(values[l], values[j]) == B.entry(l, j)
        for l in range(k)
        for j in range(l + 1, k)
    )


def in_Ck_alpha_B(n: FactoredSquarefree, alpha: Sequence[int], B: SymMatF2) -> bool:
    """Membership in the rational family C_k(x, alpha, B)."""
    _check_alpha(alpha, n.k)
    if B.k != n.k or not in_B(B):
        raise BadMatrix(f"{B} is not a rank k-1 matrix with zero row sums of size {n.k}")
    if not _matches_residues_and_matrix(n.primes, alpha, B):
        return False
    z = anchored_solution(B, b_alpha(alpha))
    d = n.divisor(z)
    d_prime = n.n // d
    inside, outside = n.split(d)
    lhs = quartic_rational_composite(2 * d, d_prime, outside) * quartic_rational_composite(
        2 * d_prime, d, inside
    )
    return lhs == _sign((n.n - 1) // 8 + (d - 5) // 4)


def eta(n: FactoredSquarefree) -> List[PrimaryPrime]:
    """The P-representative of every prime of n, in the order of n's primes."""
    if not n.all_1mod4:
        raise InputError(f"{n.n} has a prime factor not congruent to 1 mod 4")
    return [prime_in_P_above(p) for p in n.primes]


def in_Ckprime_gaussian(
    eta_primes: Sequence[PrimaryPrime], alpha: Sequence[int], B: SymMatF2
) -> bool:
    """Membership in the Gaussian family C'_k(x, alpha, B)."""
    k = len(eta_primes)
    _check_alpha(alpha, k)
    if B.k != k or not in_B(B):
        raise BadMatrix(f"{B} is not a rank k-1 matrix with zero row sums of size {k}")
    if not all(lam.in_P for lam in eta_primes):
        return False
    norms = [lam.norm for lam in eta_primes]
    if any(a >= b for a, b in zip(norms, norms[1:])):
        return False
    if not _matches_residues_and_matrix(norms, alpha, B):
        return False
    z = anchored_solution(B, b_alpha(alpha))
    theta1 = reduce(mul, (lam.value for i, lam in enumerate(eta_primes) if z[i]), GaussInt(1))
    theta2 = reduce(
        mul, (lam.value for i, lam in enumerate(eta_primes) if not z[i]), GaussInt(1)
    )
    product_alpha = reduce(mul, alpha, 1)
    product_alpha_z = reduce(mul, (a for i, a in enumerate(alpha) if z[i]), 1)
    lhs = QuarticValue.from_sign(legendre_symbol_zi(theta2, theta1)) * quartic_symbol_composite(
        GaussInt(2), theta1 * theta2
    )
    rhs = QuarticValue.from_sign(
        _sign((product_alpha - 1) // 8 + (product_alpha_z - 5) // 4)
    )
    return lhs == rhs


def in_Ck_alpha_B_prime(n: FactoredSquarefree, alpha: Sequence[int], B: SymMatF2) -> bool:
    """Membership in C_k(x, alpha, B)' for B of rank k-2."""
    _check_alpha(alpha, n.k)
    if B.k != n.k or not in_Bprime(B):
        raise BadMatrix(f"{B} is not a rank k-2 matrix with zero row sums of size {n.k}")
    if not _matches_residues_and_matrix(n.primes, alpha, B):
        return False
    ones = VecF2.ones(n.k)
    kernel = [v for v in solve(B, VecF2.zeros(n.k)).solutions() if v.bits not in (0, ones.bits)]
    d = n.divisor(_anchored(kernel))
    if d % 8 != 5:
        return False
    d_prime = n.n // d
    inside, outside = n.split(d)
    lhs = quartic_rational_composite(d, d_prime, outside) * quartic_rational_composite(
        d_prime, d, inside
    )
    return lhs == -1


def bucket_key(
    n: FactoredSquarefree, r: RedeiData
) -> Optional[Tuple[str, Tuple[int, ...], SymMatF2]]:
    """The (family, alpha, B) bucket whose membership test applies to n."""
    k = n.k
    alpha = tuple(p % 16 for p in n.primes)
    if r.rank_A == k - 1:
        return "B", alpha, r.A
    if k >= 2 and r.rank_A == k - 2 and r.rank_R == k - 1:
        return "B'", alpha, r.A
    return None


def bucket_label(family: str, alpha: Sequence[int], B: SymMatF2) -> str:
    return f"{family}|alpha={'.'.join(str(a) for a in alpha)}|A={B.compact()}"


def in_bucket(n: FactoredSquarefree, r: RedeiData) -> Optional[str]:
    """Label of the bucket containing n, or None when n lies in none."""
    key = bucket_key(n, r)
    if key is None:
        return None
    family, alpha, B = key
    member = (
        in_Ck_alpha_B(n, alpha, B) if family == "B" else in_Ck_alpha_B_prime(n, alpha, B)
    )
    return bucket_label(family, alpha, B) if member else None


def _cross_symbols_trivial(inside: Sequence[int], outside: Sequence[int]) -> bool:
    return all(additive(p, q) == 0 for p in inside for q in outside)


def in_tilde_construction(n: FactoredSquarefree, d: int) -> bool:
    """
    The split construction for n = d * d' with all primes 1 mod 8.

    Conditions: every cross Legendre symbol (p/p') is 1; h4(d) = h4(d') = 1;
    (2/d)_4 = (-1)^((d-9)/8), likewise for d', and (d/d')_4 = (d'/d)_4 = 1.
    """
    if not n.in_Qtilde:
        raise NotInQtilde(f"{n.n} has a prime factor not congruent to 1 mod 8")
    if d <= 1 or d >= n.n or n.n % d:
        raise InputError(f"{d} is not a proper divisor of {n.n}")
    inside, outside = n.split(d)
    d_prime = n.n // d
    if not _cross_symbols_trivial(inside, outside):
        return False
    for part in (inside, outside):
        if redei(FactoredSquarefree.from_primes(part)).h4 != 1:
            return False
    for value, primes in ((d, inside), (d_prime, outside)):
        if quartic_rational_composite(2, value, primes) != _sign((value - 9) // 8):
            return False
    return (
        quartic_rational_composite(d, d_prime, outside) == 1
        and quartic_rational_composite(d_prime, d, inside) == 1
    )


def in_tilde_by_some_split(n: FactoredSquarefree) -> bool:
    """True when at least one proper split of n satisfies the construction."""
    k = n.k
    for mask in range(1, (1 << k) - 1):
        d = prod(p for i, p in enumerate(n.primes) if (mask >> i) & 1)
        if in_tilde_construction(n, d):
            return True
    return False


def in_Ckk_sigma(
    n: FactoredSquarefree,
    alpha: Sequence[int],
    B: SymMatF2,
    Bprime: SymMatF2,
    sigma: Sequence[int],
) -> bool:
    """
    Membership in C_{k,k'}(x, alpha, B, B', sigma).

    sigma lists the 0-based positions of the primes of d among n's
    ascending primes.
    """
    total = n.k
    if len(alpha) != total or any(a not in (1, 9) for a in alpha):
        raise BadAlpha(f"alpha must have {total} entries from (1, 9), got {tuple(alpha)}")
    sigma = tuple(sigma)
    if (
        not 1 <= len(sigma) < total
        or any(a >= b for a, b in zip(sigma, sigma[1:]))
        or sigma[0] < 0
        or sigma[-1] >= total
    ):
        raise InputError(f"sigma {sigma} is not a proper ascending subsequence of 0..{total - 1}")
    if B.k != len(sigma) or not in_B(B):
        raise BadMatrix(f"{B} is not in B_{len(sigma)}")
    if Bprime.k != total - len(sigma) or not in_B(Bprime):
        raise BadMatrix(f"{Bprime} is not in B_{total - len(sigma)}")
    if not n.in_Qtilde:
        return False
    if any(p % 16 != a for p, a in zip(n.primes, alpha)):
        return False
    sigma_prime = tuple(i for i in range(total) if i not in sigma)
    inside = tuple(n.primes[i] for i in sigma)
    outside = tuple(n.primes[i] for i in sigma_prime)
    if redei_matrix_A(inside) != B or redei_matrix_A(outside) != Bprime:
        return False
    if not _cross_symbols_trivial(inside, outside):
        return False
    d, d_prime = prod(inside), prod(outside)
    delta = prod(alpha[i] for i in sigma)
    delta_prime = prod(alpha[i] for i in sigma_prime)
    if quartic_rational_composite(2, d, inside) != _sign((delta - 9) // 8):
        return False
    if quartic_rational_composite(2, d_prime, outside) != _sign((delta_prime - 9) // 8):
        return False
    return (
        quartic_rational_composite(d, d_prime, outside) == 1
        and quartic_rational_composite(d_prime, d, inside) == 1
    )
