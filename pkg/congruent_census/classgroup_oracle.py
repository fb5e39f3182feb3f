"""
Class groups of negative discriminants from reduced binary quadratic forms.

The oracle is independent of the genus-theory code: it lists the reduced
primitive forms of discriminant D, composes them with Dirichlet's method,
and reads the 2-Sylow structure off the squaring map. oracle_sweep compares
its 4- and 8-ranks with the Redei matrix and quartic-symbol predictions.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from math import gcd, isqrt
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import structlog
from sympy import factorint

try:
    from sympy.core.intfunc import igcdex
except ImportError:  # sympy < 1.13
    from sympy.core.numbers import igcdex

from .exceptions import BadDiscriminant, DiscMismatch, InternalInconsistency, TooLarge
from .genus_theory import FactoredSquarefree, h8_jung_yue, redei
from .models import ClassGroup2Part, OracleMismatch
from .monitoring import metrics, trace_function
from .sieve import factor_with_table, smallest_prime_factor

logger = structlog.get_logger(__name__)

MAX_ABS_DISCRIMINANT = 10**9

# Cells of the (a, b) grid scanned per numpy block.
_GRID_CELLS = 1 << 22


@dataclass(frozen=True, slots=True)
class QuadForm:
    """The form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def is_reduced(self) -> bool:
        if not abs(self.b) <= self.a <= self.c:
            return False
        if (abs(self.b) == self.a or self.a == self.c) and self.b < 0:
            return False
        return True

    def is_ambiguous(self) -> bool:
        """Reduced forms of order at most 2."""
        return self.b == 0 or self.a == self.b or self.a == self.c

    def __str__(self) -> str:
        return f"({self.a},{self.b},{self.c})"


def _check_discriminant(D: int) -> None:
    if D >= 0 or D % 4 not in (0, 1):
        raise BadDiscriminant(f"{D} is not a negative discriminant")
    if -D > MAX_ABS_DISCRIMINANT:
        raise TooLarge(f"|D| = {-D} exceeds {MAX_ABS_DISCRIMINANT}")


def principal_form(D: int) -> QuadForm:
    _check_discriminant(D)
    if D % 4 == 0:
        return QuadForm(1, 0, -D // 4)
    return QuadForm(1, 1, (1 - D) // 4)


def reduce(f: QuadForm) -> QuadForm:
    """The reduced form equivalent to the positive definite form f."""
    D = f.disc
    a, b, c = f.a, f.b, f.c
    while True:
        if a > c:
            a, b, c = c, -b, a
            continue
        if abs(b) > a:
            r = b % (2 * a)
            if r > a:
                r -= 2 * a
            b = r
            c = (b * b - D) // (4 * a)
            continue
        if (abs(b) == a or a == c) and b < 0:
            b = -b
            continue
        return QuadForm(a, b, c)


def inverse(f: QuadForm) -> QuadForm:
    return reduce(QuadForm(f.a, -f.b, f.c))


def compose(f: QuadForm, g: QuadForm) -> QuadForm:
    """Dirichlet composition of two primitive forms, reduced."""
    D = f.disc
    if g.disc != D:
        raise DiscMismatch(f"{f} has discriminant {D}, {g} has {g.disc}")
    if f.a == 1:
        return reduce(g)
    if g.a == 1:
        return reduce(f)
    a1, b1 = f.a, f.b
    a2, b2 = g.a, g.b
    s = (b1 + b2) // 2
    u1, v1, d1 = igcdex(a1, a2)
    u2, v2, d = igcdex(d1, s)
    u1, v1, u2, v2, d1, d = (int(t) for t in (u1, v1, u2, v2, d1, d))
    a3 = (a1 * a2) // (d * d)
    b3 = (u2 * u1 * a1 * b2 + u2 * v1 * a2 * b1 + v2 * (b1 * b2 + D) // 2) // d
    b3 %= 2 * a3
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce(QuadForm(a3, b3, c3))


def power(f: QuadForm, e: int) -> QuadForm:
    """f^e by binary exponentiation; negative e uses the inverse."""
    if e < 0:
        return power(inverse(f), -e)
    result = principal_form(f.disc)
    base = f
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def reduced_forms(D: int) -> List[QuadForm]:
    """
    All reduced primitive forms of discriminant D < 0.

    The (a, b) grid with 1 <= a <= sqrt(|D|/3) and -a < b <= a is scanned in
    numpy row blocks; the result is sorted by (a, |b|, b < 0).
    """
    _check_discriminant(D)
    a_max = isqrt(-D // 3)
    b = np.arange(-a_max, a_max + 1, dtype=np.int64)
    numerators = b * b - D
    block = max(1, _GRID_CELLS // b.size)
    forms: List[QuadForm] = []
    for start in range(1, a_max + 1, block):
        a = np.arange(start, min(start + block, a_max + 1), dtype=np.int64)[:, None]
        mask = (
            (b > -a)
            & (b <= a)
            & ((b - D) % 2 == 0)
            & (numerators % (4 * a) == 0)
        )
        rows, cols = np.nonzero(mask)
        av = a[rows, 0]
        bv = b[cols]
        cv = numerators[cols] // (4 * av)
        keep = (cv >= av) & ~((cv == av) & (bv < 0)) & (np.gcd(np.gcd(av, bv), cv) == 1)
        forms.extend(
            QuadForm(int(x), int(y), int(z))
            for x, y, z in zip(av[keep], bv[keep], cv[keep])
        )
    forms.sort(key=lambda f: (f.a, abs(f.b), f.b < 0))
    return forms


def _v2(h: int) -> int:
    return (h & -h).bit_length() - 1


def group_2part(D: int, forms: Optional[Sequence[QuadForm]] = None) -> ClassGroup2Part:
    """
    2-Sylow structure from the squaring map on the class group.

    forms defaults to reduced_forms(D); pass it when the list is already built.

    Ranks are obtained twice, once as dim(2^(j-1)A intersect A[2]) and once
    from the orders of the 2^j-torsion subgroups, and the two must agree.
    """
    if forms is None:
        forms = reduced_forms(D)
    h = len(forms)
    if h == 0:
        raise BadDiscriminant(f"no reduced forms of discriminant {D}")
    index: Dict[QuadForm, int] = {f: i for i, f in enumerate(forms)}
    identity = index[principal_form(D)]
    square = np.array([index[compose(f, f)] for f in forms], dtype=np.int64)

    e = _v2(h)
    torsion_orders = [1]
    images = [np.arange(h, dtype=np.int64)]
    iterate = np.arange(h, dtype=np.int64)
    for _ in range(max(e, 1) + 1):
        iterate = square[iterate]
        torsion_orders.append(int(np.count_nonzero(iterate == identity)))
        images.append(np.unique(square[images[-1]]))

    def log2_exact(value: int) -> int:
        if value & (value - 1):
            raise InternalInconsistency(f"subgroup of order {value} in the 2-part of h({D})")
        return value.bit_length() - 1

    if torsion_orders[max(e, 1) + 1] != 2**e:
        raise InternalInconsistency(
            f"2-Sylow of discriminant {D} has order {torsion_orders[-1]}, expected {2**e}"
        )

    # A[2^j] has order 2^(sum min(j, e_i)), so consecutive ratios are the ranks.
    ranks_by_torsion = [
        log2_exact(torsion_orders[j]) - log2_exact(torsion_orders[j - 1])
        for j in range(1, max(e, 1) + 2)
    ]
    ranks_by_image = [
        log2_exact(int(np.count_nonzero(square[images[j - 1]] == identity)))
        for j in range(1, max(e, 1) + 2)
    ]
    if ranks_by_torsion != ranks_by_image:
        raise InternalInconsistency(
            f"2^j-ranks disagree for {D}: {ranks_by_torsion} vs {ranks_by_image}"
        )

    divisors: List[int] = []
    for j, r in enumerate(ranks_by_torsion, start=1):
        following = ranks_by_torsion[j] if j < len(ranks_by_torsion) else 0
        divisors.extend([2**j] * (r - following))
    divisors.sort()

    ambiguous = sum(1 for f in forms if f.is_ambiguous())
    if ambiguous != torsion_orders[1]:
        raise InternalInconsistency(
            f"{ambiguous} ambiguous forms but #A[2] = {torsion_orders[1]} for {D}"
        )

    def rank(j: int) -> int:
        return ranks_by_torsion[j - 1] if j <= len(ranks_by_torsion) else 0

    return ClassGroup2Part(
        disc=D,
        h=h,
        divisors=divisors,
        r2=rank(1),
        r4=rank(2),
        r8=rank(3),
        ambiguous_forms=ambiguous,
    )


def class_group_for_n(n: int) -> ClassGroup2Part:
    """The 2-part of Cl(-4n) for squarefree n = 1, 2 mod 4."""
    if n < 1 or n % 4 not in (1, 2) or any(e > 1 for e in factorint(n).values()):
        raise BadDiscriminant(f"-4*{n} is not a fundamental discriminant")
    D = -4 * n
    return group_2part(D)


def _q_members(lo: int, hi: int, kmax: int) -> List[FactoredSquarefree]:
    """Members of Q_k with lo <= n <= hi and k <= kmax."""
    spf = smallest_prime_factor(hi)
    members = []
    start = lo + ((1 - lo) % 8)
    for n in range(start, hi + 1, 8):
        if n < 2:
            continue
        primes = factor_with_table(n, spf)
        if len(primes) > kmax or len(set(primes)) != len(primes):
            continue
        if all(p % 4 == 1 for p in primes):
            members.append(FactoredSquarefree.from_primes(primes))
    return members


def compare_with_oracle(n: FactoredSquarefree) -> Tuple[Optional[OracleMismatch], ClassGroup2Part]:
    r = redei(n)
    group = class_group_for_n(n.n)
    predicted: Dict[str, Optional[int]] = {"r2": n.k, "h4": r.h4, "h8": None}
    agree = group.r2 == n.k and r.h4 == group.r4
    if r.h4 == 1:
        predicted["h8"] = h8_jung_yue(n, r).h8
        agree = agree and predicted["h8"] == group.r8
    if agree:
        return None, group
    mismatch = OracleMismatch(
        n=n.n, k=n.k, predicted=predicted, oracle={"r2": group.r2, "r4": group.r4, "r8": group.r8}
    )
    return mismatch, group


def _sweep_range(lo: int, hi: int, kmax: int) -> Tuple[int, List[OracleMismatch], float]:
    started = time.perf_counter()
    mismatches = []
    members = _q_members(lo, hi, kmax)
    for n in members:
        mismatch, _ = compare_with_oracle(n)
        if mismatch is not None:
            mismatches.append(mismatch)
    return len(members), mismatches, time.perf_counter() - started


@trace_function("oracle_sweep")
def oracle_sweep(x0: int, kmax: int = 3, jobs: int = 1) -> List[OracleMismatch]:
    """
    Compare h4 and h8 predictions with the class group for every n in Q_k(x0).

    Returns:
        The mismatches, ordered by n; empty when every prediction agrees.
    """
    if x0 > MAX_ABS_DISCRIMINANT // 4:
        raise TooLarge(f"x0 = {x0} gives discriminants beyond {MAX_ABS_DISCRIMINANT}")
    jobs = max(1, jobs)
    step = -(-x0 // jobs)
    ranges = [(lo, min(lo + step - 1, x0)) for lo in range(1, x0 + 1, step)]
    if jobs == 1:
        results = [_sweep_range(lo, hi, kmax) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            futures = [executor.submit(_sweep_range, lo, hi, kmax) for lo, hi in ranges]
            results = [future.result() for future in futures]

    checked = sum(count for count, _, _ in results)
    mismatches = sorted((m for _, found, _ in results for m in found), key=lambda m: m.n)
    metrics.record_oracle(checked, len(mismatches))
    logger.info(
        "oracle sweep finished",
        x0=x0,
        kmax=kmax,
        discriminants=checked,
        mismatches=len(mismatches),
    )
    return mismatches
