"""
Linear algebra over F2 and the symmetric-matrix counting formulas.

Rows are packed into Python ints (bit j of row i is entry (i, j)), so
elimination is a sequence of word-wide XORs.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from itertools import product
from math import comb
from operator import mul
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from .config import get_config
from .exceptions import BadMatrix, InputError, NoSolution, TooLarge
from .models import MatrixCountReport, RankCount
from .residue_symbols import additive_two

ALPHA_RESIDUES = (1, 5, 9, 13)


@dataclass(frozen=True, slots=True)
class VecF2:
    """A vector in F2^k; bit i holds coordinate i."""

    k: int
    bits: int

    @classmethod
    def from_list(cls, values: Sequence[int]) -> VecF2:
        bits = 0
        for i, v in enumerate(values):
            if v % 2:
                bits |= 1 << i
        return cls(len(values), bits)

    @classmethod
    def zeros(cls, k: int) -> VecF2:
        return cls(k, 0)

    @classmethod
    def ones(cls, k: int) -> VecF2:
        return cls(k, (1 << k) - 1)

    def __getitem__(self, i: int) -> int:
        return (self.bits >> i) & 1

    def __add__(self, other: VecF2) -> VecF2:
        return VecF2(self.k, self.bits ^ other.bits)

    def __iter__(self) -> Iterator[int]:
        return (self[i] for i in range(self.k))

    def to_list(self) -> List[int]:
        return list(self)

    def weight(self) -> int:
        return bin(self.bits).count("1")

    def dot(self, other: VecF2) -> int:
        return bin(self.bits & other.bits).count("1") % 2

    def __str__(self) -> str:
        return "(" + ",".join(str(v) for v in self) + ")"


@dataclass(frozen=True, slots=True)
class SymMatF2:
    """Symmetric k x k matrix over F2, one packed int per row."""

    k: int
    rows: Tuple[int, ...]

    @classmethod
    def from_rows(cls, entries: Sequence[Sequence[int]]) -> SymMatF2:
        k = len(entries)
        packed = []
        for i, row in enumerate(entries):
            if len(row) != k:
                raise BadMatrix(f"row {i} has length {len(row)}, expected {k}")
            for j in range(i):
                if row[j] % 2 != entries[j][i] % 2:
                    raise BadMatrix(f"entries ({i},{j}) and ({j},{i}) differ")
            packed.append(VecF2.from_list(row).bits)
        return cls(k, tuple(packed))

    @classmethod
    def from_upper_bits(cls, k: int, bits: int) -> SymMatF2:
        """Unpack the upper triangle (row-major, diagonal included)."""
        rows = [0] * k
        pos = 0
        for i in range(k):
            for j in range(i, k):
                if (bits >> pos) & 1:
                    rows[i] |= 1 << j
                    rows[j] |= 1 << i
                pos += 1
        return cls(k, tuple(rows))

    @classmethod
    def zeros(cls, k: int) -> SymMatF2:
        return cls(k, (0,) * k)

    @property
    def bits(self) -> int:
        """Packed upper triangle, the inverse of ``from_upper_bits``."""
        bits = 0
        pos = 0
        for i in range(self.k):
            for j in range(i, self.k):
                if (self.rows[i] >> j) & 1:
                    bits |= 1 << pos
                pos += 1
        return bits

    def entry(self, i: int, j: int) -> int:
        return (self.rows[i] >> j) & 1

    def row_sums_zero(self) -> bool:
        return all(bin(row).count("1") % 2 == 0 for row in self.rows)

    def mul_vec(self, v: VecF2) -> VecF2:
        bits = 0
        for i, row in enumerate(self.rows):
            if bin(row & v.bits).count("1") % 2:
                bits |= 1 << i
        return VecF2(self.k, bits)

    def to_lists(self) -> List[List[int]]:
        return [[self.entry(i, j) for j in range(self.k)] for i in range(self.k)]

    def compact(self) -> str:
        """Rows as bit strings, e.g. ``11/11``."""
        return "/".join("".join(str(v) for v in row) for row in self.to_lists())

    def __str__(self) -> str:
        return "[" + ",".join(str(row) for row in self.to_lists()) + "]"


@dataclass(frozen=True, slots=True)
class MatF2:
    """A general nrows x ncols matrix over F2."""

    nrows: int
    ncols: int
    rows: Tuple[int, ...]


@dataclass(frozen=True)
class AffineSolution:
    particular: VecF2
    kernel: Tuple[VecF2, ...]

    def solutions(self) -> List[VecF2]:
        """Every solution, ordered by the integer value of the kernel combination."""
        result = []
        for mask in range(1 << len(self.kernel)):
            v = self.particular
            for idx, basis in enumerate(self.kernel):
                if (mask >> idx) & 1:
                    v = v + basis
            result.append(v)
        return result


Matrix = Union[SymMatF2, MatF2]


def _shape(m: Matrix) -> Tuple[int, int, Tuple[int, ...]]:
    if isinstance(m, SymMatF2):
        return m.k, m.k, m.rows
    return m.nrows, m.ncols, m.rows


def augment(m: Matrix, b: VecF2) -> MatF2:
    """The matrix (m | b)."""
    nrows, ncols, rows = _shape(m)
    if b.k != nrows:
        raise InputError(f"vector of length {b.k} does not match {nrows} rows")
    return MatF2(
        nrows, ncols + 1, tuple(row | (b[i] << ncols) for i, row in enumerate(rows))
    )


def rank(m: Matrix) -> int:
    by_top_bit: dict[int, int] = {}
    for row in _shape(m)[2]:
        while row:
            top = row.bit_length() - 1
            if top not in by_top_bit:
                by_top_bit[top] = row
                break
            row ^= by_top_bit[top]
    return len(by_top_bit)


def _row_reduce(rows: Sequence[int], ncols: int) -> Tuple[List[int], List[int]]:
    work = list(rows)
    pivots: List[int] = []
    r = 0
    for col in range(ncols):
        bit = 1 << col
        pivot = next((i for i in range(r, len(work)) if work[i] & bit), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= work[r]
        pivots.append(col)
        r += 1
    return work, pivots


def solve(m: Matrix, b: VecF2) -> AffineSolution:
    """All x with m x = b, as a particular solution plus a kernel basis."""
    nrows, ncols, _ = _shape(m)
    reduced, pivots = _row_reduce(augment(m, b).rows, ncols)
    rhs = 1 << ncols
    for row in reduced[len(pivots):]:
        if row & rhs:
            raise NoSolution(f"{b} is not in the image")
    particular = 0
    for r, col in enumerate(pivots):
        if reduced[r] & rhs:
            particular |= 1 << col
    kernel = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        vec = 1 << free
        for r, col in enumerate(pivots):
            if (reduced[r] >> free) & 1:
                vec |= 1 << col
        kernel.append(VecF2(ncols, vec))
    return AffineSolution(VecF2(ncols, particular), tuple(kernel))


def kernel_basis(m: Matrix) -> Tuple[VecF2, ...]:
    nrows = _shape(m)[0]
    return solve(m, VecF2.zeros(nrows)).kernel


def in_B(m: SymMatF2) -> bool:
    """Rank k-1 with every row sum zero."""
    return m.row_sums_zero() and rank(m) == m.k - 1


def in_Bprime(m: SymMatF2) -> bool:
    """Rank k-2 with every row sum zero."""
    return m.k >= 2 and m.row_sums_zero() and rank(m) == m.k - 2


def anchored_solution(B: SymMatF2, b: VecF2) -> VecF2:
    """The solution z of Bz = b with z_1 = 1."""
    if not in_B(B):
        raise BadMatrix(f"{B} does not have rank k-1 with zero row sums")
    z = solve(B, b).particular
    return z if z[0] == 1 else z + VecF2.ones(B.k)


def u(k: int) -> Fraction:
    """prod_{i=1}^{floor(k/2)} (1 - 2^(1-2i))."""
    value = Fraction(1)
    for i in range(1, k // 2 + 1):
        value *= 1 - Fraction(1, 2 ** (2 * i - 1))
    return value


def count_sym_rank(k: int, r: int) -> int:
    if not 0 <= r <= k:
        raise InputError(f"rank {r} outside 0..{k}")
    value = Fraction(2 ** comb(r + 1, 2)) * u(r + 1)
    for i in range(k - r):
        value *= Fraction(2**k - 2**i, 2 ** (k - r) - 2**i)
    if value.denominator != 1:
        raise AssertionError(f"non-integral symmetric rank count {value}")
    return value.numerator


def _enumerable(k: int) -> bool:
    return k <= get_config().max_enumerated_k


def _check_enumerable(k: int) -> None:
    if not _enumerable(k):
        limit = get_config().max_enumerated_k
        raise TooLarge(f"exhaustive enumeration is limited to k <= {limit}")


def enumerate_symmetric(k: int) -> Iterator[SymMatF2]:
    _check_enumerable(k)
    for bits in range(1 << comb(k + 1, 2)):
        yield SymMatF2.from_upper_bits(k, bits)


def brute_count_sym_rank(k: int) -> List[int]:
    counts = [0] * (k + 1)
    for m in enumerate_symmetric(k):
        counts[rank(m)] += 1
    return counts


@lru_cache(maxsize=None)
def _zero_row_sum_family(k: int, drop: int) -> Tuple[SymMatF2, ...]:
    return tuple(
        m for m in enumerate_symmetric(k) if m.row_sums_zero() and rank(m) == k - drop
    )


def enumerate_B(k: int) -> List[SymMatF2]:
    if k < 1:
        raise InputError("k must be at least 1")
    return list(_zero_row_sum_family(k, 1))


def enumerate_Bprime(k: int) -> List[SymMatF2]:
    if k < 2:
        raise InputError("k must be at least 2")
    return list(_zero_row_sum_family(k, 2))


def formula_B(k: int) -> Fraction:
    return u(k) * 2 ** comb(k, 2)


def formula_Bprime(k: int) -> Fraction:
    return Fraction(2 ** comb(k - 1, 2)) * u(k - 1) * (2 ** (k - 1) - 1)


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise TooLarge(f"{what} formula gives {value}; no enumeration at this k")
    return value.numerator


def count_B(k: int) -> int:
    """#B_k; enumerated for small k, from the closed formula beyond."""
    if _enumerable(k):
        return len(enumerate_B(k))
    return _integral(formula_B(k), "#B_k")


def count_Bprime(k: int) -> int:
    """#B'_k; enumeration is authoritative for small k."""
    if _enumerable(k):
        return len(enumerate_Bprime(k))
    return _integral(formula_Bprime(k), "#B'_k")


def admissible_alphas(k: int) -> Iterator[Tuple[int, ...]]:
    """alpha in {1,5,9,13}^k with product 1 mod 8."""
    for alpha in product(ALPHA_RESIDUES, repeat=k):
        if reduce(mul, alpha, 1) % 8 == 1:
            yield alpha


def b_alpha(alpha: Sequence[int]) -> VecF2:
    return VecF2.from_list([additive_two(a) for a in alpha])


def count_sigma_B(B: SymMatF2) -> int:
    """Number of admissible alpha with rank(B | b_alpha) = k - 1."""
    if not in_Bprime(B):
        raise BadMatrix(f"{B} does not have rank k-2 with zero row sums")
    return sum(
        1
        for alpha in admissible_alphas(B.k)
        if rank(augment(B, b_alpha(alpha))) == B.k - 1
    )


def matrix_count_report(k: int, sigma_max_k: int = 4) -> MatrixCountReport:
    """Every counting value at dimension k, with enumeration cross-checks."""
    if k < 1:
        raise InputError("k must be at least 1")
    enumerable = _enumerable(k)
    brute = brute_count_sym_rank(k) if enumerable else None
    disagreements: List[str] = []

    rank_table = []
    for r in range(k + 1):
        formula = count_sym_rank(k, r)
        observed = brute[r] if brute is not None else None
        if observed is not None and observed != formula:
            disagreements.append(f"rank {r}: formula {formula}, enumeration {observed}")
        rank_table.append(RankCount(rank=r, formula=formula, enumerated=observed))

    b_formula = formula_B(k)
    b_count = count_B(k)
    if enumerable and b_formula != b_count:
        disagreements.append(f"#B_{k}: formula {b_formula}, enumeration {b_count}")

    bprime_count: Optional[int] = None
    bprime_formula: Optional[Fraction] = None
    sigma_values: List[int] = []
    if k >= 2:
        bprime_formula = formula_Bprime(k)
        if enumerable:
            bprime_count = count_Bprime(k)
            if bprime_formula != bprime_count:
                disagreements.append(
                    f"#B'_{k}: formula {bprime_formula}, enumeration {bprime_count}"
                )
        elif bprime_formula.denominator == 1:
            bprime_count = bprime_formula.numerator
        if k <= sigma_max_k:
            sigma_values = sorted({count_sigma_B(B) for B in enumerate_Bprime(k)})
            expected = 2 ** (2 * k - 2)
            if sigma_values and sigma_values != [expected]:
                disagreements.append(f"#Sigma_B: expected {expected}, got {sigma_values}")

    return MatrixCountReport(
        k=k,
        count_B=b_count,
        formula_B=str(b_formula),
        count_Bprime=bprime_count,
        formula_Bprime=str(bprime_formula) if bprime_formula is not None else None,
        enumerated=enumerable,
        rank_table=rank_table,
        sigma_B_values=sigma_values,
        sigma_B_expected=2 ** (2 * k - 2) if k >= 2 else None,
        disagreements=disagreements,
    )
