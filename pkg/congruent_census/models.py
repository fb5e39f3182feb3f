"""
Data models for census runs, verdicts and reports.
"""

from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class PrimeFilter(str, Enum):
    """Which primes may divide an enumerated n."""

    ALL_PRIMES = "all"
    ONE_MOD_4 = "1mod4"
    ONE_MOD_8 = "1mod8"


class Convention(str, Enum):
    """Parity used to compare h8 against d in the P_k criterion."""

    D5 = "d5"  # h8 = (d-5)/4 mod 2
    D1 = "d1"  # h8 = (d-1)/4 mod 2


class H8Case(str, Enum):
    RANK_A_K_MINUS_1 = "rank_a_k_minus_1"
    RANK_A_K_MINUS_2 = "rank_a_k_minus_2"


class H8Verdict(BaseModel):
    """8-rank of Cl(-4n) predicted from quartic symbols; only built when h4 = 1."""

    h8: int = Field(ge=0, le=1)
    case_tag: H8Case
    d: int = Field(ge=1)
    d_prime: int = Field(ge=1)


class PkVerdict(BaseModel):
    """Membership of n in P_k with the data that decided it."""

    n: int
    k: int
    h4: int
    h8: Optional[int] = None
    convention: Convention
    in_Pk: bool
    d: Optional[int] = None
    d_candidates: List[int] = []
    verdict_d5: bool
    verdict_d1: bool


class ClassGroup2Part(BaseModel):
    """2-Sylow structure of a class group of forms."""

    disc: int = Field(lt=0)
    h: int = Field(ge=1)
    divisors: List[int] = []
    r2: int = Field(ge=0)
    r4: int = Field(ge=0)
    r8: int = Field(ge=0)
    ambiguous_forms: int = Field(ge=1)

    def rank(self, j: int) -> int:
        """The 2^j-rank: number of elementary divisors divisible by 2^j."""
        return sum(1 for d in self.divisors if d % (2**j) == 0)


class OracleMismatch(BaseModel):
    """A discrepancy between the genus criteria and the class group."""

    n: int
    k: int
    predicted: Dict[str, Optional[int]]
    oracle: Dict[str, int]


class RankCount(BaseModel):
    rank: int
    formula: int
    enumerated: Optional[int] = None


class MatrixCountReport(BaseModel):
    """Counting values for symmetric F2 matrices at one dimension."""

    k: int
    count_B: int
    formula_B: str
    count_Bprime: Optional[int] = None
    formula_Bprime: Optional[str] = None
    enumerated: bool
    rank_table: List[RankCount]
    sigma_B_values: List[int] = []
    sigma_B_expected: Optional[int] = None
    disagreements: List[str] = []


class CensusConfig(BaseModel):
    """Parameters of one census run."""

    x: int = Field(ge=2, le=10**8)
    k: int = Field(ge=1, le=8)
    filter: PrimeFilter = PrimeFilter.ALL_PRIMES
    n_mod8: Optional[int] = Field(default=None, ge=0, le=7)
    convention: Convention = Convention.D1
    partitions: int = Field(default=1, ge=1, exclude=True)
    checkpoints: List[int] = Field(
        default_factory=lambda: [10**4, 10**5, 10**6, 10**7]
    )

    @field_validator("checkpoints")
    @classmethod
    def validate_checkpoints(cls, v: List[int]) -> List[int]:
        if any(c < 2 for c in v):
            raise ValueError("checkpoints must be at least 2")
        return sorted(set(v))

    def effective_checkpoints(self) -> List[int]:
        """Checkpoints below x, always ending with x itself."""
        return [c for c in self.checkpoints if c < self.x] + [self.x]


class TheoryValue(BaseModel):
    """An exact density with its float rendering."""

    fraction: str
    decimal: float

    @classmethod
    def of(cls, value: Fraction) -> "TheoryValue":
        return cls(fraction=str(value), decimal=float(value))


class CheckpointReport(BaseModel):
    x: int
    counts: Dict[str, int]
    buckets: Dict[str, int] = {}
    ratios: Dict[str, Optional[float]] = {}
    theory: Dict[str, TheoryValue] = {}


class CensusReport(BaseModel):
    """Counts, empirical ratios and theoretical values per checkpoint."""

    config: CensusConfig
    checkpoints: List[CheckpointReport]


class VerificationCheck(BaseModel):
    name: str
    checked: int = 0
    failures: List[str] = []

    @property
    def passed(self) -> bool:
        return not self.failures


class VerificationReport(BaseModel):
    suite: str
    seed: int
    checks: List[VerificationCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class CliInvocation(BaseModel):
    """A parsed command line, validated before dispatch."""

    model_config = ConfigDict(extra="forbid")

    subcommand: Literal[
        "symbol", "redei", "classify", "oracle", "matrix-count", "census", "verify"
    ]
    output_format: Literal["text", "json"] = "text"
    options: Dict[str, Any] = {}


class CliResult(BaseModel):
    exit_code: int
    output: str
