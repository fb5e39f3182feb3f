"""
congruent-census - genus theory and density counts for congruent numbers

Quartic residue symbols over Z[i], Redei matrices, a class-group oracle
built on binary quadratic forms, and a census of squarefree n whose
congruent number curve has rank zero with 2-primary Sha of order 4.
"""

__version__ = "0.1.0"
__description__ = "Quartic symbols, Redei matrices and class-group checks for congruent numbers"

from .classgroup_oracle import class_group_for_n, oracle_sweep
from .census import run_census
from .gaussian import GaussInt, PrimaryPrime
from .genus_theory import FactoredSquarefree, classify_Pk, h8_jung_yue, pk_verdict, redei
from .models import (
    CensusConfig,
    CensusReport,
    ClassGroup2Part,
    Convention,
    PkVerdict,
    PrimeFilter,
)
from .residue_symbols import QuarticValue, quartic_symbol

__all__ = [
    "CensusConfig",
    "CensusReport",
    "ClassGroup2Part",
    "Convention",
    "FactoredSquarefree",
    "GaussInt",
    "PkVerdict",
    "PrimaryPrime",
    "PrimeFilter",
    "QuarticValue",
    "class_group_for_n",
    "classify_Pk",
    "h8_jung_yue",
    "oracle_sweep",
    "pk_verdict",
    "quartic_symbol",
    "redei",
    "run_census",
]
