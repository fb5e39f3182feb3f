"""
Property suites run by ``congruent-census verify``.

lemmas     exact symbol identities on random inputs, the matrix counting
           formulas and the admissible residue-class counts
bijection  rational and Gaussian bucket membership agree on every n in
           Q_k(x), plus the split identity, kernel-choice invariance and
           convention complementarity
oracle     genus-theory ranks against class groups of forms
"""

import random
from typing import Callable, Dict, List, Optional

import structlog
from sympy import primerange

from .admissible_classes import count_admissible_classes, expected_admissible_classes
from .classgroup_oracle import oracle_sweep
from .config import get_config
from .census import enumerate_squarefree_k
from .exceptions import InputError
from .f2_matrix import (
    brute_count_sym_rank,
    count_B,
    count_sigma_B,
    count_sym_rank,
    enumerate_B,
    enumerate_Bprime,
    formula_B,
)
from .gaussian import GaussInt, PrimaryPrime, primary_associate, primes_in_P_up_to
from .genus_theory import (
    FactoredSquarefree,
    admissible_kernel_vectors,
    bucket_key,
    eta,
    in_Ck_alpha_B,
    in_Ckprime_gaussian,
    kernel_parity_invariant,
    pk_verdict,
    redei,
)
from .models import CensusConfig, PrimeFilter, VerificationCheck, VerificationReport
from .monitoring import metrics, trace_function
from .residue_symbols import (
    QuarticValue,
    jacobi,
    legendre_symbol_zi,
    quartic_rational_composite,
    quartic_symbol,
    quartic_symbol_composite,
    quartic_symbol_of_two,
)

logger = structlog.get_logger(__name__)

SUITES = ("lemmas", "bijection", "oracle")

# Failures kept per check; the count is still exact.
_MAX_RECORDED_FAILURES = 20


class _Check:
    def __init__(self, name: str):
        self.result = VerificationCheck(name=name)

    def expect(self, condition: bool, detail: Callable[[], str]) -> None:
        self.result.checked += 1
        if not condition and len(self.result.failures) < _MAX_RECORDED_FAILURES:
            self.result.failures.append(detail())


def _primary_primes(limit: int) -> List[GaussInt]:
    """Primary primes of norm <= limit: both primes above each split p, and -q for inert q."""
    primes: List[GaussInt] = []
    for lam in primes_in_P_up_to(limit):
        primes.append(lam.value)
        primes.append(primary_associate(lam.value.conjugate())[1])
    for q in primerange(3, int(limit**0.5) + 1):
        if q % 4 == 3:
            primes.append(GaussInt(-q, 0))
    return primes


def _random_primary_product(rng: random.Random, primes: List[GaussInt], max_factors: int = 4) -> GaussInt:
    """Product of 1 to max_factors primes drawn from primes; primary since each factor is."""
    theta = GaussInt(1, 0)
    for lam in rng.choices(primes, k=rng.randint(1, max_factors)):
        theta = theta * lam
    return theta


def lemmas_suite(seed: int, samples: int) -> List[VerificationCheck]:
    rng = random.Random(seed)

    two = _Check("quartic_symbol_of_two")
    small_primes = _primary_primes(10_000)
    for _ in range(samples):
        theta = _random_primary_product(rng, small_primes)
        expected = quartic_symbol_of_two(theta)
        actual = quartic_symbol_composite(GaussInt(2), theta)
        two.expect(actual == expected, lambda: f"(2/{theta})_4 = {actual}, i^(-b) = {expected}")

    primes = _primary_primes(20_000)
    reciprocity = _Check("quartic_reciprocity")
    conjugation = _Check("conjugation_identity")
    for _ in range(samples):
        lam, mu = rng.sample(primes, 2)
        forward = quartic_symbol(lam, mu)
        backward = quartic_symbol(mu, lam)
        sign = QuarticValue.from_sign(
            -1 if ((lam.norm() - 1) // 4) * ((mu.norm() - 1) // 4) % 2 else 1
        )
        reciprocity.expect(
            forward == backward * sign,
            lambda: f"({lam}/{mu})_4 = {forward}, ({mu}/{lam})_4 = {backward}",
        )
        conj = quartic_symbol(lam.conjugate(), primary_associate(mu.conjugate())[1])
        conjugation.expect(
            conj == forward.conjugate(),
            lambda: f"conjugate of ({lam}/{mu})_4 is {forward.conjugate()}, got {conj}",
        )

    counts = _Check("matrix_counting_formulas")
    for k in range(1, 6):
        brute = brute_count_sym_rank(k)
        for r in range(k + 1):
            formula = count_sym_rank(k, r)
            counts.expect(brute[r] == formula, lambda: f"k={k} rank {r}: {formula} vs {brute[r]}")
        counts.expect(
            count_B(k) == formula_B(k), lambda: f"#B_{k} = {count_B(k)}, formula {formula_B(k)}"
        )
    for k in range(2, 5):
        for B in enumerate_Bprime(k):
            sigma = count_sigma_B(B)
            counts.expect(
                sigma == 2 ** (2 * k - 2), lambda: f"#Sigma_B for {B.compact()} is {sigma}"
            )

    classes = _Check("admissible_class_counts")
    lam5 = PrimaryPrime(GaussInt(-1, 2), True)
    lam13 = PrimaryPrime(GaussInt(3, 2), True)
    cases = [((), (1,), None), ((), (9,), None), ((lam5,), (5, 13), None), ((lam13,), (13, 5), None)]
    for alpha3 in (1, 9):
        for B in enumerate_B(3):
            if B.entry(0, 1) == 1:
                cases.append(((lam5, lam13), (5, 13, alpha3), B))
    for epsilon, alpha, B in cases:
        if B is None:
            B = enumerate_B(len(alpha))[0]
        got = count_admissible_classes(epsilon, alpha, B)
        want = expected_admissible_classes(epsilon)
        classes.expect(
            got == want,
            lambda: f"epsilon={[str(e) for e in epsilon]} alpha={alpha} B={B.compact()}: {got} != {want}",
        )

    return [two.result, reciprocity.result, conjugation.result, counts.result, classes.result]


def _split_identity(n: FactoredSquarefree, check: _Check) -> None:
    lambdas = {lam.norm: lam.value for lam in eta(n)}
    for mask in range(1, (1 << n.k) - 1):
        inside = tuple(p for i, p in enumerate(n.primes) if (mask >> i) & 1)
        outside = tuple(p for p in n.primes if p not in inside)
        d = 1
        for p in inside:
            d *= p
        d_prime = n.n // d
        if any(jacobi(2 * d, q) != 1 for q in outside) or any(
            jacobi(2 * d_prime, p) != 1 for p in inside
        ):
            continue
        rational = quartic_rational_composite(2 * d_prime, d, inside) * quartic_rational_composite(
            2 * d, d_prime, outside
        )
        theta1 = GaussInt(1)
        for p in inside:
            theta1 = theta1 * lambdas[p]
        theta2 = GaussInt(1)
        for q in outside:
            theta2 = theta2 * lambdas[q]
        gaussian = quartic_symbol_composite(GaussInt(2), theta1 * theta2) * QuarticValue.from_sign(
            legendre_symbol_zi(theta2, theta1)
        )
        check.expect(
            QuarticValue.from_sign(rational) == gaussian,
            lambda: f"n={n.n} d={d}: rational {rational}, Gaussian {gaussian}",
        )


def bijection_suite(x: int, kmax: int = 3) -> List[VerificationCheck]:
    bijection = _Check("rational_gaussian_bijection")
    identity = _Check("split_identity")
    invariance = _Check("kernel_choice_invariance")
    conventions = _Check("convention_complementarity")
    for k in range(1, kmax + 1):
        config = CensusConfig(
            x=x, k=k, filter=PrimeFilter.ONE_MOD_4, n_mod8=1, checkpoints=[]
        )
        matrices = enumerate_B(k)
        for n in enumerate_squarefree_k(config):
            r = redei(n)
            alpha = tuple(p % 16 for p in n.primes)
            lambdas = eta(n)
            for B in matrices:
                rational = in_Ck_alpha_B(n, alpha, B)
                gaussian = in_Ckprime_gaussian(lambdas, alpha, B)
                bijection.expect(
                    rational == gaussian,
                    lambda: f"n={n.n} alpha={alpha} B={B.compact()}: {rational} vs {gaussian}",
                )
            if k >= 2:
                _split_identity(n, identity)
            verdict = pk_verdict(n, r=r)
            if r.h4 == 1:
                invariance.expect(
                    kernel_parity_invariant(n, r),
                    lambda: f"n={n.n}: divisors {[n.divisor(v) for v in admissible_kernel_vectors(r)]}",
                )
            conventions.expect(
                (verdict.verdict_d1 != verdict.verdict_d5) == (r.h4 == 1),
                lambda: f"n={n.n} h4={r.h4}: d1={verdict.verdict_d1} d5={verdict.verdict_d5}",
            )
            key = bucket_key(n, r)
            if key is not None and key[0] == "B":
                bijection.expect(
                    in_Ckprime_gaussian(lambdas, key[1], key[2]) == verdict.verdict_d1,
                    lambda: f"n={n.n}: Gaussian bucket disagrees with the d1 verdict",
                )
    return [bijection.result, identity.result, invariance.result, conventions.result]


def oracle_suite(x: int, kmax: int = 3, jobs: int = 1) -> List[VerificationCheck]:
    check = _Check("oracle_equivalence")
    mismatches = oracle_sweep(x, kmax=kmax, jobs=jobs)
    check.result.checked = 1
    check.result.failures = [
        f"n={m.n} k={m.k} predicted={m.predicted} oracle={m.oracle}"
        for m in mismatches[:_MAX_RECORDED_FAILURES]
    ]
    return [check.result]


@trace_function("verify")
def run_suite(
    suite: str,
    seed: Optional[int] = None,
    samples: int = 10_000,
    x: Optional[int] = None,
    jobs: int = 1,
) -> VerificationReport:
    settings = get_config()
    seed = settings.default_seed if seed is None else seed
    runners: Dict[str, Callable[[], List[VerificationCheck]]] = {
        "lemmas": lambda: lemmas_suite(seed, samples),
        "bijection": lambda: bijection_suite(x or 10**5),
        "oracle": lambda: oracle_suite(x or settings.oracle_x0, jobs=jobs),
    }
    if suite not in runners:
        raise InputError(f"unknown suite {suite!r}; choose from {SUITES}")
    checks = runners[suite]()
    passed = sum(1 for c in checks if c.passed)
    metrics.record_verification(suite, passed, len(checks) - passed)
    for c in checks:
        logger.info("verification check", suite=suite, check=c.name, checked=c.checked, failures=len(c.failures))
    return VerificationReport(suite=suite, seed=seed, checks=checks)
