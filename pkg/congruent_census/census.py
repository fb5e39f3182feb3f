"""
Census engine.

Squarefree n <= x with exactly k prime factors are generated as ascending
products of sieved primes: every prefix p_1 < ... < p_{k-1} is paired with a
numpy slice of candidate largest primes q. C_k is counted per checkpoint
with searchsorted; members of Q_k and Qtilde_k are classified one by one.

Work is partitioned by disjoint value ranges of the largest prime. Each
partition returns per-checkpoint-bin tallies which are merged by summation,
so the report does not depend on the partition count.
"""

import time
from bisect import bisect_left
from concurrent.futures import ProcessPoolExecutor
from itertools import accumulate
from math import isqrt, prod
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import structlog

from .config import CensusSettings, get_config
from .exceptions import InternalInconsistency, ResourceLimit
from .genus_theory import (
    FactoredSquarefree,
    in_bucket,
    in_tilde_by_some_split,
    pk_verdict,
    redei,
)
from .models import CensusConfig, CensusReport, CheckpointReport, PrimeFilter, TheoryValue
from .monitoring import metrics, trace_function
from .sieve import filtered_primes
from .theory import (
    theoretical_bound_tilde,
    theoretical_bucket_total,
    theoretical_density_Ck_alpha_B,
    theoretical_density_Qk,
    theoretical_density_Qtilde,
    theoretical_limit_Pk,
)

logger = structlog.get_logger(__name__)

# Per-(alpha, B) buckets are reported up to this k.
BUCKET_MAX_K = 3

Q_KEYS = ("Q_k", "P_k_d1", "P_k_d5", "buckets_B", "buckets_Bprime")
QTILDE_KEYS = ("Qtilde_k", "Ptilde_construction")

Tally = Dict[str, List[int]]


def counts_q_family(config: CensusConfig) -> bool:
    return config.filter != PrimeFilter.ONE_MOD_8 and config.n_mod8 in (None, 1)


def counts_qtilde_family(config: CensusConfig) -> bool:
    return config.n_mod8 in (None, 1)


def unrestricted(config: CensusConfig) -> bool:
    """True when C_k is the full set of squarefree n with k prime factors."""
    return config.filter == PrimeFilter.ALL_PRIMES and config.n_mod8 is None


def _smallest_product(count: int, prime_filter: PrimeFilter) -> Optional[int]:
    """Product of the first `count` primes passing the filter."""
    if count == 0:
        return 1
    limit = 64
    while limit < 10**7:
        primes = filtered_primes(limit, prime_filter)
        if len(primes) >= count:
            return prod(int(p) for p in primes[:count])
        limit *= 4
    return None


def largest_prime_bound(config: CensusConfig) -> int:
    smallest = _smallest_product(config.k - 1, config.filter)
    if smallest is None:
        return 0
    return config.x // smallest


def _prefixes(
    primes: Sequence[int], depth: int, k: int, x: int
) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Ascending prime tuples of length depth that leave room for k - depth larger primes."""

    def extend(start: int, prefix: Tuple[int, ...], product: int):
        if len(prefix) == depth:
            yield prefix, product
            return
        left = k - len(prefix)
        for i in range(start, len(primes)):
            p = primes[i]
            if product * p**left > x:
                break
            yield from extend(i + 1, prefix + (p,), product * p)

    yield from extend(0, (), 1)


def _last_prime_slices(
    config: CensusConfig, q_lo: int, q_hi: int
) -> Iterator[Tuple[Tuple[int, ...], int, np.ndarray, np.ndarray]]:
    """(prefix, product, q values, n values) for every prefix, n filtered by n_mod8."""
    table = filtered_primes(max(q_hi, isqrt(config.x) + 1), config.filter)
    prefix_primes = [int(p) for p in table[table <= isqrt(config.x)]]
    for prefix, product in _prefixes(prefix_primes, config.k - 1, config.k, config.x):
        floor = max(prefix[-1] if prefix else 0, q_lo)
        ceiling = min(config.x // product, q_hi)
        if ceiling <= floor:
            continue
        lo = np.searchsorted(table, floor, side="right")
        hi = np.searchsorted(table, ceiling, side="right")
        qs = table[lo:hi]
        ns = qs * product
        if config.n_mod8 is not None:
            keep = ns % 8 == config.n_mod8
            qs, ns = qs[keep], ns[keep]
        if qs.size:
            yield prefix, product, qs, ns


def enumerate_squarefree_k(
    config: CensusConfig, q_range: Optional[Tuple[int, int]] = None
) -> Iterator[FactoredSquarefree]:
    """
    Every qualifying n <= x exactly once, prefix by prefix and then by the
    largest prime; q_range = (lo, hi] restricts the largest prime.
    """
    q_lo, q_hi = q_range if q_range is not None else (0, largest_prime_bound(config))
    for prefix, _, qs, _ in _last_prime_slices(config, q_lo, q_hi):
        for q in qs.tolist():
            yield FactoredSquarefree.from_primes(prefix + (q,))


def _classify(
    n: FactoredSquarefree, count_q: bool, count_tilde: bool
) -> Tuple[List[str], Optional[str]]:
    """Class keys that n contributes to, and its bucket label if any."""
    classes: List[str] = []
    bucket = None
    if count_q and n.in_Qk:
        r = redei(n)
        classes.append("Q_k")
        verdict = pk_verdict(n, r=r)
        if verdict.verdict_d1:
            classes.append("P_k_d1")
        if verdict.verdict_d5:
            classes.append("P_k_d5")
        bucket = in_bucket(n, r)
        if bucket is not None:
            classes.append("buckets_B" if bucket.startswith("B|") else "buckets_Bprime")
    if count_tilde and n.in_Qtilde:
        classes.append("Qtilde_k")
        if n.k >= 2 and in_tilde_by_some_split(n):
            classes.append("Ptilde_construction")
    return classes, bucket


def census_partition(
    config: CensusConfig, q_lo: int, q_hi: int
) -> Tuple[Tally, Tally, float]:
    """Per-checkpoint-bin tallies for the largest prime in (q_lo, q_hi]."""
    started = time.perf_counter()
    checkpoints = config.effective_checkpoints()
    bins = len(checkpoints)
    count_q = counts_q_family(config)
    count_tilde = counts_qtilde_family(config)
    keys = ["C_k"] + (list(Q_KEYS) if count_q else []) + (list(QTILDE_KEYS) if count_tilde else [])
    tally: Tally = {key: [0] * bins for key in keys}
    buckets: Tally = {}
    cp_array = np.asarray(checkpoints, dtype=np.int64)

    for prefix, _, qs, ns in _last_prime_slices(config, q_lo, q_hi):
        c_bins = np.bincount(np.searchsorted(cp_array, ns, side="left"), minlength=bins)
        for i in range(bins):
            tally["C_k"][i] += int(c_bins[i])

        prefix_1mod4 = all(p % 4 == 1 for p in prefix)
        if not (count_q or count_tilde) or not prefix_1mod4:
            continue
        candidates = (qs % 4 == 1) & (ns % 8 == 1)
        for q, value in zip(qs[candidates].tolist(), ns[candidates].tolist()):
            n = FactoredSquarefree.from_primes(prefix + (q,))
            classes, bucket = _classify(n, count_q, count_tilde)
            slot = bisect_left(checkpoints, value)
            for key in classes:
                tally[key][slot] += 1
            if bucket is not None and config.k <= BUCKET_MAX_K:
                buckets.setdefault(bucket, [0] * bins)[slot] += 1

    duration = time.perf_counter() - started
    logger.info(
        "census partition finished",
        q_lo=q_lo,
        q_hi=q_hi,
        members=sum(tally["C_k"]),
        duration=duration,
    )
    return tally, buckets, duration


def _partition_ranges(q_max: int, partitions: int) -> List[Tuple[int, int]]:
    step = -(-q_max // partitions) if q_max > 0 else 1
    return [(lo, min(lo + step, q_max)) for lo in range(0, max(q_max, 1), step)]


def _merge(parts: Sequence[Tally]) -> Tally:
    merged: Tally = {}
    for part in parts:
        for key, values in part.items():
            current = merged.setdefault(key, [0] * len(values))
            for i, v in enumerate(values):
                current[i] += v
    return {key: list(accumulate(merged[key])) for key in sorted(merged)}


def _ratio(numerator: int, denominator: int) -> Optional[float]:
    return numerator / denominator if denominator else None


def _ratios_and_theory(
    config: CensusConfig, counts: Dict[str, int], buckets: Dict[str, int]
) -> Tuple[Dict[str, Optional[float]], Dict[str, TheoryValue]]:
    k = config.k
    ratios: Dict[str, Optional[float]] = {}
    theory: Dict[str, TheoryValue] = {}
    full = unrestricted(config)
    if "Q_k" in counts:
        ratios["Q_k/C_k"] = _ratio(counts["Q_k"], counts["C_k"])
        ratios["P_k_d1/Q_k"] = _ratio(counts["P_k_d1"], counts["Q_k"])
        ratios["P_k_d5/Q_k"] = _ratio(counts["P_k_d5"], counts["Q_k"])
        ratios["buckets_B/C_k"] = _ratio(counts["buckets_B"], counts["C_k"])
        theory[f"P_k_{config.convention.value}/Q_k"] = TheoryValue.of(theoretical_limit_Pk(k))
        if full:
            theory["Q_k/C_k"] = TheoryValue.of(theoretical_density_Qk(k))
            theory["buckets_B/C_k"] = TheoryValue.of(theoretical_bucket_total(k))
    if "Qtilde_k" in counts:
        ratios["Qtilde_k/C_k"] = _ratio(counts["Qtilde_k"], counts["C_k"])
        ratios["Ptilde_construction/Qtilde_k"] = _ratio(
            counts["Ptilde_construction"], counts["Qtilde_k"]
        )
        if full:
            theory["Qtilde_k/C_k"] = TheoryValue.of(theoretical_density_Qtilde(k))
        if k >= 2:
            theory["Ptilde_construction/Qtilde_k"] = TheoryValue.of(theoretical_bound_tilde(k))
    bucket_density = TheoryValue.of(theoretical_density_Ck_alpha_B(k))
    for label, value in buckets.items():
        ratios[f"{label}/C_k"] = _ratio(value, counts["C_k"])
        if full and label.startswith("B|"):
            theory[f"{label}/C_k"] = bucket_density
    return ratios, theory


@trace_function("run_census")
def run_census(config: CensusConfig, settings: Optional[CensusSettings] = None) -> CensusReport:
    """
    Count C_k, Q_k, P_k, Qtilde_k, the split construction and the buckets at
    every checkpoint, with empirical ratios and their exact limits.

    Raises:
        ResourceLimit: when x*k bytes exceeds the configured memory budget.
        InternalInconsistency: when the two bucket families do not add up to P_k
            under the (d-1)/4 convention.
    """
    settings = settings or get_config()
    if config.x * config.k > settings.mem_budget_bytes():
        raise ResourceLimit(
            f"x*k = {config.x * config.k} bytes exceeds the {settings.mem_budget_mb} MiB budget"
        )

    ranges = _partition_ranges(largest_prime_bound(config), config.partitions)
    if config.partitions == 1:
        results = [census_partition(config, lo, hi) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=config.partitions) as executor:
            futures = [executor.submit(census_partition, config, lo, hi) for lo, hi in ranges]
            results = [future.result() for future in futures]

    for _, _, duration in results:
        metrics.record_partition_duration(duration)
    counts_by_key = _merge([tally for tally, _, _ in results])
    buckets_by_label = _merge([buckets for _, buckets, _ in results])

    checkpoints = config.effective_checkpoints()
    reports = []
    for i, x in enumerate(checkpoints):
        counts = {key: values[i] for key, values in counts_by_key.items()}
        buckets = {label: values[i] for label, values in buckets_by_label.items()}
        if "Q_k" in counts and counts["buckets_B"] + counts["buckets_Bprime"] != counts["P_k_d1"]:
            raise InternalInconsistency(
                f"at x={x} the bucket families count "
                f"{counts['buckets_B']} + {counts['buckets_Bprime']} but P_k has {counts['P_k_d1']}"
            )
        ratios, theory = _ratios_and_theory(config, counts, buckets)
        reports.append(
            CheckpointReport(x=x, counts=counts, buckets=buckets, ratios=ratios, theory=theory)
        )

    final = reports[-1].counts
    metrics.record_census_counts(final)
    logger.info("census finished", x=config.x, k=config.k, **final)
    return CensusReport(config=config, checkpoints=reports)
