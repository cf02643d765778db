"""Mann-Whitney U test (two-tailed) with rank-biserial effect size.

U is computed for sample A via rank sums with midranks for ties.  For small
tie-free samples (both sizes <= 10) the p-value is exact, from the full null
distribution of U; otherwise a normal approximation with tie-corrected
variance and continuity correction is used.  The rank-biserial effect size
r = 2U/(n1*n2) - 1 is +1 when every value of A exceeds every value of B.
"""

from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError

EXACT_MAX_N = 10


@dataclass(frozen=True)
class MannWhitneyResult:
    u_statistic: float
    p_value: float
    effect_size_r: float
    method: str  # "exact" or "normal-approx"


def median(sample) -> float:
    """Sample median; midpoint of the two central values for even length."""
    values = list(sample)
    if not values:
        raise ValidationError("median of an empty sample")
    return float(statistics.median(values))


def _midranks(values: list[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        rank = (i + j) / 2.0 + 1.0  # average of 1-based ranks i+1 .. j+1
        for idx in order[i:j + 1]:
            ranks[idx] = rank
        i = j + 1
    return ranks


@lru_cache(maxsize=None)
def _rank_sum_counts(n1: int, total: int) -> tuple[int, ...]:
    """counts[s] = number of n1-subsets of ranks 1..total with rank sum s."""
    max_sum = sum(range(total - n1 + 1, total + 1))
    counts = [[0] * (max_sum + 1) for _ in range(n1 + 1)]
    counts[0][0] = 1
    for rank in range(1, total + 1):
        for j in range(min(rank, n1), 0, -1):
            row, prev = counts[j], counts[j - 1]
            for s in range(max_sum, rank - 1, -1):
                if prev[s - rank]:
                    row[s] += prev[s - rank]
    return tuple(counts[n1])


def _exact_two_tailed_p(u: int, n1: int, n2: int) -> float:
    counts = _rank_sum_counts(n1, n1 + n2)
    offset = n1 * (n1 + 1) // 2  # rank sum s maps to u = s - offset
    total = math.comb(n1 + n2, n1)
    cdf = sum(c for s, c in enumerate(counts) if s - offset <= u) / total
    sf = sum(c for s, c in enumerate(counts) if s - offset >= u) / total
    return min(1.0, 2.0 * min(cdf, sf))


def _normal_two_tailed_p(u: float, n1: int, n2: int, ranks: list[float]) -> float:
    n = n1 + n2
    tie_term = 0.0
    seen: dict[float, int] = {}
    for r in ranks:
        seen[r] = seen.get(r, 0) + 1
    for count in seen.values():
        tie_term += count**3 - count
    variance = n1 * n2 / 12.0 * ((n + 1) - tie_term / (n * (n - 1)))
    if variance <= 0.0:
        return 1.0  # all values tied
    mean = n1 * n2 / 2.0
    shift = max(abs(u - mean) - 0.5, 0.0)  # continuity correction
    z = shift / math.sqrt(variance)
    return min(1.0, math.erfc(z / math.sqrt(2.0)))


def mann_whitney(sample_a, sample_b) -> MannWhitneyResult:
    """Two-tailed Mann-Whitney U test of sample A against sample B."""
    a = [float(x) for x in sample_a]
    b = [float(x) for x in sample_b]
    if not a or not b:
        raise ValidationError("Mann-Whitney samples must be non-empty")
    n1, n2 = len(a), len(b)
    ranks = _midranks(a + b)
    rank_sum_a = sum(ranks[:n1])
    u = rank_sum_a - n1 * (n1 + 1) / 2.0
    has_ties = len(set(a + b)) < n1 + n2
    if not has_ties and n1 <= EXACT_MAX_N and n2 <= EXACT_MAX_N:
        p = _exact_two_tailed_p(round(u), n1, n2)
        method = "exact"
    else:
        p = _normal_two_tailed_p(u, n1, n2, ranks)
        method = "normal-approx"
    r = 2.0 * u / (n1 * n2) - 1.0
    return MannWhitneyResult(u_statistic=u, p_value=p, effect_size_r=r, method=method)
