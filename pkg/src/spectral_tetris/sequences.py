"""Feasibility layer: majorization, Spectral-Tetris-readiness, block counts.

Everything here works on exact rationals (eigenvalues, squared norms), so
every predicate is decided exactly. Construction itself lives elsewhere;
this module answers "can the greedy construction possibly work, and in
which order" before any matrix entry is computed.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

from .errors import (
    InvalidPartition,
    OutOfRange,
    SearchBudgetExceeded,
    SumMismatch,
    Underdetermined,
)

Spectrum = Tuple[Fraction, ...]
NormSequence = Tuple[Fraction, ...]

DEFAULT_SEARCH_BUDGET = 10_000_000
SEARCH_BUDGET_ENV = "SPECTRAL_TETRIS_SEARCH_BUDGET"


def search_budget(budget: Optional[int] = None) -> int:
    """Resolve the permutation-search state cap (argument, then env, then default)."""
    if budget is not None:
        return budget
    raw = os.environ.get(SEARCH_BUDGET_ENV)
    if raw:
        return int(raw)
    return DEFAULT_SEARCH_BUDGET


def as_spectrum(values: Sequence) -> Spectrum:
    """Validate and normalize a sequence of eigenvalues (positive rationals)."""
    out = tuple(Fraction(v) for v in values)
    if not out:
        raise ValueError("spectrum must be nonempty")
    if any(v <= 0 for v in out):
        raise ValueError("eigenvalues must be positive")
    return out


def as_norms_squared(values: Sequence) -> NormSequence:
    """Validate and normalize a sequence of squared vector norms (positive rationals)."""
    out = tuple(Fraction(v) for v in values)
    if not out:
        raise ValueError("norm sequence must be nonempty")
    if any(v <= 0 for v in out):
        raise ValueError("squared norms must be positive")
    return out


@dataclass(frozen=True)
class STReadyCertificate:
    """Witness that permuted norms and eigenvalues satisfy the readiness partition.

    norm_order and eigenvalue_order are 0-based indices into the caller's
    sequences; partition holds the counts n_1 < ... < n_M = N.
    """

    norm_order: Tuple[int, ...]
    eigenvalue_order: Tuple[int, ...]
    partition: Tuple[int, ...]


def majorizes(dominant: Sequence, dominated: Sequence) -> bool:
    """True when `dominant` majorizes `dominated` (sorted prefix sums dominate, totals equal).

    Sequences are sorted non-increasing internally and the shorter one is
    zero-padded, so the check is permutation-invariant.
    """
    a = sorted((Fraction(v) for v in dominant), reverse=True)
    b = sorted((Fraction(v) for v in dominated), reverse=True)
    size = max(len(a), len(b))
    a += [Fraction(0)] * (size - len(a))
    b += [Fraction(0)] * (size - len(b))
    pa = pb = Fraction(0)
    for x, y in zip(a, b):
        pa += x
        pb += y
        if pb > pa:
            return False
    return pa == pb


def st_ready_check(
    norms_squared: Sequence, spectrum: Sequence, partition: Sequence[int]
) -> bool:
    """Decide whether the given orderings satisfy the readiness conditions.

    The partition must be integers 0 <= n_1 < n_2 < ... < n_M = N; anything
    else raises InvalidPartition. The conditions checked, for k < M:
    prefix_a(n_k) <= prefix_l(k) < prefix_a(n_k + 1), and when the left
    inequality is strict, n_{k+1} - n_k >= 2 and the (n_k+2)-nd squared norm
    is at least the strict gap.
    """
    norms = as_norms_squared(norms_squared)
    eigs = as_spectrum(spectrum)
    n_count, m_count = len(norms), len(eigs)
    part = tuple(partition)
    if len(part) != m_count or any(not isinstance(p, int) for p in part):
        raise InvalidPartition(f"partition {part} must be {m_count} integers")
    if any(part[i] >= part[i + 1] for i in range(m_count - 1)):
        raise InvalidPartition(f"partition {part} is not strictly increasing")
    if part[0] < 0 or part[-1] != n_count:
        raise InvalidPartition(f"partition {part} must lie in [0, {n_count}] and end at {n_count}")

    if sum(norms) != sum(eigs):
        return False
    prefix_a = [Fraction(0)]
    for v in norms:
        prefix_a.append(prefix_a[-1] + v)
    prefix_l = Fraction(0)
    for k in range(m_count - 1):
        prefix_l += eigs[k]
        n_k = part[k]
        if not (prefix_a[n_k] <= prefix_l < prefix_a[n_k + 1]):
            return False
        if prefix_a[n_k] < prefix_l:
            if part[k + 1] - n_k < 2:
                return False
            if norms[n_k + 1] < prefix_l - prefix_a[n_k]:
                return False
    return True


def _distinct_value_orders(values: Spectrum):
    """Index permutations yielding distinct value sequences, identity first."""
    seen = set()
    for perm in itertools.permutations(range(len(values))):
        key = tuple(values[i] for i in perm)
        if key not in seen:
            seen.add(key)
            yield perm, key


class _FeedSearch:
    """Depth-first search over the order in which norms are fed to the greedy.

    A state is (row index, remaining weight in the row, multiset of unused
    squared norms). Moves mirror the construction: a singleton consumes one
    norm <= the remaining weight; a two-column block consumes a norm above
    the remaining weight together with a partner at least the remaining
    weight, spilling the excess into the next row. Failed states are memoized.
    """

    def __init__(self, eigs: Tuple[Fraction, ...], counts: Dict[Fraction, int], budget: int):
        self.eigs = eigs
        self.counts = counts
        self.budget = budget
        self.states = 0
        self.failed: set = set()
        self.feed: List[Fraction] = []
        self.partition: List[int] = []

    def _key(self, row: int, weight: Fraction):
        return (row, weight, tuple(sorted((v, c) for v, c in self.counts.items() if c)))

    def run(self) -> bool:
        return self._fill(0, self.eigs[0])

    def _fill(self, row: int, weight: Fraction) -> bool:
        self.states += 1
        if self.states > self.budget:
            raise SearchBudgetExceeded(
                f"readiness search exceeded {self.budget} states"
            )
        if weight == 0:
            self.partition.append(len(self.feed))
            if row + 1 == len(self.eigs):
                return not any(self.counts.values())
            if self._fill(row + 1, self.eigs[row + 1]):
                return True
            self.partition.pop()
            return False
        if weight < 0:
            return False
        key = self._key(row, weight)
        if key in self.failed:
            return False
        values = [v for v, c in self.counts.items() if c]
        for a in values:
            if a <= weight:
                self.counts[a] -= 1
                self.feed.append(a)
                if self._fill(row, weight - a):
                    return True
                self.feed.pop()
                self.counts[a] += 1
        if row + 1 < len(self.eigs) and not (
            # Bridging out of a row that owns no column of its own would
            # repeat the previous cut; partitions must strictly increase.
            self.partition
            and self.partition[-1] == len(self.feed)
        ):
            before = len(self.feed)
            for a in values:
                if a <= weight:
                    continue
                self.counts[a] -= 1
                partners = [b for b, c in self.counts.items() if c and b >= weight]
                for b in partners:
                    spill = a + b - weight
                    if spill > self.eigs[row + 1]:
                        continue
                    self.counts[b] -= 1
                    self.feed.extend((a, b))
                    self.partition.append(before)
                    if self._fill(row + 1, self.eigs[row + 1] - spill):
                        return True
                    self.partition.pop()
                    del self.feed[-2:]
                    self.counts[b] += 1
                self.counts[a] += 1
        self.failed.add(key)
        return False


def st_ready_search(
    norms_squared: Sequence, spectrum: Sequence, budget: Optional[int] = None
) -> Optional[STReadyCertificate]:
    """Find orderings of norms and eigenvalues that are Spectral Tetris ready.

    Returns a certificate (index permutations plus partition), or None when
    no ordering works, including when the totals differ. Raises
    SearchBudgetExceeded when the state cap is hit before the question is
    settled, which is deliberately distinct from None.
    """
    norms = as_norms_squared(norms_squared)
    eigs = as_spectrum(spectrum)
    if sum(norms) != sum(eigs):
        return None
    cap = search_budget(budget)
    states_used = 0
    for perm, permuted in _distinct_value_orders(eigs):
        counts: Dict[Fraction, int] = {}
        for v in norms:
            counts[v] = counts.get(v, 0) + 1
        search = _FeedSearch(permuted, counts, cap - states_used)
        if search.run():
            norm_order = _assign_indices(norms, search.feed)
            return STReadyCertificate(
                norm_order=norm_order,
                eigenvalue_order=perm,
                partition=tuple(search.partition),
            )
        states_used += search.states
        if states_used >= cap:
            raise SearchBudgetExceeded(f"readiness search exceeded {cap} states")
    return None


def _assign_indices(original: NormSequence, feed: List[Fraction]) -> Tuple[int, ...]:
    """Map a value feed back to original indices, taking equal values in index order."""
    pools: Dict[Fraction, List[int]] = {}
    for idx in range(len(original) - 1, -1, -1):
        pools.setdefault(original[idx], []).append(idx)
    return tuple(pools[v].pop() for v in feed)


class BlockCount(NamedTuple):
    mu: int
    permutation: Tuple[int, ...]
    heuristic: bool


_EXHAUSTIVE_MU_CAP = 8


def maximal_block_number(spectrum: Sequence) -> BlockCount:
    """Maximum number of integer partial sums achievable by permuting the spectrum.

    Equivalently the largest number of disjoint sub-multisets with integer
    sums; the returned permutation lists those parts consecutively (any
    non-integer remainder last). Exact by subset dynamic programming for
    M <= 8; above that, greedy minimum-cardinality extraction (part sizes
    capped at 8) is used and the result is flagged heuristic. Greedy is not
    exact in general: it can merge elements of two genuine parts with a
    stray element and destroy both.
    """
    eigs = as_spectrum(spectrum)
    m_count = len(eigs)
    if m_count <= _EXHAUSTIVE_MU_CAP:
        mu, order = _mu_exact(eigs)
        return BlockCount(mu=mu, permutation=order, heuristic=False)
    mu, order = _mu_greedy(eigs)
    return BlockCount(mu=mu, permutation=order, heuristic=True)


def _mu_exact(eigs: Spectrum) -> Tuple[int, Tuple[int, ...]]:
    m_count = len(eigs)
    full = (1 << m_count) - 1
    integer_masks = [
        mask
        for mask in range(1, full + 1)
        if sum(eigs[i] for i in range(m_count) if mask >> i & 1).denominator == 1
    ]
    best = [0] * (full + 1)
    pick = [0] * (full + 1)
    for mask in range(1, full + 1):
        for part in integer_masks:
            if part & ~mask:
                continue
            candidate = 1 + best[mask ^ part]
            if candidate > best[mask]:
                best[mask] = candidate
                pick[mask] = part
    order: List[int] = []
    mask = full
    while best[mask]:
        part = pick[mask]
        order.extend(i for i in range(m_count) if part >> i & 1)
        mask ^= part
    order.extend(i for i in range(m_count) if mask >> i & 1)
    return best[full], tuple(order)


def _mu_greedy(eigs: Spectrum) -> Tuple[int, Tuple[int, ...]]:
    remaining = list(range(len(eigs)))
    order: List[int] = []
    mu = 0
    while remaining:
        part = None
        for size in range(1, min(len(remaining), _EXHAUSTIVE_MU_CAP) + 1):
            for combo in itertools.combinations(remaining, size):
                if sum(eigs[i] for i in combo).denominator == 1:
                    part = combo
                    break
            if part:
                break
        if part is None:
            break
        mu += 1
        order.extend(part)
        remaining = [i for i in remaining if i not in part]
    order.extend(remaining)
    return mu, tuple(order)


def untf_feasible(dimension: int, count: int) -> bool:
    """Whether the greedy can build a unit-norm tight frame of `count` vectors.

    The reduced ratio count/dimension must be at least 2 or of the form
    (2L-1)/L. Fewer vectors than dimensions raises Underdetermined.
    """
    if dimension < 1:
        raise ValueError(f"dimension {dimension} must be positive")
    if count < dimension:
        raise Underdetermined(f"{count} vectors cannot span dimension {dimension}")
    ratio = Fraction(count, dimension)
    if ratio >= 2:
        return True
    return ratio.numerator == 2 * ratio.denominator - 1


def untf_floor_condition(dimension: int, count: int) -> bool:
    """Floor characterization of unit-norm tight frame feasibility for M < N < 2M.

    Checks floor(k*ratio) <= (k+1)*ratio - 2 for every k < M with k*ratio
    not an integer; outside the open band (M, 2M) the hypothesis fails and
    OutOfRange is raised.
    """
    if not dimension < count < 2 * dimension:
        raise OutOfRange(
            f"floor condition requires {dimension} < count < {2 * dimension}, got {count}"
        )
    ratio = Fraction(count, dimension)
    for k in range(1, dimension):
        partial = k * ratio
        if partial.denominator == 1:
            continue
        if math.floor(partial) > (k + 1) * ratio - 2:
            return False
    return True


class SfrCertificate(NamedTuple):
    partition: Tuple[int, ...]
    eigenvalue_order: Tuple[int, ...]


def sfr_feasible(spectrum: Sequence, count: int) -> Optional[SfrCertificate]:
    """Partition witnessing that a unit-norm frame with this spectrum is buildable.

    For some permutation of the eigenvalues, the floors n_k of the eigenvalue
    prefix sums must be strictly increasing, with a jump of at least 2
    whenever the prefix sum is fractional. Eigenvalues not summing to the
    vector count raises SumMismatch; no qualifying permutation returns None.
    """
    eigs = as_spectrum(spectrum)
    total = sum(eigs)
    if total != count:
        raise SumMismatch(f"eigenvalues sum to {total}, need {count}")
    for perm, permuted in _distinct_value_orders(eigs):
        partition = [math.floor(sum(permuted[: k + 1])) for k in range(len(permuted) - 1)]
        partition.append(count)
        if _sfr_partition_ok(permuted, partition, count):
            return SfrCertificate(partition=tuple(partition), eigenvalue_order=perm)
    return None


def _sfr_partition_ok(eigs: Sequence[Fraction], partition: Sequence[int], count: int) -> bool:
    if partition[0] < 0 or partition[-1] != count:
        return False
    if any(partition[k] >= partition[k + 1] for k in range(len(partition) - 1)):
        return False
    prefix = Fraction(0)
    for k in range(len(eigs) - 1):
        prefix += eigs[k]
        n_k = partition[k]
        if not (n_k <= prefix < n_k + 1):
            return False
        if n_k < prefix and partition[k + 1] - n_k < 2:
            return False
    return True


def pnstc_sufficient(norms_squared: Sequence, spectrum: Sequence) -> bool:
    """Easily-checked sufficient condition for readiness of non-decreasing sequences.

    Requires equal totals and a_{N-2L}^2 + a_{N-2L-1}^2 <= lambda_{M-L} for
    L = 0..M-1 (1-based). Both inputs must be given non-decreasing (ValueError
    otherwise); missing indices (fewer than 2M norms) simply report False.
    """
    norms = as_norms_squared(norms_squared)
    eigs = as_spectrum(spectrum)
    if list(norms) != sorted(norms) or list(eigs) != sorted(eigs):
        raise ValueError("sequences must be non-decreasing")
    if sum(norms) != sum(eigs):
        return False
    n_count, m_count = len(norms), len(eigs)
    for level in range(m_count):
        hi = n_count - 2 * level - 1
        lo = hi - 1
        if lo < 0:
            return False
        if norms[hi] + norms[lo] > eigs[m_count - level - 1]:
            return False
    return True


def tight_sufficient(norms_squared: Sequence, dimension: int) -> bool:
    """Largest-two-norms test for tight-frame construction with these norms.

    With norms sorted non-increasing, checks a_1^2 + a_2^2 <= (sum of squares)/M.
    Fewer than two vectors is vacuously fine.
    """
    norms = as_norms_squared(norms_squared)
    if dimension < 1:
        raise ValueError(f"dimension {dimension} must be positive")
    if list(norms) != sorted(norms, reverse=True):
        raise ValueError("sequences must be non-increasing")
    if len(norms) < 2:
        return True
    bound = Fraction(sum(norms), dimension)
    return norms[0] + norms[1] <= bound
