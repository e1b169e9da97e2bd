"""Brute-force reference implementations the library must agree with.

These are deliberately written from the definitions alone, with no shared
code or shortcuts from the package: readiness enumerates every ordering and
every partition, the block number enumerates every permutation. Slow on
purpose; tests keep the sizes small.
"""

import itertools
from fractions import Fraction


def st_ready_oracle(norms_squared, spectrum) -> bool:
    """Exhaustive readiness check straight from the partition condition.

    Some ordering of the squared norms and of the eigenvalues must admit
    indices 0 <= n_1 < ... < n_M = N with, for every k < M,
    prefix_a(n_k) <= prefix_l(k) < prefix_a(n_k + 1), and whenever the left
    inequality is strict, a jump n_{k+1} - n_k >= 2 and the squared norm at
    position n_k + 2 (1-based) at least the gap.
    """
    norms = tuple(Fraction(v) for v in norms_squared)
    eigs = tuple(Fraction(v) for v in spectrum)
    if sum(norms) != sum(eigs):
        return False
    n_count, m_count = len(norms), len(eigs)
    if m_count == 1:
        return True
    cut_choices = list(itertools.combinations(range(n_count), m_count - 1))
    eig_orders = set(itertools.permutations(eigs))
    for norm_order in set(itertools.permutations(norms)):
        a_prefix = [Fraction(0)]
        for value in norm_order:
            a_prefix.append(a_prefix[-1] + value)
        for eig_order in eig_orders:
            l_prefix = list(itertools.accumulate(eig_order))
            for cuts in cut_choices:
                part = cuts + (n_count,)
                ok = True
                for k in range(m_count - 1):
                    n_k = part[k]
                    l_k = l_prefix[k]
                    if not (a_prefix[n_k] <= l_k < a_prefix[n_k + 1]):
                        ok = False
                        break
                    if a_prefix[n_k] < l_k:
                        if part[k + 1] - n_k < 2:
                            ok = False
                            break
                        if norm_order[n_k + 1] < l_k - a_prefix[n_k]:
                            ok = False
                            break
                if ok:
                    return True
    return False


def mu_oracle(spectrum) -> int:
    """Maximum number of integer partial sums over all permutations."""
    eigs = tuple(Fraction(v) for v in spectrum)
    best = 0
    for perm in set(itertools.permutations(eigs)):
        count = 0
        total = Fraction(0)
        for value in perm:
            total += value
            if total.denominator == 1:
                count += 1
        if count > best:
            best = count
    return best
