"""Feasibility layer: majorization, readiness, block counts, floor conditions."""

import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_tetris import (
    InvalidPartition,
    OutOfRange,
    SearchBudgetExceeded,
    SumMismatch,
    Underdetermined,
    majorizes,
    maximal_block_number,
    search_budget,
    sfr_feasible,
    st_ready_check,
    st_ready_search,
    pnstc_sufficient,
    tight_sufficient,
    untf_feasible,
    untf_floor_condition,
)
from spectral_tetris.sequences import (
    DEFAULT_SEARCH_BUDGET,
    SEARCH_BUDGET_ENV,
    _mu_greedy,
    as_norms_squared,
    as_spectrum,
)

from _oracles import mu_oracle, st_ready_oracle

small_values = st.sampled_from(
    [Fraction(1), Fraction(1, 2), Fraction(3, 2), Fraction(2), Fraction(3)]
)


def test_validators_reject_empty_and_nonpositive():
    with pytest.raises(ValueError):
        as_spectrum(())
    with pytest.raises(ValueError):
        as_spectrum((1, 0))
    with pytest.raises(ValueError):
        as_norms_squared((-1,))
    assert as_spectrum(("5/2", 1)) == (Fraction(5, 2), Fraction(1))


# -- majorization -----------------------------------------------------------


def test_majorizes_known_pairs():
    assert majorizes((18, 10, 6, 4, 2), (16, 9, 4, 4, 3, 2, 1, 1))
    assert majorizes((3,), (1, 1, 1))
    assert not majorizes((2, 2), (3, 1))
    assert not majorizes((2,), (1,))  # totals differ


def test_majorizes_ignores_input_order():
    assert majorizes((4, 2, 6), (3, 3, 3, 3))
    assert majorizes((2, 6, 4), (3, 3, 3, 3))


@given(st.lists(small_values, min_size=1, max_size=6))
def test_majorizes_is_reflexive(values):
    assert majorizes(values, values)


@given(st.lists(small_values, min_size=2, max_size=6), st.data())
def test_averaging_two_entries_is_majorized(values, data):
    i = data.draw(st.integers(0, len(values) - 1))
    j = data.draw(st.integers(0, len(values) - 1))
    if i == j:
        return
    mean = (values[i] + values[j]) / 2
    smoothed = list(values)
    smoothed[i] = smoothed[j] = mean
    assert majorizes(values, smoothed)


# -- readiness check and search ---------------------------------------------


def test_st_ready_check_accepts_the_working_order():
    norms = (16, 1, 4, 3, 1, 2, 9, 4)
    spectrum = (18, 6, 2, 10, 4)
    assert st_ready_check(norms, spectrum, (2, 4, 5, 7, 8))


def test_st_ready_check_rejects_a_short_jump():
    # the first cut sits strictly inside row 0's weight, so the next cut
    # must land at least two norms further on to leave room for the block
    norms = (16, 1, 4, 3, 1, 2, 9, 4)
    spectrum = (18, 6, 2, 10, 4)
    assert not st_ready_check(norms, spectrum, (2, 3, 5, 7, 8))


def test_st_ready_check_rejects_an_oversized_norm_everywhere():
    # 9 exceeds every row weight, so no cut placement can work
    bad = (4, 4, 9, 1)
    for cuts in itertools.combinations(range(4), 2):
        assert not st_ready_check(bad, (8, 6, 4), cuts + (4,))


def test_st_ready_check_single_row_reduces_to_totals():
    assert st_ready_check((1, 2), (3,), (2,))
    assert not st_ready_check((1, 1), (3,), (2,))


def test_st_ready_check_partition_validation():
    with pytest.raises(InvalidPartition):
        st_ready_check((1, 1), (1, 1), (1, 1))  # not strictly increasing
    with pytest.raises(InvalidPartition):
        st_ready_check((1, 1), (1, 1), (0, 1))  # endpoint is not N
    with pytest.raises(InvalidPartition):
        st_ready_check((1, 1), (1, 1), (2,))  # wrong length
    with pytest.raises(InvalidPartition):
        st_ready_check((1, 1), (1, 1), (0.0, 2))  # not integers


def test_st_ready_search_finds_a_certificate_for_the_mixed_multiset():
    norms = (3, 4, 3, 1, 4, 2)
    eigs = (9, 8)
    cert = st_ready_search(norms, eigs)
    assert cert is not None
    assert sorted(cert.norm_order) == [0, 1, 2, 3, 4, 5]
    assert sorted(cert.eigenvalue_order) == [0, 1]
    permuted_norms = tuple(Fraction(norms[i]) for i in cert.norm_order)
    permuted_eigs = tuple(Fraction(eigs[i]) for i in cert.eigenvalue_order)
    assert st_ready_check(permuted_norms, permuted_eigs, cert.partition)


def test_st_ready_search_never_leaves_a_row_without_its_own_column():
    # With norms (3/2, 3/2, 3/2) and eigenvalues ordered (3/2, 1, 2), a
    # two-column block can mechanically drain the middle row, but that row
    # would own no column and the partition would repeat a cut. The search
    # must skip that ordering and certify (1, 2, 3/2) instead.
    norms = (Fraction(3, 2),) * 3
    eigs = (Fraction(2), Fraction(3, 2), Fraction(1))
    cert = st_ready_search(norms, eigs)
    assert cert is not None
    assert all(a < b for a, b in zip(cert.partition, cert.partition[1:]))
    permuted_norms = tuple(norms[i] for i in cert.norm_order)
    permuted_eigs = tuple(eigs[i] for i in cert.eigenvalue_order)
    assert st_ready_check(permuted_norms, permuted_eigs, cert.partition)


def test_st_ready_search_rejects_an_oversized_norm():
    # a squared norm of 9 can neither sit in a row (every eigenvalue is
    # smaller) nor open a block (its spill would exceed the next row)
    assert st_ready_search((4, 4, 9, 1), (8, 6, 4)) is None
    assert not st_ready_oracle((4, 4, 9, 1), (8, 6, 4))


def test_st_ready_search_negative_despite_majorization():
    norms = (9, 9, 9, 1)
    spectrum = (Fraction(28, 3),) * 3
    assert majorizes(spectrum, norms)
    assert st_ready_search(norms, spectrum) is None
    assert not st_ready_oracle(norms, spectrum)


def test_st_ready_search_total_mismatch_is_none():
    assert st_ready_search((1, 1), (3,)) is None


def test_st_ready_search_budget_cutoff(monkeypatch):
    with pytest.raises(SearchBudgetExceeded):
        st_ready_search((1, 1, 1, 1), (2, 2), budget=0)
    monkeypatch.setenv(SEARCH_BUDGET_ENV, "0")
    with pytest.raises(SearchBudgetExceeded):
        st_ready_search((1, 1, 1, 1), (2, 2))
    # an explicit argument wins over the environment
    assert st_ready_search((1, 1, 1, 1), (2, 2), budget=10_000) is not None


def test_search_budget_resolution(monkeypatch):
    monkeypatch.delenv(SEARCH_BUDGET_ENV, raising=False)
    assert search_budget() == DEFAULT_SEARCH_BUDGET
    monkeypatch.setenv(SEARCH_BUDGET_ENV, "123")
    assert search_budget() == 123
    assert search_budget(7) == 7


@given(
    st.lists(small_values, min_size=1, max_size=5),
    st.lists(small_values, min_size=1, max_size=2),
)
@settings(max_examples=60, deadline=None)
def test_search_agrees_with_oracle_on_tiny_instances(norms, spectrum):
    found = st_ready_search(norms, spectrum)
    assert (found is not None) == st_ready_oracle(norms, spectrum)
    if found is not None:
        permuted_norms = tuple(Fraction(norms[i]) for i in found.norm_order)
        permuted_eigs = tuple(Fraction(spectrum[i]) for i in found.eigenvalue_order)
        assert st_ready_check(permuted_norms, permuted_eigs, found.partition)


# -- maximal block number ----------------------------------------------------


def test_block_number_flat_and_integer_spectra():
    assert maximal_block_number((Fraction(11, 4),) * 4).mu == 1
    assert maximal_block_number((18, 6, 2, 10, 4)).mu == 5
    assert maximal_block_number((Fraction(3, 2),) * 4).mu == 2
    assert maximal_block_number((Fraction(28, 3),) * 3).mu == 1


def test_block_number_greedy_counterexample_is_handled_exactly():
    # two disjoint triples {4,2,3}/9 sum to 1 each, but the lexicographically
    # first integer triple {4,4,1}/9 poisons the rest; the exact route must
    # not fall for it
    ninth = [Fraction(k, 9) for k in (4, 4, 1, 2, 3, 2, 3)]
    result = maximal_block_number(ninth)
    assert result.mu == 2 == mu_oracle(ninth)
    assert not result.heuristic
    assert _mu_greedy(tuple(ninth))[0] == 1


def test_block_number_permutation_achieves_the_count():
    spectrum = (Fraction(5, 2), Fraction(3, 2), Fraction(7, 3), Fraction(2, 3), 4)
    result = maximal_block_number(spectrum)
    assert not result.heuristic
    assert sorted(result.permutation) == list(range(5))
    running = Fraction(0)
    count = 0
    for index in result.permutation:
        running += Fraction(spectrum[index])
        if running.denominator == 1:
            count += 1
    assert count == result.mu == mu_oracle(spectrum)


def test_block_number_goes_heuristic_past_the_dp_cap():
    result = maximal_block_number((1,) * 9)
    assert result.heuristic
    assert result.mu == 9  # all-integer spectra are easy even for the greedy


@given(st.lists(st.fractions(min_value="1/3", max_value=3, max_denominator=3), min_size=1, max_size=5))
@settings(max_examples=60, deadline=None)
def test_block_number_matches_oracle(spectrum):
    result = maximal_block_number(spectrum)
    assert not result.heuristic
    assert result.mu == mu_oracle(spectrum)


# -- unit-norm tight frame feasibility ---------------------------------------


def test_untf_feasible_table():
    expected = {
        (4, 5): False,
        (4, 6): True,
        (4, 7): True,
        (4, 8): True,
        (3, 4): False,
        (3, 5): True,
        (5, 8): False,
        (5, 9): True,
        (1, 1): True,
        (1, 2): True,
    }
    for (dim, count), feasible in expected.items():
        assert untf_feasible(dim, count) is feasible, (dim, count)


def test_untf_feasible_input_errors():
    with pytest.raises(Underdetermined):
        untf_feasible(3, 2)
    with pytest.raises(ValueError):
        untf_feasible(0, 1)


def test_floor_condition_band_and_values():
    assert untf_floor_condition(4, 7)
    assert not untf_floor_condition(4, 5)
    with pytest.raises(OutOfRange):
        untf_floor_condition(4, 4)
    with pytest.raises(OutOfRange):
        untf_floor_condition(4, 8)


# -- 2-sparse frames with prescribed spectrum --------------------------------


def test_sfr_feasible_golden_partition():
    cert = sfr_feasible((Fraction(13, 3), Fraction(10, 3), Fraction(7, 3)), 10)
    assert cert is not None
    assert cert.partition == (4, 7, 10)
    assert cert.eigenvalue_order == (0, 1, 2)


def test_sfr_feasible_sum_mismatch():
    with pytest.raises(SumMismatch):
        sfr_feasible((1, 1), 3)


def test_sfr_feasible_none_when_every_order_jams():
    assert sfr_feasible((Fraction(1, 2), Fraction(1, 2), 1), 2) is None


# -- sufficient conditions ----------------------------------------------------


def test_pnstc_sufficient_accepts_the_reordering_example():
    assert pnstc_sufficient((1, 2, 3, 3, 4, 4), (8, 9))


def test_pnstc_sufficient_is_one_sided():
    # ready (place 9+1 then 9+1), yet the largest-pair test fails
    norms = (1, 1, 9, 9)
    assert not pnstc_sufficient(norms, (10, 10))
    assert st_ready_search(norms, (10, 10)) is not None


def test_pnstc_sufficient_requires_sorted_inputs():
    with pytest.raises(ValueError):
        pnstc_sufficient((2, 1), (3,))
    with pytest.raises(ValueError):
        pnstc_sufficient((1, 2), (3, 2))


def test_pnstc_sufficient_short_or_mismatched_sequences():
    assert not pnstc_sufficient((5,), (5,))  # fewer than 2M norms
    assert not pnstc_sufficient((1, 2), (1, 1))  # totals differ


def test_tight_sufficient():
    assert tight_sufficient((4, 4, 3, 3, 2, 2), 2)
    assert not tight_sufficient((4, 4, 3, 3, 2, 2), 3)
    assert tight_sufficient((5,), 1)
    with pytest.raises(ValueError):
        tight_sufficient((1, 2), 2)
    with pytest.raises(ValueError):
        tight_sufficient((2, 1), 0)
