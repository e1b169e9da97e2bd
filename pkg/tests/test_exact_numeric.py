"""Exact radical arithmetic: canonical forms, field operations, complex entries."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spectral_tetris import (
    ComplexRadicalEntry,
    DomainError,
    ONE,
    RadicalScalar,
    ZERO,
    entry_abs_squared,
    entry_to_complex,
    to_float,
)
from spectral_tetris.exact_numeric import radical_combine, radical_normalize

FLOAT_TOLERANCE = 1e-9


small_fractions = st.fractions(min_value=-5, max_value=5, max_denominator=9)
radicands = st.integers(min_value=1, max_value=30)
radical_scalars = st.lists(
    st.tuples(radicands, small_fractions), min_size=0, max_size=3
).map(RadicalScalar)


def test_sqrt_pulls_out_square_factors():
    assert RadicalScalar.sqrt(8).terms == ((2, Fraction(2)),)
    assert RadicalScalar.sqrt(Fraction(3, 8)).terms == ((6, Fraction(1, 4)),)
    assert RadicalScalar.sqrt(45).terms == ((5, Fraction(3)),)


def test_sqrt_of_perfect_square_is_rational():
    value = RadicalScalar.sqrt(Fraction(9, 4))
    assert value.is_rational()
    assert value.rational_part() == Fraction(3, 2)


def test_sqrt_zero_is_falsy_zero():
    assert RadicalScalar.sqrt(0) == ZERO
    assert not RadicalScalar.sqrt(0)


def test_sqrt_negative_refused():
    with pytest.raises(DomainError):
        RadicalScalar.sqrt(-1)


def test_constructor_rejects_nonpositive_radicand():
    with pytest.raises(DomainError):
        RadicalScalar([(0, Fraction(1))])
    with pytest.raises(DomainError):
        RadicalScalar([(-3, Fraction(1))])


def test_constructor_merges_equivalent_radicands():
    # sqrt(8) fed directly must land on the same canonical term as 2*sqrt(2)
    assert RadicalScalar([(8, 1)]) == RadicalScalar([(2, 2)])
    assert hash(RadicalScalar([(8, 1)])) == hash(RadicalScalar([(2, 2)]))


def test_cancellation_drops_terms():
    a = RadicalScalar.sqrt(2) + RadicalScalar.sqrt(3)
    assert (a - RadicalScalar.sqrt(3)).terms == RadicalScalar.sqrt(2).terms
    assert (a - a) == ZERO


def test_conjugate_product_is_rational():
    a = ONE + RadicalScalar.sqrt(2)
    b = ONE - RadicalScalar.sqrt(2)
    assert a * b == RadicalScalar.from_rational(-1)


def test_square_of_sum_expands():
    a = RadicalScalar.sqrt(2) + RadicalScalar.sqrt(3)
    expected = RadicalScalar.from_rational(5) + 2 * RadicalScalar.sqrt(6)
    assert a * a == expected


def test_rational_part_of_irrational_refused():
    with pytest.raises(DomainError):
        RadicalScalar.sqrt(2).rational_part()


def test_inverse_of_nested_sum():
    a = ONE + RadicalScalar.sqrt(2) + RadicalScalar.sqrt(3) + RadicalScalar.sqrt(6)
    assert a * a.inverse() == ONE


def test_inverse_of_zero_refused():
    with pytest.raises(ZeroDivisionError):
        ZERO.inverse()


def test_division_both_directions():
    a = RadicalScalar.sqrt(5)
    assert (1 / a) * a == ONE
    assert a / a == ONE
    assert (a / 2) == RadicalScalar([(5, Fraction(1, 2))])


def test_float_value():
    value = RadicalScalar.sqrt(2) + Fraction(1, 3)
    assert abs(float(value) - (math.sqrt(2) + 1 / 3)) < FLOAT_TOLERANCE


def test_mixing_with_plain_rationals():
    assert RadicalScalar.sqrt(2) + 0 == RadicalScalar.sqrt(2)
    assert 3 * RadicalScalar.sqrt(2) == RadicalScalar([(2, 3)])
    assert RadicalScalar.from_rational(Fraction(1, 2)) == Fraction(1, 2)
    with pytest.raises(TypeError):
        RadicalScalar.sqrt(2) + 0.5


@given(radical_scalars, radical_scalars, radical_scalars)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a + b == b + a
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@given(radical_scalars)
@settings(max_examples=40, deadline=None)
def test_nonzero_inverse_round_trips(a):
    if a:
        assert a * a.inverse() == ONE


@given(radical_scalars, radical_scalars)
def test_product_matches_float_arithmetic(a, b):
    exact = float(a * b)
    approx = float(a) * float(b)
    assert abs(exact - approx) <= FLOAT_TOLERANCE * (1 + abs(exact))


@given(radical_scalars, radical_scalars)
def test_equality_implies_equal_hash(a, b):
    if a == b:
        assert hash(a) == hash(b)


def test_complex_entry_phase_reduction():
    m = RadicalScalar.sqrt(Fraction(5, 12))
    assert ComplexRadicalEntry.make(m, 2, 6) == ComplexRadicalEntry.make(m, 1, 3)
    assert ComplexRadicalEntry.make(m, 4, 3) == ComplexRadicalEntry.make(m, 1, 3)


def test_complex_entry_real_phases_collapse():
    m = RadicalScalar.sqrt(2)
    assert ComplexRadicalEntry.make(m, 0, 5) == m
    assert ComplexRadicalEntry.make(m, 5, 5) == m
    assert ComplexRadicalEntry.make(m, 3, 6) == -m
    assert ComplexRadicalEntry.make(ZERO, 1, 3) == ZERO


def test_complex_entry_rejects_bad_order():
    with pytest.raises(DomainError):
        ComplexRadicalEntry.make(ONE, 1, 0)
    with pytest.raises(DomainError):
        ComplexRadicalEntry(ONE, 1, -2)


def test_complex_entry_numeric_value():
    entry = ComplexRadicalEntry.make(ONE, 1, 3)
    expected = complex(math.cos(2 * math.pi / 3), math.sin(2 * math.pi / 3))
    assert abs(complex(entry) - expected) < FLOAT_TOLERANCE
    assert entry_to_complex(entry) == complex(entry)


def test_complex_entry_abs_squared_is_exact():
    entry = ComplexRadicalEntry.make(RadicalScalar.sqrt(Fraction(5, 12)), 2, 3)
    assert entry.abs_squared() == Fraction(5, 12)
    assert entry_abs_squared(entry) == Fraction(5, 12)
    assert entry_abs_squared(-RadicalScalar.sqrt(3)) == 3


def test_to_float_refuses_complex_entries():
    entry = ComplexRadicalEntry.make(ONE, 1, 3)
    with pytest.raises(DomainError):
        to_float(entry)
    assert to_float(RadicalScalar.sqrt(2)) == pytest.approx(math.sqrt(2))
    assert entry_to_complex(RadicalScalar.sqrt(2)) == complex(math.sqrt(2), 0.0)


def test_radical_normalize_reduces():
    assert radical_normalize(3, Fraction(8, 9)) == RadicalScalar([(2, 2)])
    with pytest.raises(DomainError):
        radical_normalize(1, -2)


def test_radical_combine_dispatch():
    a, b = RadicalScalar.sqrt(2), RadicalScalar.sqrt(8)
    assert radical_combine(a, b, "add") == RadicalScalar([(2, 3)])
    assert radical_combine(a, b, "multiply") == RadicalScalar.from_rational(4)
    with pytest.raises(ValueError):
        radical_combine(a, b, "divide")
