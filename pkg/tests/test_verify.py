"""Verification engine: reports, frame operators, sparsity, fusion routes."""

from fractions import Fraction

import pytest

from spectral_tetris import (
    FusionFrame,
    RadicalScalar,
    SpectrumMismatch,
    SynthesisMatrix,
    construct_untf,
    construct_untf_dft,
    frame_operator,
    orthogonality_distance,
    sffr,
    sparsity_report,
    uff,
    verify_frame,
    verify_fusion,
    weighted_fusion,
)

import goldens
from goldens import ONE, rat, sq

NUMERIC_TOLERANCE = 1e-9


def alt_4x9():
    return SynthesisMatrix(4, 9, dict(goldens.ALT_4x9))


# -- frame reports ---------------------------------------------------------------


def test_verify_frame_full_golden_report():
    matrix = construct_untf(4, 11)
    report = verify_frame(
        matrix,
        expected_spectrum=(Fraction(11, 4),) * 4,
        expected_norms=(1,) * 11,
    )
    assert report.is_frame
    assert report.rows_orthogonal
    assert report.is_tight
    assert report.exact
    assert report.tight_bound == Fraction(11, 4)
    assert report.row_square_sums == (Fraction(11, 4),) * 4
    assert report.column_square_norms == (Fraction(1),) * 11
    assert report.nonzero_count == 17
    assert report.optimal_sparsity_bound == 17
    assert report.orthogonality_distance == 5
    assert report.spectrum_matches
    assert report.norms_match


def test_verify_frame_flags_wrong_expectations():
    matrix = construct_untf(4, 11)
    report = verify_frame(matrix, expected_spectrum=(3,) * 4, expected_norms=(1,) * 10)
    assert report.spectrum_matches is False
    assert report.norms_match is False  # length mismatch alone must fail
    silent = verify_frame(matrix)
    assert silent.spectrum_matches is None
    assert silent.norms_match is None


def test_verify_frame_detects_a_perturbed_entry():
    entries = dict(goldens.UNTF_4x11)
    entries[(1, 2)] = ONE  # was sqrt(5/8); rows 0 and 1 now collide
    report = verify_frame(SynthesisMatrix(4, 11, entries))
    assert not report.rows_orthogonal
    assert not report.is_tight
    assert report.tight_bound is None
    assert report.exact


def test_verify_frame_rank_fallback_for_oblique_rows():
    # rows overlap yet still span, so the frame flag must come from rank
    matrix = SynthesisMatrix(2, 2, {(0, 0): ONE, (0, 1): ONE, (1, 1): ONE})
    report = verify_frame(matrix)
    assert not report.rows_orthogonal
    assert report.is_frame
    assert not report.is_tight
    assert report.row_square_sums == (Fraction(2), Fraction(1))


def test_verify_frame_empty_matrix_is_vacuously_tight():
    report = verify_frame(SynthesisMatrix(0, 0, {}))
    assert report.is_frame
    assert report.rows_orthogonal
    assert report.is_tight
    assert report.tight_bound is None
    assert report.orthogonality_distance == 0
    assert report.optimal_sparsity_bound == 0


def test_verify_frame_zero_rows_are_not_a_frame():
    matrix = SynthesisMatrix(2, 2, {(0, 0): ONE, (0, 1): ONE})
    report = verify_frame(matrix)
    assert report.rows_orthogonal  # an all-zero row is orthogonal to anything
    assert not report.is_frame
    assert not report.is_tight  # row sums 2 and 0 differ


def test_verify_frame_dft_report_keeps_exact_sums():
    matrix = construct_untf_dft(4, 5)
    report = verify_frame(matrix, expected_spectrum=(Fraction(5, 4),) * 4)
    assert not report.exact
    assert report.rows_orthogonal
    assert report.is_tight
    assert report.tight_bound == Fraction(5, 4)
    assert report.row_square_sums == (Fraction(5, 4),) * 4
    assert report.column_square_norms == (Fraction(1),) * 5
    assert report.spectrum_matches
    assert report.is_frame


# -- frame operator ----------------------------------------------------------------


def test_frame_operator_diagonal_on_the_golden():
    operator = frame_operator(construct_untf(4, 11))
    assert operator.exact
    assert operator.is_diagonal()
    assert operator.diagonal() == (Fraction(11, 4),) * 4


def test_frame_operator_off_diagonal_reports_none():
    matrix = SynthesisMatrix(2, 2, {(0, 0): ONE, (0, 1): ONE, (1, 1): ONE})
    operator = frame_operator(matrix)
    assert operator.exact
    assert not operator.is_diagonal()
    assert operator.diagonal() is None
    assert operator.entries[0][1] == RadicalScalar.from_rational(1)


def test_frame_operator_complex_path_is_numeric():
    operator = frame_operator(construct_untf_dft(4, 5))
    assert not operator.exact
    assert operator.is_diagonal()
    diagonal = operator.diagonal()
    assert all(abs(value - 1.25) < NUMERIC_TOLERANCE for value in diagonal)


# -- orthogonality distance ----------------------------------------------------------


def test_orthogonality_distance_small_cases():
    identity = SynthesisMatrix(2, 2, {(0, 0): ONE, (1, 1): ONE})
    assert orthogonality_distance(identity) == 1
    repeated = SynthesisMatrix(1, 3, {(0, j): ONE for j in range(3)})
    assert orthogonality_distance(repeated) == 3
    assert orthogonality_distance(SynthesisMatrix(0, 0, {})) == 0


def test_orthogonality_distance_of_the_hand_made_frame():
    # the alternative 4x9 frame pairs columns 1 and 6 through row 1, so its
    # distance exceeds the floor(N/M) + 3 guarantee of the staircase form
    assert orthogonality_distance(alt_4x9()) == 6


def test_orthogonality_distance_respects_cancellation():
    value = sq("1/2")
    matrix = SynthesisMatrix(
        2, 2, {(0, 0): value, (1, 0): value, (0, 1): value, (1, 1): -value}
    )
    assert orthogonality_distance(matrix) == 1  # adjacent columns cancel exactly


# -- sparsity reports ------------------------------------------------------------------


def test_sparsity_report_golden_and_fixtures():
    assert sparsity_report(construct_untf(4, 11), (Fraction(11, 4),) * 4) == (17, 17, True)
    assert sparsity_report(construct_untf(4, 9), (Fraction(9, 4),) * 4) == (15, 15, True)
    assert sparsity_report(alt_4x9(), (Fraction(9, 4),) * 4) == (15, 15, True)


def test_sparsity_report_accepts_permuted_spectrum():
    matrix = construct_untf(4, 11)
    count, bound, optimal = sparsity_report(matrix, (Fraction(11, 4),) * 4)
    assert (count, bound, optimal) == (17, 17, True)


def test_sparsity_report_rejects_wrong_spectrum():
    matrix = construct_untf(4, 11)
    with pytest.raises(SpectrumMismatch):
        sparsity_report(matrix, (3,) * 4)
    with pytest.raises(SpectrumMismatch):
        sparsity_report(matrix, (Fraction(11, 4),) * 3)


def test_sparsity_bound_none_for_nonpositive_rows():
    matrix = SynthesisMatrix(2, 2, {(0, 0): ONE, (0, 1): ONE})
    report = verify_frame(matrix)
    assert report.optimal_sparsity_bound is None  # a zero row has no bound


# -- fusion reports ----------------------------------------------------------------------


def test_verify_fusion_exact_route_on_uff():
    frame = uff((Fraction(11, 4),) * 4, (3, 3, 2, 1, 1, 1))
    report = verify_fusion(frame, (Fraction(11, 4),) * 4)
    assert report.exact
    assert report.rows_orthogonal
    assert report.groups_orthogonal
    assert report.weights_consistent
    assert report.spectrum == (Fraction(11, 4),) * 4
    assert report.lower_bound == report.upper_bound == Fraction(11, 4)
    assert report.spectrum_matches


def test_verify_fusion_numeric_route_on_the_walkthrough():
    # the round-robin groups are oblique, so the report drops to floats but
    # the fusion operator still carries the requested spectrum
    frame = sffr(goldens.SFFR_SPECTRUM, 5, 2)
    report = verify_fusion(frame, goldens.SFFR_SPECTRUM)
    assert not report.exact
    assert report.rows_orthogonal
    assert not report.groups_orthogonal
    assert report.weights_consistent
    assert report.subspace_dims == (2,) * 5
    assert report.is_frame
    assert report.spectrum_matches
    expected = sorted((float(rat(v)) for v in goldens.SFFR_SPECTRUM), reverse=True)
    assert all(
        abs(seen - want) < NUMERIC_TOLERANCE
        for seen, want in zip(report.spectrum, expected)
    )
    assert abs(sum(report.spectrum) - 10.0) < NUMERIC_TOLERANCE


def test_verify_fusion_complex_generator():
    matrix = construct_untf_dft(4, 5)
    frame = FusionFrame(
        4, (Fraction(1),) * 5, (1,) * 5, matrix, tuple((j,) for j in range(5))
    )
    report = verify_fusion(frame, (Fraction(5, 4),) * 4)
    assert not report.exact
    assert report.rows_orthogonal
    assert report.groups_orthogonal
    assert report.weights_consistent
    assert report.subspace_dims == (1, 1, 1, 1, 1)
    assert report.spectrum_matches
    assert report.is_frame


def test_verify_fusion_flags_inconsistent_weights():
    frame = uff((Fraction(11, 4),) * 4, (3, 3, 2, 1, 1, 1))
    relabeled = FusionFrame(
        frame.m,
        (Fraction(2),) + (Fraction(1),) * 5,
        frame.dims,
        frame.generator,
        frame.partition,
    )
    report = verify_fusion(relabeled)
    assert not report.weights_consistent
    assert report.spectrum_matches is None


def test_verify_fusion_spectrum_check_is_order_free_numerically():
    # numeric-route comparison sorts both sides before matching
    frame = sffr(goldens.SFFR_SPECTRUM, 5, 2)
    shuffled = (goldens.SFFR_SPECTRUM[2], goldens.SFFR_SPECTRUM[0], goldens.SFFR_SPECTRUM[1])
    assert verify_fusion(frame, shuffled).spectrum_matches


def test_verify_fusion_exact_spectrum_check_is_in_row_order():
    frame = weighted_fusion(
        goldens.WEIGHTED_WEIGHTS_SQ, goldens.WEIGHTED_DIMS, goldens.WEIGHTED_SPECTRUM
    )
    assert verify_fusion(frame, goldens.WEIGHTED_SPECTRUM).spectrum_matches
    backwards = tuple(reversed(goldens.WEIGHTED_SPECTRUM))
    assert verify_fusion(frame, backwards).spectrum_matches is False
