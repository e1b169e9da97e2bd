"""Independent verification of synthesis matrices and fusion frames.

Real matrices are judged in exact radical arithmetic with zero tolerance.
As soon as complex entries are involved the checks drop to floating point
(tolerance 1e-12 for frames, 1e-10 for fusion operators) and the report is
flagged exact=False. verify_frame and verify_fusion never raise on
mathematical failures; every discrepancy becomes a field of the report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .construct import SynthesisMatrix, column_maps
from .errors import SpectrumMismatch
from .exact_numeric import (
    MatrixEntry,
    RadicalScalar,
    ZERO,
    entry_abs_squared,
)
from .fusion import FusionFrame
from .sequences import as_spectrum, maximal_block_number

COMPLEX_TOLERANCE = 1e-12
FUSION_TOLERANCE = 1e-10

#: Square sums are Fractions whenever they are exactly rational (always the
#: case for construction outputs) and floats only for adversarial input.
SquareSum = Union[Fraction, float]

SparseVector = Dict[int, MatrixEntry]


def _row_maps(matrix: SynthesisMatrix) -> List[SparseVector]:
    rows: List[SparseVector] = [dict() for _ in range(matrix.row_count)]
    for (i, j), value in matrix.entries.items():
        rows[i][j] = value
    return rows


def _sparse_inner(a: SparseVector, b: SparseVector) -> RadicalScalar:
    """Exact real inner product; only meaningful when no entry is complex."""
    if len(b) < len(a):
        a, b = b, a
    total = ZERO
    for index, value in a.items():
        other = b.get(index)
        if other is not None:
            total = total + value * other
    return total


def _square_sums(matrix: SynthesisMatrix) -> Tuple[List[RadicalScalar], List[RadicalScalar]]:
    """Exact row and column square sums in one sweep (exact on both paths)."""
    rows = [ZERO] * matrix.row_count
    cols = [ZERO] * matrix.col_count
    for (i, j), value in matrix.entries.items():
        squared = entry_abs_squared(value)
        rows[i] = rows[i] + squared
        cols[j] = cols[j] + squared
    return rows, cols


def _report_values(values: Sequence[RadicalScalar]) -> Tuple[SquareSum, ...]:
    if all(v.is_rational() for v in values):
        return tuple(v.rational_part() for v in values)
    return tuple(float(v) for v in values)


def _rows_exactly_orthogonal(matrix: SynthesisMatrix) -> bool:
    rows = _row_maps(matrix)
    for p in range(len(rows)):
        for q in range(p + 1, len(rows)):
            if _sparse_inner(rows[p], rows[q]):
                return False
    return True


def _exact_rank(rows: List[SparseVector], col_count: int) -> int:
    """Row rank by Gaussian elimination over the radical field."""
    work = [dict(row) for row in rows if row]
    rank = 0
    for col in range(col_count):
        pivot_index = next((k for k, row in enumerate(work) if col in row), None)
        if pivot_index is None:
            continue
        pivot = work.pop(pivot_index)
        rank += 1
        inverse = pivot[col].inverse()
        for row in work:
            factor = row.get(col)
            if factor is None:
                continue
            scale = factor * inverse
            for j, value in pivot.items():
                updated = row.get(j, ZERO) - scale * value
                if updated:
                    row[j] = updated
                else:
                    row.pop(j, None)
        work = [row for row in work if row]
        if not work:
            break
    return rank


@dataclass(frozen=True)
class FrameOperator:
    """AA*, exact on the real path, numeric (exact=False) with complex entries."""

    entries: Tuple[Tuple[Union[RadicalScalar, complex], ...], ...]
    exact: bool

    def is_diagonal(self, tolerance: float = COMPLEX_TOLERANCE) -> bool:
        for p, row in enumerate(self.entries):
            for q, value in enumerate(row):
                if p == q:
                    continue
                if self.exact:
                    if value:
                        return False
                elif abs(value) > tolerance:
                    return False
        return True

    def diagonal(self, tolerance: float = COMPLEX_TOLERANCE) -> Optional[Tuple[SquareSum, ...]]:
        """The spectrum, or None: eigenvalues are only read off a diagonal."""
        if not self.is_diagonal(tolerance):
            return None
        values = tuple(row[p] for p, row in enumerate(self.entries))
        if self.exact:
            return _report_values(values)
        return tuple(value.real for value in values)


def frame_operator(matrix: SynthesisMatrix) -> FrameOperator:
    """Gram matrix of the rows; the frame operator in the chosen eigenbasis."""
    if matrix.is_complex:
        dense = matrix.to_dense()
        gram = dense @ dense.conj().T
        return FrameOperator(tuple(tuple(row) for row in gram.tolist()), exact=False)
    rows = _row_maps(matrix)
    entries = tuple(
        tuple(_sparse_inner(rows[p], rows[q]) for q in range(matrix.row_count))
        for p in range(matrix.row_count)
    )
    return FrameOperator(entries, exact=True)


def orthogonality_distance(matrix: SynthesisMatrix) -> int:
    """Smallest d with every column pair at index distance >= d orthogonal.

    A nonzero column fails against itself at distance 0, so any nonzero
    matrix has d >= 1; the zero (or empty) matrix has d = 0.
    """
    count = matrix.col_count
    if matrix.is_complex:
        dense = matrix.to_dense()
        gram = np.abs(dense.conj().T @ dense)
        distance = 0
        for j in range(count):
            for k in range(j, count):
                if gram[j, k] > COMPLEX_TOLERANCE:
                    distance = max(distance, k - j + 1)
        return distance
    columns = column_maps(matrix)
    distance = 0
    for j in range(count):
        for k in range(j, count):
            if k - j + 1 <= distance:
                continue
            if _sparse_inner(columns[j], columns[k]):
                distance = k - j + 1
    return distance


def _sparsity_bound(row_sums: Sequence[RadicalScalar], col_count: int) -> Optional[int]:
    if not row_sums:
        return 0
    if any(not value.is_rational() or value.rational_part() <= 0 for value in row_sums):
        return None
    spectrum = [value.rational_part() for value in row_sums]
    mu = maximal_block_number(spectrum).mu
    return col_count + 2 * (len(row_sums) - mu)


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of verify_frame; immutable, one field per checked property.

    spectrum_matches and norms_match stay None unless the corresponding
    expected sequence was passed in. optimal_sparsity_bound is None only
    when the row sums are not positive rationals, where no bound applies.
    """

    is_frame: bool
    rows_orthogonal: bool
    row_square_sums: Tuple[SquareSum, ...]
    column_square_norms: Tuple[SquareSum, ...]
    is_tight: bool
    tight_bound: Optional[SquareSum]
    nonzero_count: int
    optimal_sparsity_bound: Optional[int]
    orthogonality_distance: int
    exact: bool
    spectrum_matches: Optional[bool] = None
    norms_match: Optional[bool] = None


def verify_frame(
    matrix: SynthesisMatrix,
    expected_spectrum: Optional[Sequence] = None,
    expected_norms: Optional[Sequence] = None,
) -> VerificationReport:
    """Full report on a synthesis matrix. Never raises; see the report fields.

    Expected values, when given, are compared exactly (square sums are exact
    rationals even on the complex path) and in order: row m against
    expected_spectrum[m], column n against expected_norms[n].
    """
    m, n = matrix.row_count, matrix.col_count
    exact = not matrix.is_complex
    row_sums, col_norms = _square_sums(matrix)

    if exact:
        rows_orthogonal = _rows_exactly_orthogonal(matrix)
    elif m == 0:
        rows_orthogonal = True
    else:
        dense = matrix.to_dense()
        gram = dense @ dense.conj().T
        off = gram - np.diag(np.diag(gram))
        rows_orthogonal = bool(np.max(np.abs(off)) <= COMPLEX_TOLERANCE)

    all_sums_equal = all(value == row_sums[0] for value in row_sums[1:]) if row_sums else True
    is_tight = rows_orthogonal and all_sums_equal
    tight_bound: Optional[SquareSum] = None
    if is_tight and m > 0:
        tight_bound = _report_values(row_sums[:1])[0]

    if m == 0:
        is_frame = True
    elif rows_orthogonal:
        is_frame = all(bool(value) for value in row_sums)
    elif exact:
        is_frame = _exact_rank(_row_maps(matrix), n) == m
    else:
        is_frame = int(np.linalg.matrix_rank(matrix.to_dense())) == m

    spectrum_matches: Optional[bool] = None
    if expected_spectrum is not None:
        expected = list(expected_spectrum)
        spectrum_matches = len(expected) == m and all(
            row_sums[i] == Fraction(expected[i]) for i in range(m)
        )
    norms_match: Optional[bool] = None
    if expected_norms is not None:
        expected = list(expected_norms)
        norms_match = len(expected) == n and all(
            col_norms[j] == Fraction(expected[j]) for j in range(n)
        )

    return VerificationReport(
        is_frame=is_frame,
        rows_orthogonal=rows_orthogonal,
        row_square_sums=_report_values(row_sums),
        column_square_norms=_report_values(col_norms),
        is_tight=is_tight,
        tight_bound=tight_bound,
        nonzero_count=matrix.nonzero_count,
        optimal_sparsity_bound=_sparsity_bound(row_sums, n),
        orthogonality_distance=orthogonality_distance(matrix),
        exact=exact,
        spectrum_matches=spectrum_matches,
        norms_match=norms_match,
    )


def sparsity_report(matrix: SynthesisMatrix, spectrum: Sequence) -> Tuple[int, int, bool]:
    """(nonzero count, optimal bound N + 2(M - mu), whether they coincide).

    The spectrum must equal the multiset of exact row square sums, else
    SpectrumMismatch: the sparsity bound is only meaningful for a matrix
    that actually carries that spectrum on its rows.
    """
    eigs = as_spectrum(spectrum)
    row_sums, _ = _square_sums(matrix)
    if len(eigs) != len(row_sums) or not all(v.is_rational() for v in row_sums):
        raise SpectrumMismatch("row square sums do not match the stated spectrum")
    if sorted(v.rational_part() for v in row_sums) != sorted(eigs):
        raise SpectrumMismatch("row square sums do not match the stated spectrum")
    mu = maximal_block_number(eigs).mu
    bound = matrix.col_count + 2 * (matrix.row_count - mu)
    count = matrix.nonzero_count
    return count, bound, count == bound


@dataclass(frozen=True)
class FusionReport:
    """Outcome of verify_fusion.

    On the exact route (real generator, rows orthogonal, every group
    orthogonal with squared norms equal to its squared weight) the spectrum
    is the exact row square sums in row order. Otherwise the fusion operator
    is assembled numerically from projections and the spectrum is its
    eigenvalues in non-increasing order, with exact=False.
    """

    is_frame: bool
    rows_orthogonal: bool
    groups_orthogonal: bool
    weights_consistent: bool
    subspace_dims: Tuple[int, ...]
    spectrum: Tuple[SquareSum, ...]
    lower_bound: Optional[SquareSum]
    upper_bound: Optional[SquareSum]
    exact: bool
    spectrum_matches: Optional[bool] = None


def _numeric_group_checks(
    dense: np.ndarray, reference: FusionFrame
) -> Tuple[bool, bool, List[int]]:
    orthogonal = True
    consistent = True
    dims: List[int] = []
    for group, weight_squared in zip(reference.partition, reference.weights_squared):
        block = dense[:, list(group)]
        gram = block.conj().T @ block
        off = gram - np.diag(np.diag(gram))
        if off.size and np.max(np.abs(off)) > FUSION_TOLERANCE:
            orthogonal = False
        if np.max(np.abs(np.diag(gram) - float(weight_squared))) > FUSION_TOLERANCE:
            consistent = False
        singular = np.linalg.svd(block, compute_uv=False)
        cutoff = FUSION_TOLERANCE * max(1.0, singular[0] if singular.size else 0.0)
        dims.append(int(np.sum(singular > cutoff)))
    return orthogonal, consistent, dims


def verify_fusion(
    reference: FusionFrame, expected_spectrum: Optional[Sequence] = None
) -> FusionReport:
    """Full report on a fusion frame. Never raises; see the report fields."""
    generator = reference.generator
    m = generator.row_count
    real = not generator.is_complex

    rows_orthogonal = groups_orthogonal = weights_consistent = False
    if real:
        columns = column_maps(generator)
        rows_orthogonal = _rows_exactly_orthogonal(generator)
        groups_orthogonal = True
        weights_consistent = True
        for group, weight_squared in zip(reference.partition, reference.weights_squared):
            for a in range(len(group)):
                norm = ZERO
                for row, value in columns[group[a]].items():
                    norm = norm + entry_abs_squared(value)
                if norm != weight_squared:
                    weights_consistent = False
                for b in range(a + 1, len(group)):
                    if _sparse_inner(columns[group[a]], columns[group[b]]):
                        groups_orthogonal = False

    row_sums, _ = _square_sums(generator)
    exact_route = (
        real
        and rows_orthogonal
        and groups_orthogonal
        and weights_consistent
        and all(v.is_rational() for v in row_sums)
    )

    if exact_route:
        spectrum = tuple(v.rational_part() for v in row_sums)
        spectrum_matches: Optional[bool] = None
        if expected_spectrum is not None:
            expected = list(expected_spectrum)
            spectrum_matches = len(expected) == m and all(
                spectrum[i] == Fraction(expected[i]) for i in range(m)
            )
        return FusionReport(
            is_frame=all(value > 0 for value in spectrum),
            rows_orthogonal=True,
            groups_orthogonal=True,
            weights_consistent=True,
            subspace_dims=reference.dims,
            spectrum=spectrum,
            lower_bound=min(spectrum) if spectrum else None,
            upper_bound=max(spectrum) if spectrum else None,
            exact=True,
            spectrum_matches=spectrum_matches,
        )

    dense = generator.to_dense()
    numeric_orthogonal, numeric_consistent, dims = _numeric_group_checks(dense, reference)
    if not real:
        gram = dense @ dense.conj().T
        off = gram - np.diag(np.diag(gram))
        rows_orthogonal = bool(off.size == 0 or np.max(np.abs(off)) <= FUSION_TOLERANCE)
        groups_orthogonal = numeric_orthogonal
        weights_consistent = numeric_consistent

    operator = np.zeros((m, m), dtype=dense.dtype)
    for group, weight_squared in zip(reference.partition, reference.weights_squared):
        block = dense[:, list(group)]
        u, singular, _ = np.linalg.svd(block, full_matrices=False)
        cutoff = FUSION_TOLERANCE * max(1.0, singular[0] if singular.size else 0.0)
        basis = u[:, singular > cutoff]
        operator = operator + float(weight_squared) * (basis @ basis.conj().T)
    eigenvalues = np.linalg.eigvalsh(operator)[::-1] if m else np.zeros(0)
    spectrum = tuple(float(value) for value in eigenvalues)

    spectrum_matches = None
    if expected_spectrum is not None:
        expected = sorted((float(Fraction(v)) for v in expected_spectrum), reverse=True)
        spectrum_matches = len(expected) == len(spectrum) and all(
            abs(expected[i] - spectrum[i]) <= FUSION_TOLERANCE for i in range(len(expected))
        )

    return FusionReport(
        is_frame=bool(m and spectrum[-1] > FUSION_TOLERANCE),
        rows_orthogonal=rows_orthogonal,
        groups_orthogonal=groups_orthogonal,
        weights_consistent=weights_consistent,
        subspace_dims=tuple(dims),
        spectrum=spectrum,
        lower_bound=spectrum[-1] if spectrum else None,
        upper_bound=spectrum[0] if spectrum else None,
        exact=False,
        spectrum_matches=spectrum_matches,
    )
