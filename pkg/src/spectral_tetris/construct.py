"""Synthesis-matrix constructions.

All builders return a SynthesisMatrix: a sparse matrix whose columns are the
frame vectors written against the eigenbasis of the intended frame operator,
so row m must square-sum to the m-th eigenvalue and distinct rows must be
orthogonal. The real constructions carry exact radical entries; the DFT
route mixes in complex roots of unity.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .blocks import Block, block_a, block_a_hat, dft_block
from .errors import (
    DftPathStuck,
    Infeasible,
    NoSuchBlock,
    NotParseval,
    NotSTReady,
    ReorderFailed,
    Underdetermined,
)
from .exact_numeric import (
    ComplexRadicalEntry,
    MatrixEntry,
    ONE,
    RadicalScalar,
    ZERO,
    entry_abs_squared,
    entry_to_complex,
    to_float,
)
from .sequences import (
    as_norms_squared,
    as_spectrum,
    sfr_feasible,
    st_ready_search,
)

Key = Tuple[int, int]


@dataclass
class SynthesisMatrix:
    """Sparse M x N synthesis matrix against the frame-operator eigenbasis.

    entries maps (row, col) to a nonzero exact entry; anything absent is
    zero. meta carries construction by-products (swap logs, step traces,
    certificates) and is never serialized.
    """

    row_count: int
    col_count: int
    entries: Dict[Key, MatrixEntry]
    basis_note: str = "frame-operator eigenbasis"
    meta: Dict[str, object] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for (i, j), value in self.entries.items():
            if not (0 <= i < self.row_count and 0 <= j < self.col_count):
                raise ValueError(f"entry index ({i}, {j}) outside {self.row_count}x{self.col_count}")
            if not value:
                raise ValueError(f"stored zero entry at ({i}, {j})")

    def entry(self, row: int, col: int) -> MatrixEntry:
        return self.entries.get((row, col), ZERO)

    def column(self, col: int) -> Tuple[MatrixEntry, ...]:
        return tuple(self.entry(i, col) for i in range(self.row_count))

    def column_support(self, col: int) -> Tuple[int, ...]:
        return tuple(i for i in range(self.row_count) if (i, col) in self.entries)

    def column_norm_squared(self, col: int) -> RadicalScalar:
        total = ZERO
        for i in range(self.row_count):
            value = self.entries.get((i, col))
            if value is not None:
                total = total + entry_abs_squared(value)
        return total

    def rows(self) -> Iterator[Tuple[int, int, MatrixEntry]]:
        for (i, j), value in sorted(self.entries.items()):
            yield i, j, value

    @property
    def is_complex(self) -> bool:
        return any(isinstance(v, ComplexRadicalEntry) for v in self.entries.values())

    @property
    def nonzero_count(self) -> int:
        return len(self.entries)

    def to_dense(self) -> np.ndarray:
        if self.is_complex:
            dense = np.zeros((self.row_count, self.col_count), dtype=np.complex128)
            for (i, j), value in self.entries.items():
                dense[i, j] = entry_to_complex(value)
        else:
            dense = np.zeros((self.row_count, self.col_count), dtype=np.float64)
            for (i, j), value in self.entries.items():
                dense[i, j] = to_float(value)
        return dense

    def scale(self, factor: RadicalScalar) -> "SynthesisMatrix":
        """Multiply every entry by an exact nonnegative scalar."""
        if not factor:
            raise ValueError("scaling by zero would empty the matrix")
        scaled: Dict[Key, MatrixEntry] = {}
        for key, value in self.entries.items():
            if isinstance(value, ComplexRadicalEntry):
                scaled[key] = ComplexRadicalEntry.make(
                    value.modulus * factor, value.root_exponent, value.root_order
                )
            else:
                scaled[key] = value * factor
        return SynthesisMatrix(self.row_count, self.col_count, scaled, meta=dict(self.meta))


def column_maps(matrix: SynthesisMatrix) -> List[Dict[int, MatrixEntry]]:
    """Per-column {row: entry} views, built in one pass over the sparse entries."""
    columns: List[Dict[int, MatrixEntry]] = [dict() for _ in range(matrix.col_count)]
    for (row, col), value in matrix.entries.items():
        columns[col][row] = value
    return columns


def _place_block(entries: Dict[Key, MatrixEntry], block: Block, row: int, col: int) -> None:
    for i, block_row in enumerate(block.rows):
        for j, value in enumerate(block_row):
            if value:
                entries[(row + i, col + j)] = value


def pnstc(norms_squared: Sequence, spectrum: Sequence) -> SynthesisMatrix:
    """Prescribed-norms greedy construction over a fixed feeding order.

    Consumes the squared norms left to right, filling spectrum rows top to
    bottom: a norm fitting inside the remaining row weight becomes a
    singleton column; otherwise the current and next norms form a 2x2 block
    whose excess spills into the following row. Orders are taken as given;
    callers wanting a working order run st_ready_search first. Raises
    NotSTReady (with the failing step index) when the given order does not
    admit the construction.
    """
    norms = as_norms_squared(norms_squared)
    eigs = as_spectrum(spectrum)
    if sum(norms) != sum(eigs):
        raise NotSTReady(
            f"total squared norm {sum(norms)} differs from spectrum total {sum(eigs)}"
        )
    entries: Dict[Key, MatrixEntry] = {}
    remaining: List[Fraction] = list(eigs)
    col = 0
    step = 0
    for row in range(len(eigs)):
        while remaining[row] > 0:
            if col >= len(norms):
                raise NotSTReady(
                    f"row {row} still needs weight {remaining[row]} with no norms left",
                    step=step,
                )
            a = norms[col]
            if remaining[row] >= a:
                entries[(row, col)] = RadicalScalar.sqrt(a)
                remaining[row] -= a
                col += 1
            else:
                if col + 1 >= len(norms):
                    raise NotSTReady(
                        f"norm {a} exceeds remaining weight {remaining[row]} of row {row} "
                        "and has no partner for a block",
                        step=step,
                    )
                b = norms[col + 1]
                try:
                    block = block_a_hat(remaining[row], a, b)
                except NoSuchBlock as exc:
                    raise NotSTReady(
                        f"no 2x2 block for row weight {remaining[row]} with squared norms "
                        f"{a}, {b}: {exc}",
                        step=step,
                    ) from exc
                spill = a + b - remaining[row]
                if row + 1 >= len(eigs):
                    raise NotSTReady(
                        f"block would spill weight {spill} past the last row", step=step
                    )
                if spill > remaining[row + 1]:
                    raise NotSTReady(
                        f"block spill {spill} overshoots row {row + 1}, "
                        f"which can absorb only {remaining[row + 1]}",
                        step=step,
                    )
                _place_block(entries, block, row, col)
                remaining[row + 1] -= spill
                remaining[row] = 0
                col += 2
            step += 1
    if col < len(norms):
        raise NotSTReady(
            f"{len(norms) - col} norms left over after the last row was filled", step=step
        )
    return SynthesisMatrix(
        len(eigs), len(norms), entries, meta={"algorithm": "pnstc", "steps": step}
    )


def pnstc_str(
    norms_squared: Sequence, spectrum: Sequence
) -> Tuple[SynthesisMatrix, Tuple[Tuple[int, int], ...]]:
    """pnstc with systematic re-ordering of adjacent norms on block failure.

    Runs the same greedy loop; when the 2x2 block does not exist because the
    partner norm lies strictly below the remaining row weight, the two norms
    are swapped (the smaller one then fits as a singleton) and the step is
    retried. Returns the matrix together with the applied swaps as 0-based
    index pairs, in order; replaying them onto the input order yields an
    ordering on which plain pnstc reproduces the matrix. Raises
    ReorderFailed when swapping cannot unblock the construction.
    """
    norms = list(as_norms_squared(norms_squared))
    eigs = as_spectrum(spectrum)
    if sum(norms) != sum(eigs):
        raise ReorderFailed(
            f"re-ordering preserves the total squared norm, but {sum(norms)} != {sum(eigs)}"
        )
    entries: Dict[Key, MatrixEntry] = {}
    swaps: List[Tuple[int, int]] = []
    remaining: List[Fraction] = list(eigs)
    col = 0
    for row in range(len(eigs)):
        while remaining[row] > 0:
            if col >= len(norms):
                raise ReorderFailed(
                    f"row {row} still needs weight {remaining[row]} with no norms left"
                )
            a = norms[col]
            if remaining[row] >= a:
                entries[(row, col)] = RadicalScalar.sqrt(a)
                remaining[row] -= a
                col += 1
                continue
            if col + 1 >= len(norms):
                raise ReorderFailed(
                    f"last norm {a} exceeds remaining weight {remaining[row]} of row {row}"
                )
            b = norms[col + 1]
            if remaining[row] > b:
                # the block cannot exist; after the swap the smaller norm
                # fits as a singleton, so the loop always advances
                norms[col], norms[col + 1] = b, a
                swaps.append((col, col + 1))
                continue
            block = block_a_hat(remaining[row], a, b)
            spill = a + b - remaining[row]
            if row + 1 >= len(eigs):
                raise ReorderFailed(f"block would spill weight {spill} past the last row")
            if spill > remaining[row + 1]:
                raise ReorderFailed(
                    f"block spill {spill} overshoots row {row + 1}; "
                    "swapping adjacent norms cannot reduce it"
                )
            _place_block(entries, block, row, col)
            remaining[row + 1] -= spill
            remaining[row] = 0
            col += 2
    if col < len(norms):
        raise ReorderFailed(f"{len(norms) - col} norms left over after the last row")
    matrix = SynthesisMatrix(
        len(eigs),
        len(norms),
        entries,
        meta={"algorithm": "pnstc_str", "swaps": tuple(swaps)},
    )
    return matrix, tuple(swaps)


def sfr(spectrum: Sequence, count: int) -> SynthesisMatrix:
    """2-sparse unit-norm frame with the given spectrum, if any ordering works.

    Searches the distinct eigenvalue orderings for one whose floor partition
    certifies readiness, then runs pnstc with unit norms. Raises SumMismatch
    when the spectrum does not sum to count, Infeasible when no ordering
    admits the construction.
    """
    eigs = as_spectrum(spectrum)
    if count < 1:
        raise ValueError(f"frame size {count} must be positive")
    certificate = sfr_feasible(eigs, count)
    if certificate is None:
        raise Infeasible(
            f"no ordering of eigenvalues {tuple(eigs)} admits a 2-sparse unit-norm "
            f"frame of {count} vectors: every floor partition violates the spacing rules"
        )
    ordered = tuple(eigs[i] for i in certificate.eigenvalue_order)
    matrix = pnstc((Fraction(1),) * count, ordered)
    matrix.meta.update(
        algorithm="sfr",
        eigenvalue_order=certificate.eigenvalue_order,
        partition=certificate.partition,
    )
    return matrix


def construct_untf(dimension: int, count: int) -> SynthesisMatrix:
    """Sparse unit-norm tight frame of count vectors in dimension dims.

    Greedy left-to-right fill of the flat spectrum N/M: weight-1 singletons
    while a full unit fits in the row, then one 2x2 block for the fractional
    rest. Raises Underdetermined for count < dimension and Infeasible (citing
    the failed eigenvalue criterion) when the fill cannot complete.
    """
    if dimension < 1 or count < 1:
        raise ValueError("dimension and count must be positive")
    if count < dimension:
        raise Underdetermined(
            f"{count} vectors cannot span a space of dimension {dimension}"
        )
    eigenvalue = Fraction(count, dimension)

    def infeasible(detail: str) -> Infeasible:
        reduced = f"{eigenvalue.numerator}/{eigenvalue.denominator}"
        label = reduced if reduced == f"{count}/{dimension}" else f"{count}/{dimension} = {reduced}"
        return Infeasible(
            f"no sparse unit-norm tight frame of {count} vectors in dimension "
            f"{dimension}: eigenvalue {label} is neither an integer "
            f">= 2 nor of the form (2L-1)/L ({detail})"
        )

    entries: Dict[Key, MatrixEntry] = {}
    remaining: List[Fraction] = [eigenvalue] * dimension
    col = 0
    for row in range(dimension):
        while remaining[row] > 0:
            if col >= count:
                raise infeasible(f"row {row} ran out of columns")
            if remaining[row] >= 1:
                entries[(row, col)] = ONE
                remaining[row] -= 1
                col += 1
                continue
            if row + 1 >= dimension:
                raise infeasible(
                    f"fractional weight {remaining[row]} left in the last row"
                )
            spill = 2 - remaining[row]
            if spill > remaining[row + 1]:
                raise infeasible(
                    f"block spill {spill} overshoots row {row + 1}, "
                    f"which can absorb only {remaining[row + 1]}"
                )
            _place_block(entries, block_a(remaining[row]), row, col)
            remaining[row + 1] -= spill
            remaining[row] = 0
            col += 2
    if col < count:
        raise infeasible(f"{count - col} columns left over")
    return SynthesisMatrix(
        dimension, count, entries, meta={"algorithm": "untf", "eigenvalue": eigenvalue}
    )


def construct_untf_dft(dimension: int, count: int) -> SynthesisMatrix:
    """Unit-norm tight frame via square blocks of scaled roots of unity.

    Covers redundancies the 2x2 route cannot reach by spending a J x J block
    wherever a row's fractional remainder appears: the block's first row
    absorbs the entire remainder and each of the J-1 rows below pays an equal
    share of the rest. Singletons handle rows with remainder >= 2 or exactly
    1. Raises Underdetermined for count < dimension and DftPathStuck (with
    the step trace) when no block size fits.
    """
    if dimension < 1 or count < 1:
        raise ValueError("dimension and count must be positive")
    if count < dimension:
        raise Underdetermined(
            f"{count} vectors cannot span a space of dimension {dimension}"
        )
    eigenvalue = Fraction(count, dimension)
    entries: Dict[Key, MatrixEntry] = {}
    remaining: List[Fraction] = [eigenvalue] * dimension
    steps: List[Tuple[str, ...]] = []
    col = 0
    row = 0
    while col < count:
        if row >= dimension:
            raise DftPathStuck(
                f"columns {col}..{count - 1} remain but every row is exhausted",
                steps=tuple(steps),
            )
        rest = remaining[row]
        if rest == 0:
            row += 1
            continue
        if rest >= 2 or rest == 1:
            entries[(row, col)] = ONE
            remaining[row] -= 1
            steps.append(("singleton", f"row {row}", f"col {col}"))
            col += 1
            continue
        placed = False
        for size in range(2, dimension - row + 1):
            trailing = (size - rest) / Fraction(size - 1)
            if all(trailing <= remaining[row + i] for i in range(1, size)):
                block = dft_block(size, rest, trailing)
                _place_block(entries, block, row, col)
                for i in range(1, size):
                    remaining[row + i] -= trailing
                remaining[row] = 0
                steps.append((f"block J={size}", f"rows {row}..{row + size - 1}", f"col {col}"))
                col += size
                row += 1
                placed = True
                break
        if not placed:
            raise DftPathStuck(
                f"row {row} holds fractional weight {rest} but no block size "
                f"J <= {dimension - row} fits the rows below",
                steps=tuple(steps),
            )
    return SynthesisMatrix(
        dimension,
        count,
        entries,
        meta={"algorithm": "untf_dft", "eigenvalue": eigenvalue, "steps": tuple(steps)},
    )


def equal_norm_frame(
    spectrum: Sequence, count: int, budget: Optional[int] = None
) -> SynthesisMatrix:
    """Frame of count equal-norm vectors realizing the given spectrum.

    The common squared norm is forced to be (sum of eigenvalues)/count; the
    eigenvalue orderings are searched for a workable feeding order. Raises
    ValueError unless the spectrum is non-increasing, Infeasible when no
    ordering works for this count (a larger count may well work), and
    SearchBudgetExceeded when the search is cut off.
    """
    eigs = as_spectrum(spectrum)
    if any(eigs[i] < eigs[i + 1] for i in range(len(eigs) - 1)):
        raise ValueError("spectrum must be non-increasing")
    if count < 1:
        raise ValueError(f"frame size {count} must be positive")
    norm_squared = sum(eigs) / count
    norms = (norm_squared,) * count
    certificate = st_ready_search(norms, eigs, budget)
    if certificate is None:
        raise Infeasible(
            f"{count} vectors of squared norm {norm_squared} admit no Spectral-Tetris-ready "
            f"ordering for spectrum {tuple(eigs)}; a different count may work"
        )
    ordered = tuple(eigs[i] for i in certificate.eigenvalue_order)
    matrix = pnstc(norms, ordered)
    matrix.meta.update(
        algorithm="equal_norm",
        eigenvalue_order=certificate.eigenvalue_order,
        partition=certificate.partition,
    )
    return matrix


def naimark_complement(parseval: SynthesisMatrix) -> SynthesisMatrix:
    """(N-M) x N completion of a Parseval frame to an orthogonal N x N matrix.

    The complement rows span the orthogonal complement of the input's row
    space (computed numerically; such completions are not radical-representable
    in general), so stacking input over output gives pairwise-orthogonal
    equal-norm columns. Entries are stored as exact dyadic rationals read off
    the floating-point completion. Raises NotParseval unless the input rows
    are orthonormal to within 1e-10, ValueError on complex input.
    """
    if parseval.is_complex:
        raise ValueError("only real synthesis matrices can be complemented here")
    m, n = parseval.row_count, parseval.col_count
    if m > n:
        raise NotParseval(f"a {m}x{n} matrix with m > n cannot have orthonormal rows")
    dense = parseval.to_dense()
    gram = dense @ dense.T
    if m and np.max(np.abs(gram - np.eye(m))) > 1e-10:
        raise NotParseval(
            "rows are not orthonormal: max Gram deviation "
            f"{np.max(np.abs(gram - np.eye(m))):.3e} exceeds 1e-10"
        )
    if m == n:
        return SynthesisMatrix(0, n, {}, meta={"algorithm": "naimark", "exact": False})
    _, _, vh = np.linalg.svd(dense, full_matrices=True)
    completion = vh[m:]
    stacked = np.vstack([dense, completion])
    deviation = np.max(np.abs(stacked @ stacked.T - np.eye(n)))
    if deviation > 1e-10:
        raise NotParseval(
            f"completion self-check failed: stacked Gram deviates by {deviation:.3e}"
        )
    entries: Dict[Key, MatrixEntry] = {}
    for i in range(n - m):
        for j in range(n):
            value = completion[i, j]
            if value != 0.0:
                entries[(i, j)] = RadicalScalar.from_rational(Fraction(value))
    return SynthesisMatrix(
        n - m, n, entries, meta={"algorithm": "naimark", "exact": False}
    )
