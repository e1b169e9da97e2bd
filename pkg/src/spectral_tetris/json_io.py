"""Lossless JSON encoding of synthesis matrices and fusion frames.

The document layout is fixed:

    {"m": int, "n": int, "complex": bool,
     "entries": [{"row": int, "col": int,
                  "terms": [{"num": int, "den": int, "rad": int}, ...],
                  "omega_num": int?, "omega_den": int?}, ...]}

Omitted entries are zero. An entry is the sum of its terms, each the
rational num/den times the square root of the positive integer rad; the
optional omega pair multiplies that modulus by exp(2*pi*i*omega_num/
omega_den) and appears only for genuinely complex phases. Fusion frames add
"partition" (lists of 0-based column indices) and "weights_sq" (squared
weights as {"num", "den"} objects). Rationals are never written as floats,
and the loader rejects floats outright, so a round trip is exact.
"""

from __future__ import annotations

import json
import os
import tempfile
from fractions import Fraction
from typing import Dict, List, Tuple

from .construct import SynthesisMatrix
from .errors import SpectralTetrisError
from .exact_numeric import ComplexRadicalEntry, MatrixEntry, RadicalScalar
from .fusion import FusionFrame


def _int_field(value, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ValueError(f"{label} must be an integer, got {value!r}")
    return value


def _fraction_field(value, label: str) -> Fraction:
    if not isinstance(value, dict):
        raise ValueError(f"{label} must be a num/den object, got {value!r}")
    num = _int_field(value.get("num"), f"{label}.num")
    den = _int_field(value.get("den"), f"{label}.den")
    if den == 0:
        raise ValueError(f"{label} has zero denominator")
    return Fraction(num, den)


def _terms_to_json(value: RadicalScalar) -> List[Dict[str, int]]:
    return [
        {"num": coefficient.numerator, "den": coefficient.denominator, "rad": radicand}
        for radicand, coefficient in value.terms
    ]


def _entry_to_json(row: int, col: int, value: MatrixEntry) -> Dict[str, object]:
    document: Dict[str, object] = {"row": row, "col": col}
    if isinstance(value, ComplexRadicalEntry):
        document["terms"] = _terms_to_json(value.modulus)
        document["omega_num"] = value.root_exponent
        document["omega_den"] = value.root_order
    else:
        document["terms"] = _terms_to_json(value)
    return document


def _entry_from_json(document) -> Tuple[int, int, MatrixEntry]:
    if not isinstance(document, dict):
        raise ValueError(f"entry must be an object, got {document!r}")
    row = _int_field(document.get("row"), "entry.row")
    col = _int_field(document.get("col"), "entry.col")
    terms = document.get("terms")
    if not isinstance(terms, list):
        raise ValueError(f"entry ({row}, {col}) needs a list of terms")
    pairs = []
    for term in terms:
        if not isinstance(term, dict):
            raise ValueError(f"entry ({row}, {col}) has a malformed term {term!r}")
        coefficient = _fraction_field(term, f"entry ({row}, {col}) term")
        radicand = _int_field(term.get("rad"), f"entry ({row}, {col}) term.rad")
        pairs.append((radicand, coefficient))
    try:
        modulus = RadicalScalar(pairs)
        if "omega_num" in document or "omega_den" in document:
            exponent = _int_field(document.get("omega_num"), "entry.omega_num")
            order = _int_field(document.get("omega_den"), "entry.omega_den")
            value: MatrixEntry = ComplexRadicalEntry.make(modulus, exponent, order)
        else:
            value = modulus
    except (SpectralTetrisError, ValueError, TypeError) as failure:
        raise ValueError(f"entry ({row}, {col}) is invalid: {failure}") from failure
    if not value:
        raise ValueError(f"entry ({row}, {col}) encodes an explicit zero")
    return row, col, value


def matrix_to_json(matrix: SynthesisMatrix) -> Dict[str, object]:
    return {
        "m": matrix.row_count,
        "n": matrix.col_count,
        "complex": matrix.is_complex,
        "entries": [
            _entry_to_json(row, col, value) for row, col, value in matrix.rows()
        ],
    }


def matrix_from_json(document) -> SynthesisMatrix:
    if not isinstance(document, dict):
        raise ValueError("matrix document must be an object")
    m = _int_field(document.get("m"), "m")
    n = _int_field(document.get("n"), "n")
    raw_entries = document.get("entries")
    if not isinstance(raw_entries, list):
        raise ValueError("entries must be a list")
    entries: Dict[Tuple[int, int], MatrixEntry] = {}
    for raw in raw_entries:
        row, col, value = _entry_from_json(raw)
        if (row, col) in entries:
            raise ValueError(f"duplicate entry at ({row}, {col})")
        entries[(row, col)] = value
    try:
        matrix = SynthesisMatrix(m, n, entries)
    except ValueError as failure:
        raise ValueError(f"invalid matrix: {failure}") from failure
    declared = document.get("complex")
    if not isinstance(declared, bool):
        raise ValueError("complex flag must be a boolean")
    if declared != matrix.is_complex:
        raise ValueError("complex flag does not match the entries")
    return matrix


def fusion_to_json(frame: FusionFrame) -> Dict[str, object]:
    document = matrix_to_json(frame.generator)
    document["partition"] = [list(group) for group in frame.partition]
    document["weights_sq"] = [
        {"num": weight.numerator, "den": weight.denominator}
        for weight in frame.weights_squared
    ]
    return document


def fusion_from_json(document) -> FusionFrame:
    matrix = matrix_from_json(document)
    raw_partition = document.get("partition")
    raw_weights = document.get("weights_sq")
    if not isinstance(raw_partition, list) or not isinstance(raw_weights, list):
        raise ValueError("fusion document needs partition and weights_sq lists")
    if len(raw_partition) != len(raw_weights):
        raise ValueError("partition and weights_sq must have the same length")
    partition = []
    for group in raw_partition:
        if not isinstance(group, list) or not group:
            raise ValueError(f"partition group {group!r} must be a nonempty list")
        partition.append(tuple(_int_field(col, "partition column") for col in group))
    weights = tuple(
        _fraction_field(weight, "weights_sq entry") for weight in raw_weights
    )
    dims = tuple(len(group) for group in partition)
    try:
        return FusionFrame(
            m=matrix.row_count,
            weights_squared=weights,
            dims=dims,
            generator=matrix,
            partition=tuple(partition),
        )
    except ValueError as failure:
        raise ValueError(f"invalid fusion frame: {failure}") from failure


def is_fusion_document(document) -> bool:
    """Files carrying a partition are fusion frames; plain matrices are not."""
    return isinstance(document, dict) and "partition" in document


def write_document(path: str, document: Dict[str, object]) -> None:
    """Serialize atomically: the file appears complete or not at all."""
    directory = os.path.dirname(os.path.abspath(path))
    handle, staging = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "w") as stream:
            json.dump(document, stream, indent=2)
            stream.write("\n")
        os.replace(staging, path)
    except BaseException:
        os.unlink(staging)
        raise


def read_document(path: str):
    with open(path, "r") as stream:
        try:
            return json.load(stream)
        except json.JSONDecodeError as failure:
            raise ValueError(f"{path} is not valid JSON: {failure}") from failure
