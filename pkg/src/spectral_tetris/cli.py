"""Command-line surface: construct, verify, export, and sweep feasibility.

Every constructing command writes its result to a file (JSON by default,
CSV on request) and prints a verification report as JSON on stdout. Exit
codes: 0 on success, 2 when the instance is mathematically infeasible (the
printed message names the violated criterion), 1 on I/O, parse, or usage
problems. Output files are written atomically, so a failed run leaves no
partial artifacts behind.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import re
import sys
import tempfile
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from .construct import (
    SynthesisMatrix,
    construct_untf,
    construct_untf_dft,
    equal_norm_frame,
    naimark_complement,
    pnstc,
    pnstc_str,
    sfr,
)
from .errors import SpectralTetrisError
from .fusion import (
    FusionFrame,
    extend_to_tight,
    rff,
    sffr,
    uff,
    weighted_fusion,
)
from .json_io import (
    fusion_from_json,
    fusion_to_json,
    is_fusion_document,
    matrix_from_json,
    matrix_to_json,
    read_document,
    write_document,
)
from .sequences import untf_feasible
from .verify import verify_frame, verify_fusion

_RATIONAL_PATTERN = re.compile(r"[+-]?\d+(?:/\d+)?")


def rational(text: str) -> Fraction:
    """Exact CLI rational: an integer or p/q. Floats are rejected outright."""
    cleaned = text.strip()
    if not _RATIONAL_PATTERN.fullmatch(cleaned):
        raise argparse.ArgumentTypeError(
            f"expected an integer or p/q rational, got {text!r} (floats are not accepted)"
        )
    try:
        return Fraction(cleaned)
    except ZeroDivisionError:
        raise argparse.ArgumentTypeError(f"zero denominator in {text!r}")


@dataclass(frozen=True)
class JobSpec:
    """One parsed CLI invocation."""

    command: str
    parameters: Dict[str, object]
    output_path: Optional[str]
    format: str


def _printable(value):
    if isinstance(value, Fraction):
        return str(value)
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {
            field.name: _printable(getattr(value, field.name))
            for field in dataclasses.fields(value)
        }
    if isinstance(value, (tuple, list)):
        return [_printable(item) for item in value]
    return value


def _atomic_text(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    handle, staging = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(handle, "w") as stream:
            stream.write(text)
        os.replace(staging, path)
    except BaseException:
        os.unlink(staging)
        raise


def _matrix_csv(matrix: SynthesisMatrix) -> str:
    dense = matrix.to_dense()
    lines: List[str] = []
    for i in range(matrix.row_count):
        cells = []
        for j in range(matrix.col_count):
            value = dense[i, j]
            if matrix.is_complex:
                cells.append("%.17g%+.17gj" % (value.real, value.imag))
            else:
                cells.append("%.17g" % value)
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _output_path(job: JobSpec, extension: Optional[str] = None) -> str:
    if job.output_path:
        return job.output_path
    return f"{job.command}.{extension or job.format}"


def _emit(document: Dict[str, object]) -> int:
    print(json.dumps(document, indent=2))
    return 0


def _deliver_matrix(
    job: JobSpec,
    matrix: SynthesisMatrix,
    expected_spectrum: Optional[Sequence] = None,
    expected_norms: Optional[Sequence] = None,
) -> int:
    report = verify_frame(matrix, expected_spectrum, expected_norms)
    path = _output_path(job)
    if job.format == "csv":
        _atomic_text(path, _matrix_csv(matrix))
    else:
        write_document(path, matrix_to_json(matrix))
    return _emit({"output": path, "report": _printable(report)})


def _deliver_fusion(
    job: JobSpec, frame: FusionFrame, expected_spectrum: Optional[Sequence] = None
) -> int:
    report = verify_fusion(frame, expected_spectrum)
    path = _output_path(job)
    if job.format == "csv":
        _atomic_text(path, _matrix_csv(frame.generator))
    else:
        write_document(path, fusion_to_json(frame))
    return _emit({"output": path, "report": _printable(report)})


def _cmd_untf(job: JobSpec) -> int:
    dim = job.parameters["dim"]
    count = job.parameters["count"]
    matrix = construct_untf(dim, count)
    flat = [Fraction(count, dim)] * dim
    return _deliver_matrix(job, matrix, flat, [Fraction(1)] * count)


def _cmd_untf_dft(job: JobSpec) -> int:
    dim = job.parameters["dim"]
    count = job.parameters["count"]
    matrix = construct_untf_dft(dim, count)
    flat = [Fraction(count, dim)] * dim
    return _deliver_matrix(job, matrix, flat, [Fraction(1)] * count)


def _realized_order(matrix: SynthesisMatrix, spectrum: Sequence) -> List[Fraction]:
    """The requested eigenvalues, permuted the way the construction fed them.

    Searching constructions may realize the spectrum in a different row
    order (the multiset is unchanged); the verification report should not
    flag that as a mismatch.
    """
    order = matrix.meta.get("eigenvalue_order")
    if order is None:
        return list(spectrum)
    return [spectrum[i] for i in order]


def _cmd_sfr(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    matrix = sfr(spectrum, job.parameters["count"])
    return _deliver_matrix(
        job, matrix, _realized_order(matrix, spectrum), [Fraction(1)] * matrix.col_count
    )


def _cmd_pnstc(job: JobSpec) -> int:
    norms = job.parameters["norms_squared"]
    spectrum = job.parameters["spectrum"]
    matrix = pnstc(norms, spectrum)
    return _deliver_matrix(job, matrix, spectrum, norms)


def _cmd_pnstc_str(job: JobSpec) -> int:
    norms = job.parameters["norms_squared"]
    spectrum = job.parameters["spectrum"]
    matrix, swaps = pnstc_str(norms, spectrum)
    report = verify_frame(matrix, spectrum, None)
    path = _output_path(job)
    if job.format == "csv":
        _atomic_text(path, _matrix_csv(matrix))
    else:
        write_document(path, matrix_to_json(matrix))
    return _emit(
        {
            "output": path,
            "swaps": [list(swap) for swap in swaps],
            "report": _printable(report),
        }
    )


def _cmd_equal_norm(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    count = job.parameters["count"]
    matrix = equal_norm_frame(spectrum, count, job.parameters.get("budget"))
    shared = sum(spectrum, Fraction(0)) / count
    return _deliver_matrix(job, matrix, _realized_order(matrix, spectrum), [shared] * count)


def _cmd_naimark(job: JobSpec) -> int:
    matrix = matrix_from_json(read_document(job.parameters["input"]))
    return _deliver_matrix(job, naimark_complement(matrix))


def _cmd_sffr(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    frame = sffr(spectrum, job.parameters["subspaces"], job.parameters["subspace_dim"])
    return _deliver_fusion(job, frame, spectrum)


def _cmd_rff(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    frame = rff(spectrum, job.parameters["count"])
    return _deliver_fusion(job, frame, spectrum)


def _cmd_uff(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    frame = uff(spectrum, job.parameters["dims"])
    return _deliver_fusion(job, frame, spectrum)


def _cmd_weighted_fusion(job: JobSpec) -> int:
    spectrum = job.parameters["spectrum"]
    frame = weighted_fusion(
        job.parameters["weights_squared"],
        job.parameters["dims"],
        spectrum,
        job.parameters.get("budget"),
    )
    return _deliver_fusion(job, frame, spectrum)


def _cmd_extend_tight(job: JobSpec) -> int:
    frame = fusion_from_json(read_document(job.parameters["input"]))
    spectrum = job.parameters["spectrum"]
    bound, total, complement = extend_to_tight(frame, spectrum)
    document: Dict[str, object] = {
        "tight_bound": _printable(bound),
        "extended_count": total,
    }
    if complement is not None:
        path = _output_path(job)
        if job.format == "csv":
            _atomic_text(path, _matrix_csv(complement.generator))
        else:
            write_document(path, fusion_to_json(complement))
        document["output"] = path
        document["report"] = _printable(verify_fusion(complement))
    return _emit(document)


def _cmd_verify(job: JobSpec) -> int:
    document = read_document(job.parameters["input"])
    spectrum = job.parameters.get("spectrum")
    if is_fusion_document(document):
        report = verify_fusion(fusion_from_json(document), spectrum)
    else:
        report = verify_frame(
            matrix_from_json(document), spectrum, job.parameters.get("norms")
        )
    return _emit({"report": _printable(report)})


def _cmd_feasibility_grid(job: JobSpec) -> int:
    max_dim = job.parameters["max_dim"]
    max_count = job.parameters["max_count"]
    lines = ["m,n,feasible"]
    cells = 0
    for m in range(1, max_dim + 1):
        for n in range(m, max_count + 1):
            lines.append(f"{m},{n},{'true' if untf_feasible(m, n) else 'false'}")
            cells += 1
    path = _output_path(job, "csv")
    _atomic_text(path, "\n".join(lines) + "\n")
    return _emit({"output": path, "cells": cells})


_HANDLERS = {
    "untf": _cmd_untf,
    "untf-dft": _cmd_untf_dft,
    "sfr": _cmd_sfr,
    "pnstc": _cmd_pnstc,
    "pnstc-str": _cmd_pnstc_str,
    "equal-norm": _cmd_equal_norm,
    "naimark": _cmd_naimark,
    "sffr": _cmd_sffr,
    "rff": _cmd_rff,
    "uff": _cmd_uff,
    "weighted-fusion": _cmd_weighted_fusion,
    "extend-tight": _cmd_extend_tight,
    "verify": _cmd_verify,
    "feasibility-grid": _cmd_feasibility_grid,
}


def _add_output_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--output", help="output file (default: <command>.<format>)")
    parser.add_argument(
        "--format",
        choices=("json", "csv"),
        default="json",
        help="json is lossless; csv holds floats to 17 significant digits",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectral-tetris",
        description="Spectral Tetris constructions for frames and fusion frames.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    untf = commands.add_parser("untf", help="sparse unit-norm tight frame")
    untf.add_argument("--dim", type=int, required=True)
    untf.add_argument("--count", type=int, required=True)
    _add_output_options(untf)

    untf_dft = commands.add_parser(
        "untf-dft", help="unit-norm tight frame via DFT blocks (reaches low redundancies)"
    )
    untf_dft.add_argument("--dim", type=int, required=True)
    untf_dft.add_argument("--count", type=int, required=True)
    _add_output_options(untf_dft)

    sfr_cmd = commands.add_parser("sfr", help="sparse unit-norm frame for a spectrum")
    sfr_cmd.add_argument("--spectrum", type=rational, nargs="+", required=True)
    sfr_cmd.add_argument("--count", type=int, required=True)
    _add_output_options(sfr_cmd)

    for name, text in (
        ("pnstc", "prescribed norms and spectrum, in the given orders"),
        ("pnstc-str", "prescribed norms and spectrum, reordering norms on demand"),
    ):
        sub = commands.add_parser(name, help=text)
        sub.add_argument("--norms-squared", type=rational, nargs="+", required=True)
        sub.add_argument("--spectrum", type=rational, nargs="+", required=True)
        _add_output_options(sub)

    equal_norm = commands.add_parser(
        "equal-norm", help="equal-norm frame for a spectrum, searching orderings"
    )
    equal_norm.add_argument("--spectrum", type=rational, nargs="+", required=True)
    equal_norm.add_argument("--count", type=int, required=True)
    equal_norm.add_argument("--budget", type=int)
    _add_output_options(equal_norm)

    naimark = commands.add_parser("naimark", help="Naimark complement of a Parseval frame")
    naimark.add_argument("--input", required=True)
    _add_output_options(naimark)

    sffr_cmd = commands.add_parser("sffr", help="fusion frame with equal-dimension subspaces")
    sffr_cmd.add_argument("--spectrum", type=rational, nargs="+", required=True)
    sffr_cmd.add_argument("--subspaces", type=int, required=True)
    sffr_cmd.add_argument("--subspace-dim", type=int, required=True)
    _add_output_options(sffr_cmd)

    rff_cmd = commands.add_parser("rff", help="reference fusion frame (first-fit buckets)")
    rff_cmd.add_argument("--spectrum", type=rational, nargs="+", required=True)
    rff_cmd.add_argument("--count", type=int, required=True)
    _add_output_options(rff_cmd)

    uff_cmd = commands.add_parser("uff", help="fusion frame with prescribed dimensions")
    uff_cmd.add_argument("--spectrum", type=rational, nargs="+", required=True)
    uff_cmd.add_argument("--dims", type=int, nargs="+", required=True)
    _add_output_options(uff_cmd)

    weighted = commands.add_parser("weighted-fusion", help="weighted fusion frame")
    weighted.add_argument("--weights-squared", type=rational, nargs="+", required=True)
    weighted.add_argument("--dims", type=int, nargs="+", required=True)
    weighted.add_argument("--spectrum", type=rational, nargs="+", required=True)
    weighted.add_argument("--budget", type=int)
    _add_output_options(weighted)

    extend = commands.add_parser(
        "extend-tight", help="extend a fusion frame to a tight one"
    )
    extend.add_argument("--input", required=True)
    extend.add_argument("--spectrum", type=rational, nargs="+", required=True)
    _add_output_options(extend)

    verify = commands.add_parser("verify", help="verify a frame or fusion frame file")
    verify.add_argument("--input", required=True)
    verify.add_argument("--spectrum", type=rational, nargs="*")
    verify.add_argument("--norms", type=rational, nargs="*")

    grid = commands.add_parser(
        "feasibility-grid", help="CSV sweep of unit-norm tight-frame feasibility"
    )
    grid.add_argument("--max-dim", type=int, required=True)
    grid.add_argument("--max-count", type=int, required=True)
    grid.add_argument("--output", help="output CSV (default: feasibility-grid.csv)")

    return parser


def _job_from_args(args: argparse.Namespace) -> JobSpec:
    values = vars(args).copy()
    command = values.pop("command")
    output_path = values.pop("output", None)
    format_name = values.pop("format", "json")
    return JobSpec(command, values, output_path, format_name)


def run(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
    except SystemExit as stop:
        return 0 if stop.code == 0 else 1
    job = _job_from_args(args)
    try:
        return _HANDLERS[job.command](job)
    except SpectralTetrisError as failure:
        print(f"{type(failure).__name__}: {failure}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as failure:
        print(f"error: {failure}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
