"""Spectral Tetris: sparse frames and fusion frames in exact arithmetic."""

from .blocks import Block, block_a, block_a_hat, dft_block
from .construct import (
    SynthesisMatrix,
    column_maps,
    construct_untf,
    construct_untf_dft,
    equal_norm_frame,
    naimark_complement,
    pnstc,
    pnstc_str,
    sfr,
)
from .errors import (
    BlockDomain,
    DftPathStuck,
    DomainError,
    Infeasible,
    InvalidPartition,
    NoExtension,
    NoSuchBlock,
    NotApplicable,
    NotParseval,
    NotSTReady,
    OutOfRange,
    ReorderFailed,
    SearchBudgetExceeded,
    SpectralTetrisError,
    SpectrumMismatch,
    SumMismatch,
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
from .fusion import (
    ChainPartition,
    FusionFrame,
    extend_to_tight,
    maximal_chains,
    naimark_complement_fusion,
    rff,
    sffr,
    spatial_complement_bounds,
    tight_uff_feasible,
    uff,
    weighted_fusion,
)
from .json_io import (
    fusion_from_json,
    fusion_to_json,
    matrix_from_json,
    matrix_to_json,
    read_document,
    write_document,
)
from .sequences import (
    BlockCount,
    STReadyCertificate,
    SfrCertificate,
    majorizes,
    maximal_block_number,
    pnstc_sufficient,
    search_budget,
    sfr_feasible,
    st_ready_check,
    st_ready_search,
    tight_sufficient,
    untf_feasible,
    untf_floor_condition,
)
from .verify import (
    FrameOperator,
    FusionReport,
    VerificationReport,
    frame_operator,
    orthogonality_distance,
    sparsity_report,
    verify_frame,
    verify_fusion,
)

__version__ = "0.1.0"

__all__ = [
    "Block",
    "BlockCount",
    "BlockDomain",
    "ChainPartition",
    "ComplexRadicalEntry",
    "DftPathStuck",
    "DomainError",
    "FrameOperator",
    "FusionFrame",
    "FusionReport",
    "Infeasible",
    "InvalidPartition",
    "MatrixEntry",
    "NoExtension",
    "NoSuchBlock",
    "NotApplicable",
    "NotParseval",
    "NotSTReady",
    "ONE",
    "OutOfRange",
    "RadicalScalar",
    "ReorderFailed",
    "STReadyCertificate",
    "SearchBudgetExceeded",
    "SfrCertificate",
    "SpectralTetrisError",
    "SpectrumMismatch",
    "SumMismatch",
    "SynthesisMatrix",
    "Underdetermined",
    "VerificationReport",
    "ZERO",
    "block_a",
    "block_a_hat",
    "column_maps",
    "construct_untf",
    "construct_untf_dft",
    "dft_block",
    "entry_abs_squared",
    "entry_to_complex",
    "equal_norm_frame",
    "extend_to_tight",
    "frame_operator",
    "fusion_from_json",
    "fusion_to_json",
    "majorizes",
    "matrix_from_json",
    "matrix_to_json",
    "maximal_block_number",
    "maximal_chains",
    "naimark_complement",
    "naimark_complement_fusion",
    "orthogonality_distance",
    "pnstc",
    "pnstc_str",
    "pnstc_sufficient",
    "read_document",
    "rff",
    "search_budget",
    "sffr",
    "sfr",
    "sfr_feasible",
    "sparsity_report",
    "spatial_complement_bounds",
    "st_ready_check",
    "st_ready_search",
    "tight_sufficient",
    "tight_uff_feasible",
    "to_float",
    "uff",
    "untf_feasible",
    "untf_floor_condition",
    "verify_frame",
    "verify_fusion",
    "weighted_fusion",
    "write_document",
]
