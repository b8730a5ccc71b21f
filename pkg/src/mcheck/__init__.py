"""mcheck: linear-time nonsingular M-matrix testing for weakly diagonally
dominant matrices, via the index of contraction of the point Jacobi matrix."""

from .contraction import (
    BfsWorkspace,
    SequenceIndex,
    index_by_brute_force,
    index_of_contraction,
    index_of_contraction_dense,
    is_contraction_power,
    prefix_product_norms,
    scc_normal_form,
    sequence_index,
)
from .errors import (
    IncompatibleDimensions,
    IndexOutOfRange,
    InvalidArgs,
    InvalidConfig,
    IoError,
    McheckError,
    NonFiniteValue,
    NotL0,
    NotSquare,
    NotSubstochastic,
    NotWdd,
    OrderTooLargeForFloat,
    OrderTooLargeForOracle,
    ParseError,
    ToleranceTooSmall,
    UnsupportedHeader,
)
from .matcore import (
    EPS,
    PLAIN_SUMMATION_CUTOFF,
    ContractionIndex,
    CsrMatrix,
    DenseMatrix,
    RowClass,
    SubstochasticReport,
    Tolerance,
    classify_rows,
    csr_from_dense,
    csr_from_triplets,
    default_tolerance,
    gamma,
    graph_edges,
    validate_substochastic,
)
from .mmio import MatrixMarketHeader, read_matrix_market, write_matrix_market
from .mtest import (
    MatrixVerdict,
    WddRowClass,
    classify_dominance,
    con_index,
    is_nonsingular_m_matrix,
    is_nonsingular_m_matrix_dense,
    is_wcdd,
    monotone_oracle,
    point_jacobi,
    predicates,
)
from .sampler import (
    SampleConfig,
    dirichlet_uniform,
    sample_substochastic,
    sample_wdd_l0,
    sample_without_replacement,
)

__version__ = "0.1.0"
