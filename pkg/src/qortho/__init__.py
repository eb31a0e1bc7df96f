"""Basic-hypergeometric orthogonal polynomial families on q-lattices.

Construct seven-parameter families of the q-Askey scheme, compute their
discrete-orthogonality nodes and weights as convergent q-series, derive
three-term recurrence coefficients by three independent routes, and verify
the orthogonality numerically at any working precision.
"""

from .connection import (
    ConnectionMatrices,
    EigenResidual,
    RecurrenceCoefficients,
    ROUTES,
    abs_alpha,
    abs_beta,
    connection_matrices,
    eigen_residual,
    moments,
    polynomial_values,
    recurrence_coefficients,
    yz_alpha,
    yz_beta,
    yz_connection_entry,
)
from .errors import (
    CoincidentEigenvalues,
    ConstraintViolation,
    DegenerateFamily,
    DegenerateNorm,
    IndexOutOfRange,
    InsufficientNodes,
    InvalidCase,
    InvalidZeroPattern,
    NoConvergence,
    NotApplicable,
    QOrthoError,
    ZeroDenominator,
)
from .lattice import (
    FamilyParameters,
    SequenceSet,
    ValidationReport,
    Violation,
    build_sequences,
    newton_eval,
    newton_node_derivative,
    validate_family,
)
from .presets import PresetDescriptor, instantiate, list_presets
from .qnum import (
    DOUBLE_PRECISION,
    QContext,
    SeriesResult,
    q_pochhammer,
    sum_tail_bounded,
)
from .reparam import (
    ALL_CASES,
    CanonicalParameters,
    EquivalenceFamily,
    P_CASES,
    Y_CASES,
    canonicalize,
    equivalent_vectors,
    expand,
    invert_q,
)
from .verify import OrthogonalityReport, gram_matrix, moment_reconstruction
from .weights import (
    CoefficientCheckReport,
    RhoGenerator,
    WeightTable,
    coefficient_checks,
    generator_for,
    mu,
    rho,
    rho_generator,
    rho_raw,
    weight,
    weight_table,
)

__version__ = "1.0.0"

__all__ = [
    "ALL_CASES",
    "CanonicalParameters",
    "CoefficientCheckReport",
    "CoincidentEigenvalues",
    "ConnectionMatrices",
    "ConstraintViolation",
    "DOUBLE_PRECISION",
    "DegenerateFamily",
    "DegenerateNorm",
    "EigenResidual",
    "EquivalenceFamily",
    "FamilyParameters",
    "IndexOutOfRange",
    "InsufficientNodes",
    "InvalidCase",
    "InvalidZeroPattern",
    "NoConvergence",
    "NotApplicable",
    "OrthogonalityReport",
    "P_CASES",
    "PresetDescriptor",
    "QContext",
    "QOrthoError",
    "ROUTES",
    "RecurrenceCoefficients",
    "RhoGenerator",
    "SequenceSet",
    "SeriesResult",
    "ValidationReport",
    "Violation",
    "WeightTable",
    "Y_CASES",
    "ZeroDenominator",
    "abs_alpha",
    "abs_beta",
    "build_sequences",
    "canonicalize",
    "coefficient_checks",
    "connection_matrices",
    "eigen_residual",
    "equivalent_vectors",
    "expand",
    "generator_for",
    "gram_matrix",
    "instantiate",
    "invert_q",
    "list_presets",
    "moment_reconstruction",
    "moments",
    "mu",
    "newton_eval",
    "newton_node_derivative",
    "polynomial_values",
    "q_pochhammer",
    "recurrence_coefficients",
    "rho",
    "rho_generator",
    "rho_raw",
    "sum_tail_bounded",
    "validate_family",
    "weight",
    "weight_table",
    "yz_alpha",
    "yz_beta",
    "yz_connection_entry",
]
