"""Fock-space realizations of a color superalgebra over deformed oscillators.

The package builds truncated matrix representations of deformed boson
algebras, assembles parity-restricted supercharge realizations of the
two-parameter graded superalgebra generated by H, Q10, Q01, Z, and verifies
every defining relation, spectrum formula, and degeneracy property either
exactly or to an explicit floating tolerance.
"""

from .exprlang import (
    Expr,
    ExprError,
    ExprEvalError,
    ExprSyntaxError,
    eval_expr,
    expr_params,
    has_sqrt,
    parse_expr,
    pretty,
    validate_structure_function,
)
from .fock import (
    FockRep,
    GuardBandReport,
    OscillatorSpec,
    ValidationError,
    bracket_kappa,
    build_fock_rep,
    guard_band_equal,
    structure_values,
    weight_values,
)
from .grading import (
    DegreeVector,
    GradedOperator,
    GradingError,
    check_antisymmetry,
    degree,
    degree_add,
    degree_dot,
    graded_bracket,
    graded_sign,
    jacobi_defect,
)
from .numerics import (
    Backend,
    BandMatrix,
    BackendMismatchError,
    DEFAULT_POLICY,
    DimensionMismatchError,
    ExactScalar,
    ExactnessError,
    MatrixComparison,
    NumericsError,
    TolerancePolicy,
    anticommutator,
    approx_equal_matrix,
    commutator,
    dense_matmul,
    parse_rational,
)
from .realizations import (
    DegeneracyReport,
    DegeneratePair,
    HermitianSet,
    RealizationSet,
    ReductionReport,
    SpectrumRow,
    SpectrumTable,
    cv_realization,
    degeneracy_pairs,
    exact_variant,
    gdoa_realization,
    hermitian_charges,
    pair_index,
    pair_partner,
    reduction_check,
    spectrum_H,
    spectrum_Z,
)
from .verify import (
    Exactness,
    RelationCheck,
    VerificationReport,
    merge_reports,
    run_all_suites,
    run_hermitian_suite,
    run_jacobi_suite,
    run_qform_suite,
    run_standard_susy_suite,
)

__version__ = "0.1.0"

__all__ = [
    "Backend",
    "BackendMismatchError",
    "BandMatrix",
    "DEFAULT_POLICY",
    "DegeneracyReport",
    "DegeneratePair",
    "DegreeVector",
    "DimensionMismatchError",
    "ExactScalar",
    "Exactness",
    "ExactnessError",
    "Expr",
    "ExprError",
    "ExprEvalError",
    "ExprSyntaxError",
    "FockRep",
    "GradedOperator",
    "GradingError",
    "GuardBandReport",
    "HermitianSet",
    "MatrixComparison",
    "NumericsError",
    "OscillatorSpec",
    "RealizationSet",
    "ReductionReport",
    "RelationCheck",
    "SpectrumRow",
    "SpectrumTable",
    "TolerancePolicy",
    "ValidationError",
    "VerificationReport",
    "anticommutator",
    "approx_equal_matrix",
    "bracket_kappa",
    "build_fock_rep",
    "check_antisymmetry",
    "commutator",
    "cv_realization",
    "degeneracy_pairs",
    "degree",
    "degree_add",
    "degree_dot",
    "dense_matmul",
    "eval_expr",
    "exact_variant",
    "expr_params",
    "gdoa_realization",
    "graded_bracket",
    "graded_sign",
    "guard_band_equal",
    "has_sqrt",
    "hermitian_charges",
    "jacobi_defect",
    "merge_reports",
    "pair_index",
    "pair_partner",
    "parse_expr",
    "parse_rational",
    "pretty",
    "reduction_check",
    "run_all_suites",
    "run_hermitian_suite",
    "run_jacobi_suite",
    "run_qform_suite",
    "run_standard_susy_suite",
    "spectrum_H",
    "spectrum_Z",
    "structure_values",
    "validate_structure_function",
    "weight_values",
]
