"""Deterministic transformations between finite sets of pure quantum states.

The package decides whether one set of pure states can be mapped onto
another by a completely positive, trace-preserving channel with unit
probability, builds an explicit Kraus-operator realization when it can,
and analyzes when superpositions survive the channel as pure states
(which forces the two sets to be unitarily related).
"""

from .coherence import (
    DECOHERING,
    DEFAULT_PURITY_TOL,
    UNITARY_RELATED,
    CoherenceReport,
    CoherenceRoundTrip,
    coherence_probe,
    coherence_roundtrip,
    purity,
    unitary_relation_test,
)
from .errors import (
    DetchanError,
    DimensionMismatchError,
    FingerprintMismatchError,
    IllConditionedError,
    InvalidDimensionsError,
    NotFeasibleError,
    NotFiniteError,
    NotHermitianError,
    NotIndependentError,
    NotNormalizedError,
    NotPSDError,
    NotSpanningError,
    SchemaError,
    SingularMatrixError,
    SizeMismatchError,
    SupportTooSmallError,
    UndefinedEntryError,
    ZeroVectorError,
)
from .feasibility import (
    FEASIBLE,
    INFEASIBLE,
    NECESSARY_ONLY,
    UNDETERMINED,
    FeasibilityReport,
    PairOverlap,
    RatioMatrix,
    build_ratio_matrix,
    distinguishability_audit,
    feasibility_check,
    witness_value,
)
from .numerics import (
    DEFAULT_COND_CEILING,
    DEFAULT_RANK_TOL,
    DEFAULT_TOL,
    EigenDecomposition,
    hermitian_eig,
    psd_check,
    psd_factor,
    solve_linear,
)
from .states import (
    DualSet,
    Independence,
    StateSet,
    Superposition,
    dual_states,
    fingerprint,
    gram,
    linear_independence,
    random_state_set,
    random_unitary,
    span_complement,
    span_duals,
    superpose,
)
from .synthesis import (
    KrausSet,
    TransformRecord,
    apply_channel,
    choi_output_trace,
    kraus_to_choi,
    state_to_density,
    synthesize,
    transform_report,
    validate_density,
    verify_completeness,
)

__version__ = "0.1.0"

__all__ = [
    "DECOHERING",
    "DEFAULT_COND_CEILING",
    "DEFAULT_PURITY_TOL",
    "DEFAULT_RANK_TOL",
    "DEFAULT_TOL",
    "FEASIBLE",
    "INFEASIBLE",
    "NECESSARY_ONLY",
    "UNDETERMINED",
    "UNITARY_RELATED",
    "CoherenceReport",
    "CoherenceRoundTrip",
    "DetchanError",
    "DimensionMismatchError",
    "DualSet",
    "EigenDecomposition",
    "FeasibilityReport",
    "FingerprintMismatchError",
    "IllConditionedError",
    "Independence",
    "InvalidDimensionsError",
    "KrausSet",
    "NotFeasibleError",
    "NotFiniteError",
    "NotHermitianError",
    "NotIndependentError",
    "NotNormalizedError",
    "NotPSDError",
    "NotSpanningError",
    "PairOverlap",
    "RatioMatrix",
    "SchemaError",
    "SingularMatrixError",
    "SizeMismatchError",
    "StateSet",
    "Superposition",
    "SupportTooSmallError",
    "TransformRecord",
    "UndefinedEntryError",
    "ZeroVectorError",
    "apply_channel",
    "build_ratio_matrix",
    "choi_output_trace",
    "coherence_probe",
    "coherence_roundtrip",
    "distinguishability_audit",
    "dual_states",
    "feasibility_check",
    "fingerprint",
    "gram",
    "hermitian_eig",
    "kraus_to_choi",
    "linear_independence",
    "psd_check",
    "psd_factor",
    "purity",
    "random_state_set",
    "random_unitary",
    "solve_linear",
    "span_complement",
    "span_duals",
    "state_to_density",
    "superpose",
    "synthesize",
    "transform_report",
    "unitary_relation_test",
    "validate_density",
    "verify_completeness",
    "witness_value",
]
