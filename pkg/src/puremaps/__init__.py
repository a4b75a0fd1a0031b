"""Toolkit for transformations between pure-state spaces of block algebras.

Work happens in five layers: algebra (direct sums of matrix blocks and
their elements), states (pure states as phase-gauged rays), raymaps
(canonical and black-box transformations plus sampling-based
classification), wigner (fiberwise reconstruction of the inducing
isometries and the induced map on elements), and jordan / commutative
(structure checks for the induced linear maps, down to point maps of
finite sets).
"""

from .algebra import (
    AlgebraMismatch,
    AlgebraSpec,
    BlockOutOfRange,
    Element,
    EmptyDims,
    NonPositiveDim,
    add,
    adjoint,
    algebra_from_json,
    algebra_to_json,
    element_from_json,
    element_to_json,
    elements_close,
    identity,
    jordan_product,
    make_algebra,
    matrix_unit,
    matrix_units,
    mul,
    operator_norm,
    random_element,
    random_hermitian,
    scalar_mul,
    sub,
    trace,
    zero,
)
from .commutative import (
    NotStarHomomorphism,
    PointMap,
    composition_operator,
    extract_point_map,
    point_map_from_json,
    point_map_to_json,
)
from .jordan import (
    TAG_ANTI,
    TAG_MULT,
    KadisonSplit,
    LinearMapTable,
    NeitherMultNorAnti,
    NotBijective,
    NotProjectionPreserving,
    PreconditionFailed,
    block_assignment,
    check_trace_preservation,
    dual_pure_state_map,
    from_induced,
    is_jordan_star_homomorphism,
    kadison_split,
    random_jordan_iso,
    restrict_to_blocks,
    table_from_json,
    table_to_json,
    verify_isometry,
    verify_order_iso,
    verify_orthoisomorphism,
)
from .raymaps import (
    FAILS,
    HOLDS,
    KIND_ANTILINEAR,
    KIND_LINEAR,
    SOLID_STRUCTURAL,
    SOLID_UNVERIFIED,
    UNDETERMINED,
    BlackBoxRayMap,
    CanonicalFiber,
    CanonicalRayMap,
    ClassificationReport,
    NonIsometry,
    NotFibrePreserving,
    Verdict,
    as_blackbox,
    canonical_from_json,
    canonical_to_json,
    classify,
    fibre_assignment,
    replay_witness,
    report_to_json,
    verdict_to_json,
)
from .states import (
    DimensionMismatch,
    PureState,
    ZeroVector,
    basis_state,
    evaluate,
    is_orthogonal,
    make_pure_state,
    overlap,
    projection_witness,
    random_pure_state,
    same_ray,
    state_distance_oracle,
    state_from_json,
    state_to_json,
    transition_probability,
)
from .wigner import (
    KIND_INCONSISTENT,
    NON_ORTHONORMAL_IMAGES,
    PHASE_PROBE_MISMATCH,
    VALIDATION_FAILED,
    AlphaOutOfRange,
    AssemblyFailure,
    InducedMap,
    ReconstructionFailure,
    apply_induced,
    assemble,
    dim2_biorthogonal_not_tp,
    entrywise_conjugation,
    haar_isometry,
    random_canonical,
    reconstruct_fiber,
    verify_induction,
)

__all__ = [name for name in dir() if not name.startswith("_")]
