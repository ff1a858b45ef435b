"""setconc: exact set-function hierarchy classification, self-bounding
certification, and concentration-bound checking on the hypercube."""

from .setfn import (
    GroundSet,
    SetFunction,
    SymmetricSetFunction,
    additive,
    budget_additive,
    build_generator,
    cardinality_relu,
    cardinality_relu_symmetric,
    coverage,
    directed_cut,
    directed_edge,
    explicit_table,
    function_from_json,
    load_function,
    scaled_to_lipschitz,
    staircase,
    staircase_symmetric,
    three_element,
    uniform_matroid_rank,
)
from .hierarchy import (
    ClassReport,
    XosCertificate,
    XosViolation,
    classify,
    is_fractionally_subadditive,
    is_monotone,
    is_nonnegative,
    is_subadditive,
    is_submodular,
)
from .selfbound import (
    CertificationResult,
    SelfBoundingParams,
    SelfBoundingWitness,
    certify,
    min_extension,
    minimal_a,
    minimal_a_symmetric,
)
from .bounds import (
    SubadditiveTailBound,
    SubadditiveTailQuery,
    TailQuery,
    ab_lower,
    ab_upper,
    alt_upper,
    chernoff_lower,
    chernoff_upper,
    entropy_moment_bound,
    min_deviation_for_target,
    subadditive_tail,
)
from .dist import (
    BernoulliProduct,
    BoundSpec,
    Distribution,
    Moments,
    TailRow,
    exact_distribution,
    moments,
    sample,
    symmetric_distribution,
    tail_table,
)

__version__ = "0.1.0"
