"""revineq: verification and sharp-constant estimation for reverse lp-type
weighted sequence inequalities over the non-negative decreasing cone."""

from .errors import (
    ArithmeticImpossibleError,
    BadConstantError,
    BadExponentError,
    IncompleteProfileError,
    InputFormatError,
    InvalidRangeError,
    MissingGeometricConstantError,
    NoAdmissibleRayError,
    NotDecreasingError,
    PreconditionError,
    SearchSpaceTooLargeError,
    ToolkitError,
    ZeroDyadicEntryError,
)
from .numeric import EXACT, FLOAT, set_precision
from .sequences import (
    DECREASING,
    INCREASING,
    NEITHER,
    DyadicBracket,
    PowerWeight,
    Sequence,
    SequenceProfile,
    dyadic_bracket,
    dyadic_weighted_transform,
    geometric_constant,
    harmonic_sequence,
    is_nonneg_decreasing,
    is_quasi_lacunary_monotone,
    lacunary_constants,
    ones,
    power_sequence,
    random_decreasing,
    step_sequence,
)
from .forms import (
    EQUIV,
    FORM_IDS,
    GE,
    LE,
    EvalResult,
    FormEvaluator,
    InequalityForm,
    check_equiv,
    check_holds,
    eval_form,
    head_sum,
    make_named_form,
    power_sum_norm,
    tail_sum,
    verify_jensen,
)
from .certificates import (
    CERT_IDS,
    CertificateStep,
    ConstantCertificate,
    ValidationReport,
    block_reconstitution_factor,
    block_sum_factor,
    derive_constant,
    dyadic_tail_sum_factor,
    geometric_top_term_factor,
    inner_block_factor,
    jensen_step_factor,
    profile_transform_geo_bound,
    sample_matching_weights,
    top_range_absorption_factor,
    transform_geometric_constant,
    validate_certificate,
)
from .search import (
    SearchResult,
    SweepResult,
    exact_best_constant_p1,
    grid_bruteforce,
    search_best_constant,
    sweep,
)

__version__ = "0.1.0"
