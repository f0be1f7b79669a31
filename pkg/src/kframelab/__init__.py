"""kframelab: a numerical laboratory for continuous K-frames on
discretized measure spaces.

Frames are sampled vector fields over finitely many weighted atoms; the
package builds their analysis, synthesis and frame operators, canonical
duals through operator pseudo-inverses, and verifies the structural
identities of the theory as tolerance-checked, seeded property suites.
"""

from .hilbert import (
    DEFAULT_TOL,
    RANK_EPS,
    RangeInclusion,
    RangeInclusionError,
    SvdFactorization,
    adjoint,
    as_operator,
    as_vector,
    corange_projector,
    douglas_factor,
    loewner_leq,
    op_norm,
    pinv,
    range_inclusion,
    range_projector,
    rank,
    svd,
)
from .measure import (
    L2Coefficients,
    MeasureSpace,
    SpaceMismatchError,
    bochner_integrate,
    l2_inner,
    l2_norm_sq,
)
from .frames import (
    FrameBounds,
    FrameClassification,
    FrameVerdict,
    InfeasibleError,
    KOperator,
    SampledFrame,
    analysis,
    analysis_norm,
    classify,
    frame_bounds,
    frame_operator,
    frames_allclose,
    generate_parseval_k_frame,
    generate_random_bessel,
    is_l2_independent,
    k_lower_bound,
    synthesis,
    synthesis_kernel_basis,
    weighted_analysis,
    weighted_synthesis,
)
from .duality import (
    DualityReport,
    HypothesisError,
    IndependenceTransfer,
    ResidualOperator,
    build_dual_from_phi,
    canonical_characterization,
    canonical_dual,
    complement_parseval_check,
    construct_alternative_dual,
    dual_coefficient_family,
    field_norm,
    is_dual_k_bessel,
    kdaggerk_frame_check,
    l2_independence_transfer,
    minimality_check,
    pythagorean_decomposition,
    residual_operator,
    sample_kernel_field,
    unique_dual_transfer,
    uniqueness_test,
)
from .fixtures import FIXTURE_NAMES, fixture, fixture_scenario, fixture_w1, fixture_w1_prime
from .scenario import Scenario, ScenarioError, load_scenario, scenario_from_dict
from .suites import DEFAULT_TOLERANCES, PROPERTY_IDS, UnknownPropertyError, run_suite
from .report import PropertyRecord, SuiteReport, emit_report, render_text, report_to_dict
from .rng import complex_normal, derive_seed, stream

__version__ = "0.1.0"
