"""
frameopt

Optimal dual frames for probabilistic erasures. Measures the worst-case
reconstruction error when frame coefficients are lost with known
probabilities, finds duals that minimize it, and builds frames whose
canonical dual is optimal.
"""

from .models import (
    Frame,
    FrameOperator,
    DualParameterization,
    ProbabilityModel,
    ErasurePattern,
    ErrorOperator,
    MeasureKind,
    MeasureReport,
    SearchConfig,
    SearchResult,
    CertificateKind,
    OptimalityCertificate,
    TightEquivalenceReport,
    TightPairReport,
    PairVerdict,
    MajorizationInstance,
    WeightingMode,
    SimConfig,
    SimReport,
    FrameFile,
)

from .errors import FrameOptError
from .config import Tolerances, load_tolerances

from .frame_core import (
    frame_operator,
    frame_bounds,
    is_tight,
    canonical_dual,
    is_dual,
    dual_space,
    dual_from_params,
    project_dual,
    apply_unitary,
)
from .erasure_model import (
    weights_from_probabilities,
    error_operator,
    measure,
    measure_O,
    measure_r,
    measure_A,
    measure_all,
    one_erasure_closed_form,
)
from .optimality import (
    pasod_search,
    objective_value,
    subgradient_of_objective,
    check_unique_pod,
    check_canonical_pasod_sufficient,
    check_unique_pasod_tight,
    canonical_certificates,
    tight_equivalences,
    unitary_invariance_check,
)
from .dual_pairs import (
    pair_verdict,
    global_pair_optimum,
    majorization_check,
    frame_with_operator_and_norms,
    construct_probability_uniform_parseval,
    unique_pair_check_tight,
)
from .erasure_sim import simulate
from .formatters import JSONFormatter, MarkdownFormatter

__version__ = "1.0.0"
__all__ = [
    # Models
    "Frame",
    "FrameOperator",
    "DualParameterization",
    "ProbabilityModel",
    "ErasurePattern",
    "ErrorOperator",
    "MeasureKind",
    "MeasureReport",
    "SearchConfig",
    "SearchResult",
    "CertificateKind",
    "OptimalityCertificate",
    "TightEquivalenceReport",
    "TightPairReport",
    "PairVerdict",
    "MajorizationInstance",
    "WeightingMode",
    "SimConfig",
    "SimReport",
    "FrameFile",

    # Configuration and errors
    "FrameOptError",
    "Tolerances",
    "load_tolerances",

    # Frames
    "frame_operator",
    "frame_bounds",
    "is_tight",
    "canonical_dual",
    "is_dual",
    "dual_space",
    "dual_from_params",
    "project_dual",
    "apply_unitary",

    # Erasure measures
    "weights_from_probabilities",
    "error_operator",
    "measure",
    "measure_O",
    "measure_r",
    "measure_A",
    "measure_all",
    "one_erasure_closed_form",

    # Optimal duals
    "pasod_search",
    "objective_value",
    "subgradient_of_objective",
    "check_unique_pod",
    "check_canonical_pasod_sufficient",
    "check_unique_pasod_tight",
    "canonical_certificates",
    "tight_equivalences",
    "unitary_invariance_check",

    # Dual pairs
    "pair_verdict",
    "global_pair_optimum",
    "majorization_check",
    "frame_with_operator_and_norms",
    "construct_probability_uniform_parseval",
    "unique_pair_check_tight",

    # Simulation
    "simulate",

    # Formatters
    "JSONFormatter",
    "MarkdownFormatter",
]
