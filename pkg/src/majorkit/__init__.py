"""majorkit: exact majorization decisions for summable nonnegative
sequences, cross-validated through power-sum gap analysis (complete
monotonicity of z(s)/(s(s-1))) and closed-form integral identities, plus
catalysis (trumping) search."""

from .sequences import (
    Ell1Seq,
    GeometricTail,
    SeqParseError,
    Verdict,
    ZeroTail,
    k_largest,
    seq,
    seq_from_obj,
    seq_to_obj,
    tensor,
    total_mass,
    validate,
)
from .piecewise import PiecewiseLinearFn, StepFn
from .orderings import (
    CountingResult,
    HockeyCurve,
    counting_function,
    hockey_stick,
    hockey_stick_fn,
    majorize_hockey_stick,
    majorize_partial_sums,
)
from .jets import TaylorJet
from .series import (
    CMConfig,
    CMReport,
    IdentityResidual,
    SequencePair,
    cm_grid,
    cm_refute_adaptive,
    cm_test,
    gap_jet,
    gap_positivity,
    gap_slope_at_one,
    mass_balance,
    mellin_gap_jet,
    mellin_identity_check,
    power_sum,
    stieltjes_identity_check,
)
from .catalysis import (
    CatalystSearchConfig,
    TrumpReport,
    catalyst_search,
    conjecture_probe,
    trump_check,
)
from .precision import DEFAULT_PRECISION_BITS, working_precision

__version__ = "0.1.0"

__all__ = [
    "Ell1Seq",
    "GeometricTail",
    "ZeroTail",
    "Verdict",
    "SeqParseError",
    "seq",
    "seq_from_obj",
    "seq_to_obj",
    "validate",
    "total_mass",
    "k_largest",
    "tensor",
    "StepFn",
    "PiecewiseLinearFn",
    "CountingResult",
    "HockeyCurve",
    "counting_function",
    "hockey_stick",
    "hockey_stick_fn",
    "majorize_partial_sums",
    "majorize_hockey_stick",
    "TaylorJet",
    "SequencePair",
    "CMConfig",
    "CMReport",
    "IdentityResidual",
    "power_sum",
    "gap_jet",
    "mass_balance",
    "gap_slope_at_one",
    "mellin_gap_jet",
    "cm_grid",
    "cm_test",
    "cm_refute_adaptive",
    "stieltjes_identity_check",
    "mellin_identity_check",
    "gap_positivity",
    "CatalystSearchConfig",
    "TrumpReport",
    "trump_check",
    "catalyst_search",
    "conjecture_probe",
    "DEFAULT_PRECISION_BITS",
    "working_precision",
    "__version__",
]
