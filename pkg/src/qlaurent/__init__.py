"""Laurent polynomial bases built from Askey-Wilson parameters, their bilinear forms and operators.

Everything is computed with mpmath at the ambient precision; functions that
take a :class:`PrecisionBudget` raise it to the budget's working digits.
"""

from .errors import (
    BalanceViolation,
    DegenerateParameters,
    DegenerateWeight,
    InadmissibleParameters,
    InexactDivision,
    InsufficientDecay,
    NearSingularPoint,
    NoConvergence,
    PoleInSeries,
    QLaurentError,
    UnsupportedTruncation,
)
from .qcore import (
    DEFAULT_BUDGET,
    ParameterSet,
    PrecisionBudget,
    aw_mu,
    canonical_params,
    qpoch_finite,
    qpoch_infinite,
    random_params,
)
from .laurent import LaurentPoly
from .bases import BasisId, build, build_P, build_Pprime, build_R, build_S, build_T, build_U, build_X, build_Y
from .forms import inner_aw, inner_cher, inner_cher_prime, norm_closed
from .operators import OperatorId, apply
from .racah import RacahConfig, racah_inner
from .report import CheckRow

__version__ = "0.1.0"

__all__ = [
    "BalanceViolation", "DegenerateParameters", "DegenerateWeight", "InadmissibleParameters",
    "InexactDivision", "InsufficientDecay", "NearSingularPoint", "NoConvergence", "PoleInSeries",
    "QLaurentError", "UnsupportedTruncation",
    "DEFAULT_BUDGET", "ParameterSet", "PrecisionBudget", "aw_mu", "canonical_params", "qpoch_finite",
    "qpoch_infinite", "random_params",
    "LaurentPoly",
    "BasisId", "build", "build_P", "build_Pprime", "build_R", "build_S", "build_T", "build_U", "build_X", "build_Y",
    "inner_aw", "inner_cher", "inner_cher_prime", "norm_closed",
    "OperatorId", "apply",
    "RacahConfig", "racah_inner",
    "CheckRow",
]
