"""Eventual positivity of matrix semigroups and its behaviour under perturbations."""

from .errors import (
    EvposError,
    NumericalError,
    ParseError,
    PreconditionError,
)
from .linalg import (
    DEFAULT_TOL,
    EigenSystem,
    Tolerances,
    eigensystem,
    expm,
    operator_norm,
    resolvent,
    spectral_bound,
    spectral_projection,
)
from .perturbation import (
    EigenCurvePoint,
    PerturbationCertificate,
    certify_multiplication_perturbation,
    certify_resolvent_perturbation,
    check_quantitative_theorem,
    eigencurve,
    eigenvalue_radius,
    halfplane_sup_norm,
    neumann_resolvent,
    openness_probe,
    openness_radius,
    projection_continuity,
    random_perturbation,
)
from .positivity import (
    ConeVector,
    PositivityReport,
    Verdict,
    classify_resolvent_at,
    classify_semigroup,
    is_metzler,
    is_nonneg,
    is_strongly_positive,
    neumann_extension_check,
    positivity_time,
)
from .rank_one import (
    Rank1,
    build_destroyer,
    destroyer_projection,
    destroyer_scan,
    resolvent_rank1,
    resolvent_rank1_eigen,
    semigroup_rank1,
)

__version__ = "0.1.0"
