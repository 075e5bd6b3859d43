"""Rearrangement calculus for the (finite-support, bounded) couple.

The library computes exact singular value functions and distribution
functions for step functions on (0, infinity) and for square matrices with
a weighted trace, exact K- and M-functionals with optimal splittings,
rearrangement-invariant functionals with declared triangle constants,
homomorphisms with certified bounds on both sides of the couple, orbit and
K-orbit diagnostics, and a constructive transfer that realises one matrix
as the image of another under a homomorphism with certified bounds.
"""

__version__ = "0.1.0"

from .stepfn import (
    SingularFunction,
    StepFunction,
    add_pointwise,
    indicator,
    pointwise_le,
    rearrange,
    singular_indicator,
    step_from_dict,
    step_to_dict,
    submajorizes,
)
from .kcalc import (
    KCurve,
    k_at,
    k_at_via_distribution,
    k_curve,
    k_curve_csv,
    log_grid,
    m_at,
    m_curve_csv,
    optimal_decomposition,
)
from .matmodel import (
    DecompositionError,
    SpectralData,
    TraceMatrix,
    as_singular,
    diag,
    dist_op,
    identity,
    k_direct,
    matrix_from_dict,
    matrix_to_dict,
    mu_of,
    polar,
    spectral,
    spectral_projection,
    trace_norms,
    zeros,
)
from .symnorm import (
    DeltaNorm,
    NormDomainError,
    builtin_norms,
    delta_axioms_check,
    dilation_check,
    e_eval,
    embedding_check,
    get_norm,
)
from .homs import (
    OrthogonalityError,
    PairHom,
    certified_bounds,
    enorm_bound_check,
    hom_from_dict,
    hom_to_dict,
    interpolation_check,
)
from .orbits import (
    CounterexampleSpec,
    counterexample,
    korbit_norm,
    orbit_necessary_check,
    pointwise_constant,
)
from .report import CheckItem, CheckReport
from .transfer import (
    PlanInfeasibleError,
    TransferPlan,
    build,
    plan,
    plan_to_dict,
    verify,
)

__all__ = [
    "__version__",
    "SingularFunction",
    "StepFunction",
    "add_pointwise",
    "indicator",
    "pointwise_le",
    "rearrange",
    "singular_indicator",
    "step_from_dict",
    "step_to_dict",
    "submajorizes",
    "KCurve",
    "k_at",
    "k_at_via_distribution",
    "k_curve",
    "k_curve_csv",
    "log_grid",
    "m_at",
    "m_curve_csv",
    "optimal_decomposition",
    "DecompositionError",
    "SpectralData",
    "TraceMatrix",
    "as_singular",
    "diag",
    "dist_op",
    "identity",
    "k_direct",
    "matrix_from_dict",
    "matrix_to_dict",
    "mu_of",
    "polar",
    "spectral",
    "spectral_projection",
    "trace_norms",
    "zeros",
    "DeltaNorm",
    "NormDomainError",
    "builtin_norms",
    "delta_axioms_check",
    "dilation_check",
    "e_eval",
    "embedding_check",
    "get_norm",
    "OrthogonalityError",
    "PairHom",
    "certified_bounds",
    "enorm_bound_check",
    "hom_from_dict",
    "hom_to_dict",
    "interpolation_check",
    "CounterexampleSpec",
    "counterexample",
    "korbit_norm",
    "orbit_necessary_check",
    "pointwise_constant",
    "CheckItem",
    "CheckReport",
    "PlanInfeasibleError",
    "TransferPlan",
    "build",
    "plan",
    "plan_to_dict",
    "verify",
]
