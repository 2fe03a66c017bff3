"""Exact desk-scale computations with uniform and locally powerful pro-p groups."""

from .classify import ClassificationOutcome, classify, classify_rank2, classify_rank3, tits_report
from .cohomology import (
    CohomologyProfile,
    GradedAlgebra,
    bockstein_p2,
    dimension_identity_check,
    exterior_profile,
    fixed_point_dimension,
    free_product_profile,
    free_profile,
    lambda2_cup_injectivity,
    quadratic_check,
    zp_times_free_profile,
)
from .group import (
    GroupOrientation,
    UniformPresentation,
    commutator,
    from_lie,
    inverse,
    lower_series_dims,
    multiply,
    power,
    present_theta_abelian,
    to_lie,
)
from .lie import BracketTable, bracket, is_powerful, jacobi_defect, span_closure_witness
from .padic import PadicScalar, PadicUnit, exp_p, log_p

__version__ = "0.1.0"
