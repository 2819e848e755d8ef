"""crhull: classification and polynomial-convexity certificates for CR-singular points.

The package takes manifolds in Bishop normal form, locates and classifies
their CR-singular locus, certifies polynomially convex neighbourhood radii
through coefficient-exact C^2 bounds, checks the half-plane separation of
the preimage sheets behind the certificates, and cross-examines the
conclusions with an independent min-max polynomial separation probe.
"""

from .bipoly import BiPoly, from_term_list, poly_eval, poly_rotate, poly_wirtinger
from .certify import (
    BranchSolution,
    CertifiedRadius,
    FlatCertificate,
    KallinReport,
    SliceMargin,
    branch_derivative_bound,
    branch_residual,
    certify_flat,
    certify_radius,
    choose_epsilon,
    forward_check,
    kallin_check_m2,
    kallin_check_m3,
    lipschitz_alpha,
    lipschitz_audit,
    solve_branch_f,
    solve_branch_g,
)
from .errors import (
    BranchDomainError,
    CrhullError,
    DegenerateJetError,
    DomainError,
    IllConditionedBasisError,
    ManifestError,
    NonHyperbolicError,
    OffLocusError,
    OrderViolationError,
    SingularJacobianError,
)
from .hull import SampleCloud, SeparationResult, hull_scan, sample_manifold, separate
from .manifold import (
    Domain,
    EmbeddedPoint,
    ManifoldSpec,
    embed,
    embed_grid,
    order_two_in_w,
    validate_spec,
)
from .normalform import (
    SliceNormalForm,
    jet_at,
    normal_form_threshold,
    reduce,
    replay_changes,
)
from .numerics import C2NormBound, DiskGrid, TaylorJet, c2_norm_upper, sqrt1p_deviation, wirtinger_jet
from .singular import Classification, SingularLocus, b_slice, classify_point, locate_eta, trace_locus

__version__ = "0.1.0"
