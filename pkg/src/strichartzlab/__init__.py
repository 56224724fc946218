"""Numerical laboratory for a Strichartz-estimate counterexample.

Builds the truncated quasimode family of a Schrodinger operator with a
repulsive homogeneous potential, measures its mixed space-time norms by
quadrature, and verifies that the solution-to-data-plus-forcing quotient
grows like a positive power of the truncation radius.
"""

from .errors import (
    BoundViolated,
    DegenerateMinimum,
    DimensionMismatch,
    EmptyWindow,
    ForbiddenEndpoint,
    InsufficientPoints,
    InvalidConfig,
    NonAdmissible,
    NonconvergedQuadrature,
    NonpositiveZ,
    NonSpd,
    NonzeroMinimum,
    OutOfCone,
    StrichartzLabError,
    UnknownProfile,
)
from .mixed_norm import (
    NormSpec,
    QuadratureConfig,
    loglog_fit,
    sandwich_check,
    space_norm,
    spacetime_norm,
    u_quadrature,
)
from .oscillator import (
    Eigenpair,
    SpdMatrix,
    eigen_residual,
    eval_G,
    eval_H,
    eval_v,
    ground_state,
    spd_sqrt,
)
from .potential import (
    PROFILES,
    HomogeneousPotential,
    MorseData,
    eval_potential,
    extract_morse,
    make_potential,
    remainder,
)
from .quasimode import CutoffProfile, QuasimodeFamily, build_family
from .scaling_lab import (
    ExponentPlan,
    SweepResult,
    admissible_q,
    alpha_critical,
    compute_delta,
    compute_kappa,
    delta_at_critical,
    delta_at_critical_closed_form,
    fit_slopes,
    forcing_bound_slope,
    gamma_window,
    quotient_crossing,
    remainder_bound_slope,
    run_sweep,
    select_parameters,
    upper_bound_audit,
)

__version__ = "0.1.0"
