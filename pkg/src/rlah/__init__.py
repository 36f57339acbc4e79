"""Exact and asymptotic computation of the r-Lah distribution.

Building blocks (r-Stirling numbers of both kinds, r-Lah numbers) are exact
rational arithmetic; limit-theorem approximants (mod-Poisson, CLT, local
limit, mode location, precise large deviations) live on the floating side
and are compared against certified exact prefixes of the distribution.  Two
application layers consume the exact core: expected face counts of cones
generated by random walks, and unique-recovery probabilities for sparse
monotone signals, each with a Monte Carlo verifier built on an exact
rational simplex.
"""

from .asymptotics import (
    LimitApproximant,
    LogSpaceTable,
    clt_normalize,
    digamma,
    expectation_asymptotic,
    gamma_real,
    kolmogorov_distance,
    ldp_lower_tail,
    ldp_point,
    ldp_upper_tail,
    llt_gaussian_pmf,
    llt_sup_gap,
    log_gamma_real,
    log_pmf_row,
    mod_poisson_residual,
    mode_prediction,
    psi_limit,
)
from .cones import (
    ConeFaceQuery,
    expected_face_count,
    face_ratio,
    face_ratio_complement,
    recovery_probability,
    strong_threshold_check,
    weak_threshold,
)
from .distribution import (
    AdmissibleTriple,
    LahDistribution,
    build_distribution,
    expectation_exact,
    mode_exact,
    pgf_eval,
    pmf_head,
)
from .errors import (
    CapacityExceeded,
    DegenerateSample,
    DomainError,
    InadmissibleParameters,
    InvalidParameter,
    RLahError,
)
from .montecarlo import (
    ConeClass,
    MCEstimate,
    RecoveryInstance,
    WalkSample,
    classify_cone,
    count_faces,
    estimate_expected_faces,
    estimate_recovery_probability,
    face_certificate,
    generate_walk,
    is_k_face,
    is_pointed,
    is_unique_recovery,
    make_recovery_instance,
)
from .rational import as_rational, format_rational
from .stirling import (
    DEFAULT_N_MAX,
    RStirlingTable,
    StirlingKind,
    first_kind_prefix,
    gen_binomial,
    harmonic_diff,
    lah_r,
    second_kind_column,
    stirling_r,
    stirling_r_poly,
)

__version__ = "0.1.0"
