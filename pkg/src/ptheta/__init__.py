"""Partial theta function numerics.

Evaluation of theta(q, x) = sum_{j>=0} q^(j(j+1)/2) x^j and its bilateral
and triple-product relatives with certified truncation tails; zero location
by the argument principle and Newton polishing; the two-equation solve for
double zeros in (q, x); sampled disk certificates pinning one simple zero
per lattice disk; randomized replay suites for the inequality chain behind
the 8^11 multiple-zero modulus bound; and sweep/persistence/audit tooling.
"""

from .core import (
    MULTIPLE_ZERO_BOUND,
    PI_SQUARED_OVER_6,
    CancellationWarning,
    ContourError,
    ConvergenceError,
    CountMismatchError,
    DomainError,
    EvalResult,
    KappaTieWarning,
    LogComplex,
    OverflowRiskError,
    PThetaError,
    QParameter,
    RecordParseError,
    RingSpec,
    as_q,
    band_index,
    compute_c0,
    eval_G,
    eval_theta,
    eval_theta_auto,
    eval_theta_dx,
    eval_theta_via_identity,
    eval_thetastar_product,
    eval_thetastar_series,
    euler_product_S,
    kappa,
    mu,
    peak_term_log,
    tau,
)
from .zeros import (
    DoubleZeroRecord,
    ZeroRecord,
    multiplicity_estimate,
    refine_zero_newton,
    solve_double_zero,
    solve_double_zero_batch,
    winding_count,
    zeros_up_to_k,
)
from .bounds import (
    SUITE_NAMES,
    BoundReport,
    DiskCertificate,
    certify_disk_rouche,
    check_dominant_term,
    run_suite,
    verify_G_bound,
    verify_disk_separation,
    verify_half_q_case,
    verify_kappa_lower,
    verify_lemma_L_bounds,
    verify_prop_steps,
)
from .sweep import (
    AnnulusSector,
    AuditSummary,
    RealInterval,
    SeedStrategy,
    SweepConfig,
    audit,
    export_trend_csv,
    sweep_certificates,
    sweep_double_zeros,
)

__version__ = "0.1.0"
