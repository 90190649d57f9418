"""Certified complex polynomial root finding by guided path lifting.

The solver steers Newton-like iterates along the lifted ray of f(z0) toward
0, stopping as soon as the pointwise alpha invariant certifies quadratic
convergence.  Companion modules estimate the geometry that controls its
cost (critical values, inverse-branch radii, Voronoi influence) and run
reproducible cost experiments against the theoretical bound.
"""

from .alpha import (
    ALPHA_THRESHOLD,
    AlphaData,
    Certificate,
    alpha0_constant,
    alpha_gamma,
    certify,
    gamma_upper_bound,
    induction_margin,
    newton_step,
    verify_quadratic_contraction,
)
from .errors import (
    AlphaStepError,
    ContinuationStall,
    CriticalPointInput,
    DuplicateRoots,
    EmptyInput,
    InputError,
    NonFiniteInput,
    NonMonicInput,
    OracleFailure,
    ProfileMismatch,
    RootsUnknown,
    SingularStart,
)
from .geometry import (
    CriticalProfile,
    RayProbe,
    arg_speed,
    critical_profile,
    ensure_roots,
    ray_probe,
    rho_of_root,
    s_r_constant,
    voronoi_multiplicity_probe,
)
from .harness import (
    AuditReport,
    SweepReport,
    audit_trace,
    builtin_suite,
    cost_integral_bound,
    costestimate_bound,
    quadrature_log_abs_f,
    random_poly,
    sweep_average_cost,
    sweep_to_csv,
    verify_suite,
)
from .pathlift import (
    PathLiftFailed,
    RunConfig,
    Trace,
    TraceStep,
    choose_start,
    pointwise_cost,
    run,
    run_adaptive,
    trace_to_jsonl,
)
from .polynomial import (
    DerivativeStack,
    Polynomial,
    eval_all_derivs,
    from_coeffs,
    from_roots,
    parse_polynomial,
    polynomial_to_json,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA_THRESHOLD", "AlphaData", "AlphaStepError", "AuditReport",
    "Certificate", "ContinuationStall", "CriticalPointInput",
    "CriticalProfile", "DerivativeStack", "DuplicateRoots", "EmptyInput",
    "InputError", "NonFiniteInput", "NonMonicInput", "OracleFailure",
    "PathLiftFailed", "Polynomial", "ProfileMismatch", "RayProbe",
    "RootsUnknown", "RunConfig", "SingularStart", "SweepReport", "Trace",
    "TraceStep", "alpha0_constant", "alpha_gamma", "arg_speed",
    "audit_trace", "builtin_suite", "certify", "choose_start",
    "cost_integral_bound", "costestimate_bound", "critical_profile",
    "ensure_roots", "eval_all_derivs", "from_coeffs", "from_roots",
    "gamma_upper_bound", "induction_margin", "newton_step",
    "parse_polynomial", "pointwise_cost", "polynomial_to_json",
    "quadrature_log_abs_f", "random_poly", "ray_probe", "rho_of_root",
    "run", "run_adaptive", "s_r_constant", "sweep_average_cost",
    "sweep_to_csv", "trace_to_jsonl", "verify_quadratic_contraction",
    "verify_suite", "voronoi_multiplicity_probe",
]
