"""T-optimal discriminating designs for nested trigonometric regressions.

Core objects: ``DiscriminationProblem`` fixes the nuisance model and the
extra coefficients of the extended model; ``Design`` is a finitely
supported probability measure on [0, 2*pi).  ``closedform`` builds the
explicit optimal designs where they exist, ``solver`` certifies numerical
optima everywhere else, ``criterion`` houses the criterion value and the
equivalence-theorem certificate, and ``reference`` compares fixed
determinant-optimal designs against the T-optimum.
"""

from .closedform import (
    ClosedFormCase,
    case_problem,
    closed_form_design,
    closed_form_t,
    design_cor32,
    design_rem34,
    design_thm31,
    design_thm41,
    design_thm42,
    extremal_psi,
    support_amplitude,
    support_weights,
    threshold,
)
from .criterion import (
    CertificateReport,
    TResult,
    certify,
    efficiency,
    residual,
    t_value,
)
from .designs import (
    Design,
    circular_distance,
    convex_combine,
    make_design,
    merge_close,
    point_mass,
    support_distance,
    weight_distance,
)
from .errors import (
    CertificateError,
    InvalidDesignError,
    InvalidProblemError,
    SolverError,
    ToptdesError,
    ValidityError,
)
from .fourier import (
    TWO_PI,
    DiscriminationProblem,
    chebyshev_t,
    difference,
    extra_basis,
    nuisance_basis,
    trig_coefficients,
    trig_derivative,
    trig_eval,
)
from .reference import (
    EfficiencyRow,
    EfficiencyTable,
    d3_optimal_design,
    d_optimal_design,
    efficiency_curves,
    uniform_design,
)
from .solver import (
    RegionCell,
    RegionTable,
    SolveReport,
    SolverOptions,
    TrajectoryRow,
    TrajectoryTable,
    count_support,
    scan_problem,
    scan_regions,
    solve,
    trace_designs,
)

__version__ = "0.1.0"

__all__ = [
    "TWO_PI",
    "CertificateError",
    "CertificateReport",
    "ClosedFormCase",
    "Design",
    "DiscriminationProblem",
    "EfficiencyRow",
    "EfficiencyTable",
    "InvalidDesignError",
    "InvalidProblemError",
    "RegionCell",
    "RegionTable",
    "SolveReport",
    "SolverError",
    "SolverOptions",
    "ToptdesError",
    "TrajectoryRow",
    "TrajectoryTable",
    "TResult",
    "ValidityError",
    "case_problem",
    "certify",
    "chebyshev_t",
    "circular_distance",
    "closed_form_design",
    "closed_form_t",
    "convex_combine",
    "count_support",
    "d3_optimal_design",
    "d_optimal_design",
    "design_cor32",
    "design_rem34",
    "design_thm31",
    "design_thm41",
    "design_thm42",
    "difference",
    "efficiency",
    "efficiency_curves",
    "extra_basis",
    "extremal_psi",
    "make_design",
    "merge_close",
    "nuisance_basis",
    "point_mass",
    "residual",
    "scan_problem",
    "scan_regions",
    "solve",
    "support_amplitude",
    "support_distance",
    "support_weights",
    "t_value",
    "threshold",
    "trace_designs",
    "trig_coefficients",
    "trig_derivative",
    "trig_eval",
    "uniform_design",
    "weight_distance",
    "__version__",
]
