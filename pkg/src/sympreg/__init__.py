"""Symplectic Runge-Kutta methods, their structure-preservation step-size
regions on the canonical linear test problems, and fixed-point classification
of the induced discrete dynamics."""

from .composition import (
    CompositionScheme,
    compose,
    compose_step,
    scheme_from_text,
    scheme_to_text,
    triple_jump,
)
from .dynamics import (
    ELLIPTIC,
    HYPERBOLIC,
    LOGISTIC,
    EquilibriumReport,
    ModelProblem,
    SimulationResult,
    StepMap,
    classify,
    classify_system,
    continuous_jacobian,
    discrete_jacobian,
    equilibria,
    propagation_matrix,
    simulate,
    step,
    trajectory_to_csv,
)
from .errors import (
    DimensionError,
    ExcludedPointError,
    PoleError,
    SingularMatrixError,
    SolverError,
)
from .numerics import eig2, gauss_nodes, lobatto_nodes, lu_det, lu_solve
from .region import (
    RegionResult,
    SpectralReport,
    a1a2,
    composed_predicate,
    elliptic_predicate_sprk,
    elliptic_report_srk,
    find_region,
    hyperbolic_predicate_srk,
    hyperbolic_predicate_sprk,
    lobatto_elliptic_endpoint,
    region_to_csv,
    reports_to_json,
    spectral_report,
    stability_function,
)
from .tableau import (
    ButcherTableau,
    PartitionedPair,
    check_sprk_symplectic,
    check_srk_symplectic,
    gauss,
    lobatto_iiia,
    lobatto_iiib,
    lobatto_pair,
    lobatto_x_matrices,
    midpoint,
    pair_from_text,
    pair_to_text,
    srk_pair,
    symplectic_euler,
    tableau_from_text,
    tableau_to_text,
)

__version__ = "0.1.0"
