"""Constraint-only convex polyhedra on a parallel parametric LP core.

Every published number is exact: floating-point LP solves only propose
bases, which are reconstructed and certified in rational arithmetic.
"""

from .exact_arith import (
    CanonicalConstraint,
    Rational,
    SingularMatrixError,
    TRIVIALLY_FALSE,
    TRIVIALLY_TRUE,
    canonicalize,
    rat,
    solve_linear_system,
)
from .lp_core import (
    Basis,
    FloatBackendResult,
    LPOutcome,
    LPStatus,
    StandardLP,
    certify,
    exact_lp,
    exact_point,
    float_lp,
    make_standard_lp,
    reduced_costs,
    set_float_backend,
)
from .plp_engine import (
    ObjectiveTableau,
    ParametricObjective,
    PLPError,
    PLPSolution,
    Region,
    Task,
    are_adjacent,
    compute_next,
    compute_region,
    exact_objective,
    midpoint,
    sign_conditions,
    solve_sequential,
)
from .concurrent_runtime import (
    BasisTable,
    RegionStore,
    WorkQueue,
    is_covered,
    push_region,
    solve_parallel,
)
from .redundancy import (
    EmptyPolyhedron,
    check_sat,
    eliminate_redundancy,
    syntactic_minimize,
)
from .poly_ops import (
    Polyhedron,
    build_projection_plp,
    convex_hull,
    fm_project,
    interior_point,
    parse_polyhedron,
    project,
    verify_covering,
)

__version__ = "0.1.0"
