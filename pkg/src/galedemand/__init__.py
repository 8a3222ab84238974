"""Gale's non-integrable demand family: demand, revealed preference, and the
calculus and path constructions that certify (non-)rationalizability.
"""

from .axioms import (
    Dataset,
    Observation,
    RevealedRelation,
    SarpViolation,
    check_sarp,
    check_warp,
    direct_revealed,
    extend_to_total_order,
    gale_table,
    load_observations,
    transitive_closure,
)
from .calculus import (
    ConvergenceError,
    antonelli,
    expenditure_numeric,
    inverse_pair_gap,
    jacobi_residual,
    scaling_invariance_check,
    shephard_check,
    slutsky,
    tangent_definiteness,
)
from .demand import (
    DemandSpec,
    cone_contains,
    family_demand,
    gale_demand,
    gale_spec,
    inverse_demand,
    normalize_price,
    spec_from_matrix,
    symmetric_spec,
)
from .fields import (
    LinearField,
    NumericField,
    QuadraticInverseDemand,
    ScaledField,
    VectorField,
    fd_jacobian,
)
from .paths import (
    CompensatedPath,
    PathOptions,
    PlaneFrame,
    VilleCycle,
    crossing_ratio,
    euler_compensated,
    find_intransitivity,
    plane_frame,
    prefers,
    samuelson_tower,
    trace_path,
    ville_cycle,
)

__version__ = "0.1.0"

__all__ = [
    "Dataset",
    "Observation",
    "RevealedRelation",
    "SarpViolation",
    "check_sarp",
    "check_warp",
    "direct_revealed",
    "extend_to_total_order",
    "gale_table",
    "load_observations",
    "transitive_closure",
    "ConvergenceError",
    "antonelli",
    "expenditure_numeric",
    "inverse_pair_gap",
    "jacobi_residual",
    "scaling_invariance_check",
    "shephard_check",
    "slutsky",
    "tangent_definiteness",
    "DemandSpec",
    "cone_contains",
    "family_demand",
    "gale_demand",
    "gale_spec",
    "inverse_demand",
    "normalize_price",
    "spec_from_matrix",
    "symmetric_spec",
    "LinearField",
    "NumericField",
    "QuadraticInverseDemand",
    "ScaledField",
    "VectorField",
    "fd_jacobian",
    "CompensatedPath",
    "PathOptions",
    "PlaneFrame",
    "VilleCycle",
    "crossing_ratio",
    "euler_compensated",
    "find_intransitivity",
    "plane_frame",
    "prefers",
    "samuelson_tower",
    "trace_path",
    "ville_cycle",
    "__version__",
]
