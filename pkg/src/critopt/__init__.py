"""Topological optimization of scalar fields via persistent homology.

Persistence of a lower-star filtration is computed through GF(2) boundary
matrix reduction (R = D*V and D = R*U, with the cohomology side obtained from
the anti-transpose).  Matched diagram points prescribe moves; single rows or
columns of U and V identify the whole set of simplices that must move together
("critical sets"), which makes one optimization step act on large parts of the
domain instead of two simplices per pair.
"""

from .complexes import (
    Filtration,
    GridField,
    Simplex,
    SimplicialComplex,
    build_filtration,
    lower_star_1d,
    lower_star_3d,
)
from .estimator import TopologicalSimplifier
from .losses import MatchMode, Matching, quadrant_matching, simplification_matching
from .optimize import (
    LossSpec,
    Method,
    OptimizerConfig,
    OptimizerKind,
    RunLog,
    Strategy,
    compare,
    run,
)
from .reduction import (
    Decomposition,
    DecompositionCache,
    PersistencePair,
    SparseBinaryMatrix,
    anti_transpose,
    boundary_matrix,
    dual_decomposition,
    lazy_reduce,
    read_pairs,
)

__version__ = "0.1.0"

__all__ = [
    "Filtration",
    "GridField",
    "Simplex",
    "SimplicialComplex",
    "build_filtration",
    "lower_star_1d",
    "lower_star_3d",
    "TopologicalSimplifier",
    "MatchMode",
    "Matching",
    "quadrant_matching",
    "simplification_matching",
    "LossSpec",
    "Method",
    "OptimizerConfig",
    "OptimizerKind",
    "RunLog",
    "Strategy",
    "compare",
    "run",
    "Decomposition",
    "DecompositionCache",
    "PersistencePair",
    "SparseBinaryMatrix",
    "anti_transpose",
    "boundary_matrix",
    "dual_decomposition",
    "lazy_reduce",
    "read_pairs",
    "__version__",
]
