"""Second-order local geometry of surfaces in 3-, 4- and 5-space.

Local quadratic maps, their invariants and paired maps, local caustics and
their duality with the curvature indicatrix, point classification, and
finite-difference oracles that check the algebra independently.
"""

from .caustic import QuadricType, caustic_quadric, classify_quadric, dual_of_indicatrix
from .classify import PointType, classify_point, classify_r4, classify_r5, grid_classify, inequality_report
from .errors import (
    CurvaturaError,
    DomainError,
    ExprSyntaxError,
    ImmersionError,
    UndefinedQuantityError,
)
from .estimators import InvariantsTransformer, PointTypeClassifier
from .invariants import LocalQuadraticMap, gauss_form, indicatrix, invariants_of
from .io import load_surface
from .jets import SurfaceSpec, local_quadratic_map_at
from .paired import paired_map
from .sl2 import QuadForm2, poisson_bracket, psi_inner

__all__ = [
    "CurvaturaError",
    "DomainError",
    "ExprSyntaxError",
    "ImmersionError",
    "InvariantsTransformer",
    "LocalQuadraticMap",
    "PointType",
    "PointTypeClassifier",
    "QuadForm2",
    "QuadricType",
    "SurfaceSpec",
    "UndefinedQuantityError",
    "caustic_quadric",
    "classify_point",
    "classify_quadric",
    "classify_r4",
    "classify_r5",
    "dual_of_indicatrix",
    "gauss_form",
    "grid_classify",
    "indicatrix",
    "inequality_report",
    "invariants_of",
    "load_surface",
    "local_quadratic_map_at",
    "paired_map",
    "poisson_bracket",
    "psi_inner",
]
