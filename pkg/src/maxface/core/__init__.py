"""Complex rational-function algebra and quadrature engines."""
from .polynomial import Polynomial, poly_roots
from .rational import INF, RationalMap, is_inf
from .quadrature import (
    Arc,
    Path,
    PathSpec,
    Segment,
    contour_integral,
    path_integral,
)

__all__ = [
    "INF",
    "Arc",
    "Path",
    "PathSpec",
    "Polynomial",
    "RationalMap",
    "Segment",
    "contour_integral",
    "is_inf",
    "path_integral",
    "poly_roots",
]
