"""Maximal surfaces with singularities (maxfaces) in Minkowski 3-space from Weierstrass data."""
from .config import TOL, Tolerances
from .core import INF, Polynomial, RationalMap
from .errors import MaxfaceError, ValidationError
from .gallery import gallery
from .global_analysis import compute_periods, global_report
from .meshio import PolarSpec, RectSpec, build_chart_grid, export, generate_mesh
from .singular import classify_singular_point, singular_curves, trace_singular_curve
from .weierstrass import (
    WeierstrassData,
    companion,
    companion_inverse,
    evaluate_immersion,
    lopez_ros,
    sample,
)

__all__ = [
    "INF", "TOL", "Tolerances", "Polynomial", "RationalMap", "MaxfaceError", "ValidationError",
    "WeierstrassData", "companion", "companion_inverse", "evaluate_immersion", "lopez_ros", "sample",
    "classify_singular_point", "singular_curves", "trace_singular_curve",
    "compute_periods", "global_report", "gallery",
    "PolarSpec", "RectSpec", "build_chart_grid", "generate_mesh", "export",
]
