"""Combinatorial models of the multicurve graphs G0 and G-infinity."""

from .decomposition import Curve, MoveMap, PantsDecomposition
from .diameter import GInfVertex, diameter_path, verify_ginf_vertex
from .errors import InsufficientWindow, MulticurveError, Undetermined
from .farey import INF, Slope
from .metric import FNMetric
from .surface import Surface, SurfaceSpec, build_surface

__version__ = "0.1.0"

__all__ = [
    "Curve",
    "FNMetric",
    "GInfVertex",
    "INF",
    "InsufficientWindow",
    "MoveMap",
    "MulticurveError",
    "PantsDecomposition",
    "Slope",
    "Surface",
    "SurfaceSpec",
    "Undetermined",
    "build_surface",
    "diameter_path",
    "verify_ginf_vertex",
]
