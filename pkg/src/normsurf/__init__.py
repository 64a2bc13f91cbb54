"""Normal and almost normal surface enumeration in closed 3-manifold triangulations."""
from .coords import SurfaceVector, haken_sum, is_admissible, matching_system, vertex_link
from .errors import NormSurfError
from .triangulation import Triangulation, load_triangulation, parse_triangulation

__version__ = "0.1.0"

__all__ = ["SurfaceVector", "Triangulation", "NormSurfError", "haken_sum", "is_admissible",
           "load_triangulation", "matching_system", "parse_triangulation", "vertex_link"]
