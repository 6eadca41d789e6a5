"""Higher-order distance degrees of toric embeddings via tropical intersection theory."""

from .closed_forms import (
    bw_distance_degree,
    jet_chern_gdd,
    p1r_gdd,
    toric_surface_gdd,
    toric_threefold_gdd,
    veronese_gdd,
)
from .degree_pipeline import (
    DegreeReport,
    critical_valuations,
    multidegrees,
    polar_report,
    trop_conormal,
)
from .exact_linalg import IntegerMatrix
from .jet_osculation import ToricEmbedding, check_global_osculation, jet_matrix, osculating_dimension
from .lattice_polytope import hull
from .tropical_cycle import NonGenericError, stable_intersection

__all__ = [
    "IntegerMatrix",
    "ToricEmbedding",
    "jet_matrix",
    "osculating_dimension",
    "check_global_osculation",
    "hull",
    "trop_conormal",
    "multidegrees",
    "polar_report",
    "DegreeReport",
    "critical_valuations",
    "stable_intersection",
    "NonGenericError",
    "veronese_gdd",
    "bw_distance_degree",
    "jet_chern_gdd",
    "p1r_gdd",
    "toric_surface_gdd",
    "toric_threefold_gdd",
]
