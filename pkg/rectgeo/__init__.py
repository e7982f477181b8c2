"""
rectgeo - exact shortest paths in CAT(0) rectangular complexes.

Build a complex, check it, preprocess it into a query structure, then ask for geodesics
between points given in face coordinates.
"""

import logging
from importlib.util import find_spec

from rectgeo.complex import (
    PointSpec,
    RectComplex,
    ValidationReport,
    build_complex,
    canonical_point,
    minimal_cell,
    random_point,
    validate_cat0,
)
from rectgeo.theta import ThetaDecomposition, bipartition_inc, compute_theta, halfspaces
from rectgeo.structures import (
    DenseMatrix,
    TreeProduct,
    build_dense,
    build_structure,
    build_treeproduct,
    interval_vertices,
)
from rectgeo.boundary import IntervalBoundary, boundary_walk, select_gates
from rectgeo.unfolding import UnfoldedChain, embed_interval, locate_in_unfolding, unfold
from rectgeo.polygon import funnel_path, triangulate_monotone
from rectgeo.engine import GeodesicPath, distance, point_at, query
from rectgeo.oracle import build_sample_graph, oracle_distance
from rectgeo.generators import GeneratorSpec, generate
from rectgeo.config import GeodesicContext, Settings, get_settings, settings
from rectgeo import serialization

from rectgeo.exceptions import (
    # Base exception
    RectGeoException,

    # Complex errors
    ComplexError,
    MalformedEdgeError,
    MalformedFaceError,
    LengthMismatchError,
    UnfilledSquareError,
    DuplicateEntityError,
    OutOfFaceError,

    # Validation errors
    CatValidationError,
    DisconnectedComplexError,
    NotBipartiteError,
    LinkTriangleError,
    NotMedianError,

    # Θ-class errors
    ThetaError,
    InconsistentLengthError,
    ClassCrossingError,
    UnknownClassError,

    # Structure errors
    StructureError,
    NotRamifiedError,
    NotATreeError,
    EmbeddingMismatchError,

    # Invariant breaches
    InvariantBreach,
    InternalContradictionError,
    UnfoldMismatchError,
    NotMonotoneError,

    # Query and oracle errors
    QueryError,
    FaceNotInIntervalError,
    PointOutsideError,
    OracleError,
    OracleMemoryError,

    # Other errors
    GenerationFailedError,
    SerializationError,
    SerializationFormatError,
    DeserializationError,
    SerializationVersionError,
    ConfigurationError,

    # Utilities
    ErrorContext,
)

logging.getLogger(__name__).addHandler(logging.NullHandler())

__version__ = "0.1.0"

# SVG output is available when matplotlib is installed
_HAS_PLOTTING = find_spec("matplotlib") is not None

__all__ = [
    # Complexes and points
    "PointSpec",
    "RectComplex",
    "ValidationReport",
    "build_complex",
    "canonical_point",
    "minimal_cell",
    "random_point",
    "validate_cat0",

    # Θ-classes
    "ThetaDecomposition",
    "bipartition_inc",
    "compute_theta",
    "halfspaces",

    # Query structures
    "DenseMatrix",
    "TreeProduct",
    "build_dense",
    "build_structure",
    "build_treeproduct",
    "interval_vertices",

    # Query pipeline
    "IntervalBoundary",
    "boundary_walk",
    "select_gates",
    "UnfoldedChain",
    "embed_interval",
    "locate_in_unfolding",
    "unfold",
    "funnel_path",
    "triangulate_monotone",
    "GeodesicPath",
    "distance",
    "point_at",
    "query",

    # Verification and instances
    "build_sample_graph",
    "oracle_distance",
    "GeneratorSpec",
    "generate",

    # Settings
    "GeodesicContext",
    "Settings",
    "get_settings",
    "settings",

    # Modules
    "serialization",

    # Exceptions
    "RectGeoException",
    "ComplexError",
    "MalformedEdgeError",
    "MalformedFaceError",
    "LengthMismatchError",
    "UnfilledSquareError",
    "DuplicateEntityError",
    "OutOfFaceError",
    "CatValidationError",
    "DisconnectedComplexError",
    "NotBipartiteError",
    "LinkTriangleError",
    "NotMedianError",
    "ThetaError",
    "InconsistentLengthError",
    "ClassCrossingError",
    "UnknownClassError",
    "StructureError",
    "NotRamifiedError",
    "NotATreeError",
    "EmbeddingMismatchError",
    "InvariantBreach",
    "InternalContradictionError",
    "UnfoldMismatchError",
    "NotMonotoneError",
    "QueryError",
    "FaceNotInIntervalError",
    "PointOutsideError",
    "OracleError",
    "OracleMemoryError",
    "GenerationFailedError",
    "SerializationError",
    "SerializationFormatError",
    "DeserializationError",
    "SerializationVersionError",
    "ConfigurationError",
    "ErrorContext",
]

if _HAS_PLOTTING:
    from rectgeo.svg import render_svg  # noqa: E402

    __all__.append("render_svg")
