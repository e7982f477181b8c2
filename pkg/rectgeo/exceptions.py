"""Custom exceptions for the rectgeo library.

Every error raised by rectgeo derives from :class:`RectGeoException`, so callers can
catch the whole family with one clause or pick a category.

Exception Hierarchy:
    RectGeoException (base)
    ├── ComplexError
    │   ├── MalformedEdgeError
    │   ├── MalformedFaceError
    │   ├── LengthMismatchError
    │   ├── UnfilledSquareError
    │   ├── DuplicateEntityError
    │   └── OutOfFaceError
    ├── CatValidationError
    │   ├── DisconnectedComplexError
    │   ├── NotBipartiteError
    │   ├── LinkTriangleError
    │   └── NotMedianError
    ├── ThetaError
    │   ├── InconsistentLengthError
    │   ├── ClassCrossingError
    │   └── UnknownClassError
    ├── StructureError
    │   ├── NotRamifiedError
    │   ├── NotATreeError
    │   └── EmbeddingMismatchError
    ├── InvariantBreach
    │   ├── InternalContradictionError
    │   ├── UnfoldMismatchError
    │   └── NotMonotoneError
    ├── QueryError
    │   ├── FaceNotInIntervalError
    │   └── PointOutsideError
    ├── OracleError
    │   └── OracleMemoryError
    ├── GenerationFailedError
    ├── SerializationError
    │   ├── SerializationFormatError
    │   ├── DeserializationError
    │   └── SerializationVersionError
    └── ConfigurationError

Usage:
    >>> from rectgeo import build_complex
    >>> from rectgeo.exceptions import ComplexError, LengthMismatchError
    >>>
    >>> try:
    ...     build_complex(4, [(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (0, 3, 2.0)],
    ...                   [(0, 1, 2, 3)])
    ... except LengthMismatchError as e:
    ...     print(f"Bad rectangle: {e}")
"""

from typing import Any, List, Optional, Sequence, Tuple


class RectGeoException(Exception):
    """Base exception for all rectgeo errors.

    Attributes:
        message: Human-readable error message
    """

    def __init__(self, message: str):
        """Initialize exception with message.

        Args:
            message: Error message describing what went wrong
        """
        self.message = message
        super().__init__(self.message)

    def __repr__(self) -> str:
        """Return detailed representation of the exception."""
        return f"{self.__class__.__name__}('{self.message}')"


# ---------------------------------------------------------------------------
# Complex construction
# ---------------------------------------------------------------------------


class ComplexError(RectGeoException):
    """Base exception for malformed complex input."""

    pass


class MalformedEdgeError(ComplexError):
    """Raised when an edge has a bad endpoint or a non-positive length.

    Attributes:
        edge: The offending (u, v) pair
        reason: What is wrong with it
    """

    def __init__(self, edge: Tuple[int, int], reason: str):
        message = f"Malformed edge {tuple(edge)}: {reason}"
        super().__init__(message)
        self.edge = tuple(edge)
        self.reason = reason


class MalformedFaceError(ComplexError):
    """Raised when a face tuple is not a 4-cycle of the edge set.

    Attributes:
        face: The face tuple as given
        reason: What is wrong with it
    """

    def __init__(self, face: Sequence[int], reason: str):
        message = f"Face {tuple(face)} is not a 4-cycle: {reason}"
        super().__init__(message)
        self.face = tuple(face)
        self.reason = reason


class LengthMismatchError(ComplexError):
    """Raised when opposite sides of a face differ in length.

    Attributes:
        face: Normalized face tuple
        lengths: The two differing side lengths
    """

    def __init__(self, face: Sequence[int], lengths: Tuple[float, float]):
        message = (
            f"Opposite sides of face {tuple(face)} differ in length: "
            f"{lengths[0]!r} vs {lengths[1]!r}"
        )
        super().__init__(message)
        self.face = tuple(face)
        self.lengths = lengths


class UnfilledSquareError(ComplexError):
    """Raised when the graph has a 4-cycle that no face fills.

    Attributes:
        cycle: The empty 4-cycle
    """

    def __init__(self, cycle: Sequence[int]):
        message = f"4-cycle {tuple(cycle)} carries no face"
        super().__init__(message)
        self.cycle = tuple(cycle)


class DuplicateEntityError(ComplexError):
    """Raised when an edge or face is listed twice.

    Attributes:
        kind: 'edge' or 'face'
        entity: The repeated entity
    """

    def __init__(self, kind: str, entity: Sequence[int]):
        message = f"Duplicate {kind} {tuple(entity)}"
        super().__init__(message)
        self.kind = kind
        self.entity = tuple(entity)


class OutOfFaceError(ComplexError):
    """Raised when local coordinates fall outside their face.

    Attributes:
        face_id: Face index
        coords: The (alpha, beta) pair
        sides: The face side lengths
    """

    def __init__(self, face_id: int, coords: Tuple[float, float], sides: Tuple[float, float]):
        message = (
            f"Point {coords} lies outside face {face_id} "
            f"with sides {sides[0]!r} x {sides[1]!r}"
        )
        super().__init__(message)
        self.face_id = face_id
        self.coords = coords
        self.sides = sides


# ---------------------------------------------------------------------------
# CAT(0) validation
# ---------------------------------------------------------------------------


class CatValidationError(RectGeoException):
    """Base exception for complexes that are well formed but not CAT(0)."""

    pass


class DisconnectedComplexError(CatValidationError):
    """Raised when the underlying graph is disconnected.

    Attributes:
        unreachable: A vertex not reachable from vertex 0
    """

    def __init__(self, unreachable: int):
        super().__init__(f"Vertex {unreachable} is not reachable from vertex 0")
        self.unreachable = unreachable


class NotBipartiteError(CatValidationError):
    """Raised when the underlying graph has an odd cycle.

    Attributes:
        cycle: Vertex sequence of an odd closed walk
    """

    def __init__(self, cycle: Sequence[int]):
        super().__init__(f"Odd cycle of length {len(cycle)}: {list(cycle)}")
        self.cycle = list(cycle)


class LinkTriangleError(CatValidationError):
    """Raised when the link of a vertex contains a triangle.

    Attributes:
        vertex: The vertex whose link is bad
        triangle: Three pairwise co-facial edge ids at that vertex
    """

    def __init__(self, vertex: int, triangle: Tuple[int, int, int]):
        super().__init__(f"Link of vertex {vertex} contains triangle on edges {triangle}")
        self.vertex = vertex
        self.triangle = triangle


class NotMedianError(CatValidationError):
    """Raised when a vertex triple has no unique median.

    Attributes:
        triple: The witness triple
        median_count: Number of medians found (0 or more than 1)
    """

    def __init__(self, triple: Tuple[int, int, int], median_count: int):
        super().__init__(f"Triple {triple} has {median_count} medians, expected exactly 1")
        self.triple = triple
        self.median_count = median_count


# ---------------------------------------------------------------------------
# Theta classes
# ---------------------------------------------------------------------------


class ThetaError(RectGeoException):
    """Base exception for Θ-class computation."""

    pass


class InconsistentLengthError(ThetaError):
    """Raised when one Θ-class contains edges of different lengths.

    Attributes:
        class_id: The class
        edges: Two edge ids of differing length
    """

    def __init__(self, class_id: int, edges: Tuple[int, int], lengths: Tuple[float, float]):
        message = (
            f"Theta class {class_id} mixes lengths {lengths[0]!r} (edge {edges[0]}) "
            f"and {lengths[1]!r} (edge {edges[1]})"
        )
        super().__init__(message)
        self.class_id = class_id
        self.edges = edges
        self.lengths = lengths


class ClassCrossingError(ThetaError):
    """Raised when two sides of one face meeting at a corner share a class."""

    def __init__(self, face: Sequence[int], class_id: int):
        super().__init__(f"Adjacent sides of face {tuple(face)} share theta class {class_id}")
        self.face = tuple(face)
        self.class_id = class_id


class UnknownClassError(ThetaError):
    """Raised for a class id outside 0..m-1."""

    def __init__(self, class_id: Any, class_count: int):
        super().__init__(f"Unknown theta class {class_id!r}; there are {class_count} classes")
        self.class_id = class_id
        self.class_count = class_count


# ---------------------------------------------------------------------------
# Query structures
# ---------------------------------------------------------------------------


class StructureError(RectGeoException):
    """Base exception for preprocessing structures."""

    pass


class NotRamifiedError(StructureError):
    """Raised when a tree product is requested but Inc(G) is not bipartite.

    Attributes:
        odd_cycle: Class ids of an odd cycle in Inc(G)
    """

    def __init__(self, odd_cycle: Sequence[int]):
        message = (
            f"Incompatibility graph has an odd cycle {list(odd_cycle)}; "
            f"use the dense structure"
        )
        super().__init__(message)
        self.odd_cycle = list(odd_cycle)


class NotATreeError(StructureError):
    """Raised when contracted components do not form a tree.

    Attributes:
        tree: 1 or 2
        witness: Description of the offending arc or class
    """

    def __init__(self, tree: int, witness: Any):
        super().__init__(f"Contraction T{tree} is not a tree: {witness}")
        self.tree = tree
        self.witness = witness


class EmbeddingMismatchError(StructureError):
    """Raised when tree distances disagree with graph distances.

    Attributes:
        pair: Vertex pair
        graph_distance: BFS distance
        tree_distance: Distance in the tree product
    """

    def __init__(self, pair: Tuple[int, int], graph_distance: int, tree_distance: int):
        message = (
            f"Vertices {pair} are {graph_distance} apart in the graph but "
            f"{tree_distance} apart in the tree product"
        )
        super().__init__(message)
        self.pair = pair
        self.graph_distance = graph_distance
        self.tree_distance = tree_distance


# ---------------------------------------------------------------------------
# Invariant breaches
# ---------------------------------------------------------------------------


class InvariantBreach(RectGeoException):
    """Base exception for contradictions that signal non-CAT(0) input or a bug."""

    pass


class InternalContradictionError(InvariantBreach):
    """Raised when the boundary walk cannot choose a successor.

    Attributes:
        reason: What went wrong
        trace: Steps taken so far as (x, y) vertex pairs
    """

    def __init__(self, reason: str, trace: Optional[List[Tuple[int, int]]] = None):
        self.trace = list(trace or [])
        message = f"Boundary walk contradiction: {reason}"
        if self.trace:
            message += f" after {len(self.trace)} steps (last {self.trace[-1]})"
        super().__init__(message)
        self.reason = reason


class UnfoldMismatchError(InvariantBreach):
    """Raised when the two unfolded boundary paths of a block fail to meet.

    Attributes:
        block: Block index
        end1: Image of the far joint along pi1
        end2: Image of the far joint along pi2
    """

    def __init__(self, block: int, end1: Tuple[float, float], end2: Tuple[float, float]):
        super().__init__(f"Block {block} does not close: {end1} != {end2}")
        self.block = block
        self.end1 = end1
        self.end2 = end2


class NotMonotoneError(InvariantBreach):
    """Raised when a polygon loop is not monotone in the sweep order."""

    def __init__(self, index: int):
        super().__init__(f"Polygon is not monotone at loop index {index}")
        self.index = index


# ---------------------------------------------------------------------------
# Queries
# ---------------------------------------------------------------------------


class QueryError(RectGeoException):
    """Base exception for query-time input problems."""

    pass


class FaceNotInIntervalError(QueryError):
    """Raised when a query point's cell has no image in the unfolding."""

    def __init__(self, cell: Sequence[int]):
        super().__init__(f"Cell {tuple(cell)} is not part of the unfolded interval")
        self.cell = tuple(cell)


class PointOutsideError(QueryError):
    """Raised when a planar point lies outside its polygon."""

    def __init__(self, point: Tuple[float, float]):
        super().__init__(f"Point {point} lies outside the polygon")
        self.point = point


# ---------------------------------------------------------------------------
# Oracle, generation, serialization, configuration
# ---------------------------------------------------------------------------


class OracleError(RectGeoException):
    """Base exception for the discretization oracle."""

    pass


class OracleMemoryError(OracleError):
    """Raised when the sample graph would exceed the configured caps."""

    def __init__(self, what: str, needed: int, cap: int):
        super().__init__(f"Sample graph needs {needed} {what}, cap is {cap}; increase h")
        self.what = what
        self.needed = needed
        self.cap = cap


class GenerationFailedError(RectGeoException):
    """Raised when a random generator runs out of retries.

    Attributes:
        family: Generator family
        seed: Seed that was used
        attempts: Number of attempts made
    """

    def __init__(self, family: str, seed: int, attempts: int):
        super().__init__(
            f"Generator '{family}' failed after {attempts} attempts (seed {seed})"
        )
        self.family = family
        self.seed = seed
        self.attempts = attempts


class SerializationError(RectGeoException):
    """Base exception for serialization errors."""

    pass


class SerializationFormatError(SerializationError):
    """Raised when a requested file format is not supported."""

    def __init__(self, format_name: str, supported_formats: Optional[List[str]] = None):
        message = f"Unsupported serialization format: '{format_name}'."
        if supported_formats:
            message += f" Supported formats: {', '.join(supported_formats)}"
        super().__init__(message)
        self.format_name = format_name
        self.supported_formats = supported_formats or []


class DeserializationError(SerializationError):
    """Raised when a document cannot be turned back into an object.

    Attributes:
        data_type: Type that was expected
        reason: Why it failed
    """

    def __init__(self, data_type: str, reason: str):
        super().__init__(f"Cannot deserialize {data_type}: {reason}")
        self.data_type = data_type
        self.reason = reason


class SerializationVersionError(SerializationError):
    """Raised when a document carries an unknown format_version."""

    def __init__(self, file_version: Any, supported_version: int):
        super().__init__(
            f"Format version {file_version!r} is not supported "
            f"(this library reads version {supported_version})"
        )
        self.file_version = file_version
        self.supported_version = supported_version


class ConfigurationError(RectGeoException):
    """Raised when a setting is unknown or out of range.

    Attributes:
        setting: Name of the setting
        value: The rejected value
        reason: Why it was rejected
    """

    def __init__(self, setting: str, value: Any, reason: str):
        super().__init__(f"Invalid setting {setting}={value!r}: {reason}")
        self.setting = setting
        self.value = value
        self.reason = reason


class ErrorContext:
    """Context manager for adding context to exceptions.

    Examples:
        >>> with ErrorContext("loading structure.json"):
        ...     structure = load_structure("structure.json")
    """

    def __init__(self, context: str):
        """Initialize error context.

        Args:
            context: Description of what's being done
        """
        self.context = context

    def __enter__(self) -> "ErrorContext":
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> bool:
        if exc_type is not None and issubclass(exc_type, RectGeoException):
            exc_val.message = f"{exc_val.message} (context: {self.context})"
            exc_val.args = (exc_val.message,)
        return False


# Exit codes used by the command line interface
EXIT_OK = 0
EXIT_INVALID_INPUT = 1
EXIT_INVARIANT_BREACH = 2
EXIT_IO = 3


def exit_code_for(exc: BaseException) -> int:
    """Map an exception to the CLI exit code.

    Args:
        exc: Exception raised while serving a command

    Returns:
        Process exit code
    """
    if isinstance(exc, (InvariantBreach, EmbeddingMismatchError)):
        return EXIT_INVARIANT_BREACH
    if isinstance(exc, (SerializationError, OSError)):
        return EXIT_IO
    return EXIT_INVALID_INPUT
