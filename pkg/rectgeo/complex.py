"""Rectangular complexes, query points and CAT(0) validation.

A :class:`RectComplex` is a 2-dimensional cell complex whose cells are axis-parallel
rectangles glued along edges. The class stores the underlying graph with edge lengths,
the faces as normalized 4-cycles, and the link of every vertex. It is immutable once
:func:`build_complex` returns it.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from rectgeo.config import get_settings
from rectgeo.exceptions import (
    DisconnectedComplexError,
    DuplicateEntityError,
    LengthMismatchError,
    LinkTriangleError,
    MalformedEdgeError,
    MalformedFaceError,
    NotBipartiteError,
    NotMedianError,
    OutOfFaceError,
    UnfilledSquareError,
)

logger = logging.getLogger(__name__)

Edge = Tuple[int, int]
Face = Tuple[int, int, int, int]
RawEdge = Union[Tuple[int, int], Tuple[int, int, float], Sequence[float]]

# (alpha, beta) position of each face corner in units of the side lengths
_CORNER_UNITS = ((0, 0), (1, 0), (1, 1), (0, 1))


@dataclass(frozen=True)
class PointSpec:
    """
    A point of a complex given by local coordinates in one of its faces.

    The frame is anchored at the face's first vertex v0 with the alpha axis along v0->v1
    and the beta axis along v0->v3.

    Attributes:
        face_id: Index into the complex's faces
        alpha: Coordinate along v0->v1, 0 <= alpha <= len(v0v1)
        beta: Coordinate along v0->v3, 0 <= beta <= len(v0v3)
    """

    face_id: int
    alpha: float
    beta: float

    def key(self) -> Tuple[int, float, float]:
        return (self.face_id, self.alpha, self.beta)

    def to_list(self) -> List[float]:
        return [self.face_id, self.alpha, self.beta]

    @classmethod
    def parse(cls, text: str) -> "PointSpec":
        """
        Parse a 'face,alpha,beta' string.

        Examples:
            >>> PointSpec.parse("1,1,0.5")
            PointSpec(face_id=1, alpha=1.0, beta=0.5)
        """
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected 'face,alpha,beta', got {text!r}")
        return cls(int(parts[0]), float(parts[1]), float(parts[2]))


def normalize_face(face: Sequence[int]) -> Face:
    """
    Rotate a cyclic 4-tuple to start at its minimum vertex, second entry the smaller neighbor.

    Examples:
        >>> normalize_face((5, 2, 7, 3))
        (2, 3, 7, 5)
    """
    i = int(np.argmin(face))
    forward = tuple(face[(i + k) % 4] for k in range(4))
    backward = tuple(face[(i - k) % 4] for k in range(4))
    return forward if forward[1] < backward[1] else backward  # type: ignore[return-value]


class RectComplex:
    """
    Immutable rectangular complex.

    Use :func:`build_complex` to create one; the constructor trusts its arguments.

    Attributes:
        vertex_count: Number of vertices n
        edges: Edge endpoints (u, v) with u < v, in input order
        lengths: Edge lengths aligned with edges
        faces: Normalized face tuples in input order
    """

    def __init__(
        self,
        vertex_count: int,
        edges: Sequence[Edge],
        lengths: Sequence[float],
        faces: Sequence[Face],
    ):
        self._n = int(vertex_count)
        self._edges: Tuple[Edge, ...] = tuple(edges)
        self._lengths = np.asarray(lengths, dtype=float)
        self._lengths.setflags(write=False)
        self._faces: Tuple[Face, ...] = tuple(faces)
        self._edge_index: Dict[Edge, int] = {e: i for i, e in enumerate(self._edges)}

        nbrs: List[List[Tuple[int, int]]] = [[] for _ in range(self._n)]
        for i, (u, v) in enumerate(self._edges):
            nbrs[u].append((v, i))
            nbrs[v].append((u, i))
        self._adjacency = tuple(tuple(sorted(row)) for row in nbrs)

        edge_faces: List[List[int]] = [[] for _ in self._edges]
        vertex_faces: List[List[int]] = [[] for _ in range(self._n)]
        links: List[Dict[int, List[int]]] = [
            {e: [] for _, e in self._adjacency[v]} for v in range(self._n)
        ]
        for f, face in enumerate(self._faces):
            sides = self.face_edges(f)
            for k in range(4):
                edge_faces[sides[k]].append(f)
                v = face[k]
                vertex_faces[v].append(f)
                # the two sides meeting at corner k
                a, b = sides[k - 1], sides[k]
                links[v][a].append(b)
                links[v][b].append(a)
        self._edge_faces = tuple(tuple(fs) for fs in edge_faces)
        self._vertex_faces = tuple(tuple(fs) for fs in vertex_faces)
        self._links = tuple(
            {e: tuple(sorted(adj)) for e, adj in link.items()} for link in links
        )
        self._graph: Optional[sparse.csr_matrix] = None

    # Properties
    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def edges(self) -> Tuple[Edge, ...]:
        return self._edges

    @property
    def lengths(self) -> np.ndarray:
        return self._lengths

    @property
    def faces(self) -> Tuple[Face, ...]:
        return self._faces

    @property
    def adjacency(self) -> Tuple[Tuple[Tuple[int, int], ...], ...]:
        """Per vertex, (neighbor, edge id) pairs sorted by neighbor id."""
        return self._adjacency

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(w for w, _ in self._adjacency[v])

    def degree(self, v: int) -> int:
        return len(self._adjacency[v])

    def edge_id(self, u: int, v: int) -> int:
        """Return the id of edge uv; raises KeyError if absent."""
        return self._edge_index[(u, v) if u < v else (v, u)]

    def has_edge(self, u: int, v: int) -> bool:
        return ((u, v) if u < v else (v, u)) in self._edge_index

    def edge_length(self, u: int, v: int) -> float:
        return float(self._lengths[self.edge_id(u, v)])

    def face_edges(self, face_id: int) -> Tuple[int, int, int, int]:
        """Edge ids of the sides v0v1, v1v2, v2v3, v3v0."""
        f = self._faces[face_id]
        return tuple(self.edge_id(f[k], f[(k + 1) % 4]) for k in range(4))  # type: ignore

    def face_sides(self, face_id: int) -> Tuple[float, float]:
        """Side lengths (len(v0v1), len(v0v3)) of a face."""
        v0, v1, _, v3 = self._faces[face_id]
        return self.edge_length(v0, v1), self.edge_length(v0, v3)

    def faces_of_edge(self, edge_id: int) -> Tuple[int, ...]:
        return self._edge_faces[edge_id]

    def faces_of_vertex(self, v: int) -> Tuple[int, ...]:
        return self._vertex_faces[v]

    def link(self, v: int) -> Dict[int, Tuple[int, ...]]:
        """Link(v) as adjacency: incident edge id -> co-facial incident edge ids."""
        return dict(self._links[v])

    def graph(self) -> sparse.csr_matrix:
        """Unweighted symmetric adjacency matrix of the underlying graph."""
        if self._graph is None:
            if self._edges:
                u, v = np.array(self._edges, dtype=np.int64).T
                rows, cols = np.concatenate([u, v]), np.concatenate([v, u])
            else:
                rows = cols = np.zeros(0, dtype=np.int64)
            data = np.ones(len(rows), dtype=np.int8)
            self._graph = sparse.csr_matrix((data, (rows, cols)), shape=(self._n, self._n))
        return self._graph

    def distance_matrix(self) -> np.ndarray:
        """All-pairs hop distances; -1 marks unreachable pairs."""
        dist = csgraph.shortest_path(self.graph(), directed=False, unweighted=True)
        out = np.full(dist.shape, -1, dtype=np.int64)
        finite = np.isfinite(dist)
        out[finite] = dist[finite].astype(np.int64)
        return out

    def min_length(self) -> float:
        return float(self._lengths.min()) if len(self._lengths) else 1.0

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RectComplex):
            return NotImplemented
        return (
            self._n == other._n
            and self._edges == other._edges
            and self._faces == other._faces
            and np.array_equal(self._lengths, other._lengths)
        )

    def __hash__(self) -> int:
        return hash((self._n, self._edges, self._faces))

    def __repr__(self) -> str:
        return (
            f"RectComplex(n={self._n}, edges={len(self._edges)}, faces={len(self._faces)})"
        )


def _parse_edge(raw: RawEdge) -> Tuple[int, int, float]:
    if len(raw) == 2:
        u, v = raw  # type: ignore[misc]
        length = 1.0
    elif len(raw) == 3:
        u, v, length = raw  # type: ignore[misc]
    else:
        raise MalformedEdgeError(tuple(raw)[:2], f"expected 2 or 3 entries, got {len(raw)}")
    return int(u), int(v), float(length)


def build_complex(
    vertex_count: int,
    edges: Iterable[RawEdge],
    faces: Iterable[Sequence[int]],
) -> RectComplex:
    """
    Build and structurally check a rectangular complex.

    Args:
        vertex_count: Number of vertices n; ids are 0..n-1
        edges: (u, v) or (u, v, length) entries; length defaults to 1.0
        faces: Cyclic 4-tuples of vertex ids

    Returns:
        RectComplex with adjacency and links materialized

    Raises:
        MalformedEdgeError: Endpoint out of range, loop, or non-positive length
        DuplicateEntityError: Repeated edge or face
        MalformedFaceError: Face tuple is not a 4-cycle of the edge set
        LengthMismatchError: Opposite sides of a face differ
        UnfilledSquareError: A 4-cycle of the graph carries no face

    Examples:
        >>> K = build_complex(4, [(0, 1), (1, 2), (2, 3), (0, 3)], [(0, 1, 2, 3)])
        >>> K.vertex_count, len(K.faces)
        (4, 1)
    """
    n = int(vertex_count)
    if n < 0:
        raise MalformedEdgeError((n, n), "vertex count must be nonnegative")
    rtol = get_settings().length_rtol

    edge_list: List[Edge] = []
    lengths: List[float] = []
    seen: Dict[Edge, int] = {}
    for raw in edges:
        u, v, length = _parse_edge(raw)
        if not (0 <= u < n and 0 <= v < n):
            raise MalformedEdgeError((u, v), f"endpoint out of range 0..{n - 1}")
        if u == v:
            raise MalformedEdgeError((u, v), "loop")
        if not np.isfinite(length) or length <= 0:
            raise MalformedEdgeError((u, v), f"length {length!r} must be positive")
        key = (u, v) if u < v else (v, u)
        if key in seen:
            raise DuplicateEntityError("edge", key)
        seen[key] = len(edge_list)
        edge_list.append(key)
        lengths.append(length)

    face_list: List[Face] = []
    face_keys: Dict[Face, int] = {}
    for raw_face in faces:
        face = tuple(int(v) for v in raw_face)
        if len(face) != 4:
            raise MalformedFaceError(face, f"expected 4 vertices, got {len(face)}")
        if len(set(face)) != 4:
            raise MalformedFaceError(face, "repeated vertex")
        for k in range(4):
            a, b = face[k], face[(k + 1) % 4]
            if not (0 <= a < n):
                raise MalformedFaceError(face, f"vertex {a} out of range")
            if ((a, b) if a < b else (b, a)) not in seen:
                raise MalformedFaceError(face, f"missing edge ({a}, {b})")
        norm = normalize_face(face)
        if norm in face_keys:
            raise DuplicateEntityError("face", norm)
        side = [lengths[seen[tuple(sorted((norm[k], norm[(k + 1) % 4])))]] for k in range(4)]
        for s1, s2 in ((side[0], side[2]), (side[1], side[3])):
            if abs(s1 - s2) > rtol * max(s1, s2):
                raise LengthMismatchError(norm, (s1, s2))
        face_keys[norm] = len(face_list)
        face_list.append(norm)

    K = RectComplex(n, edge_list, lengths, face_list)
    cycle = _find_unfilled_square(K, face_keys)
    if cycle is not None:
        raise UnfilledSquareError(cycle)
    logger.debug("build_complex() n=%d edges=%d faces=%d", n, len(edge_list), len(face_list))
    return K


def _find_unfilled_square(K: RectComplex, face_keys: Dict[Face, int]) -> Optional[Face]:
    nbr_sets = [set(K.neighbors(v)) for v in range(K.vertex_count)]
    for a in range(K.vertex_count):
        higher = [w for w in K.neighbors(a) if w > a]
        for i, b in enumerate(higher):
            for d in higher[i + 1:]:
                for c in sorted(nbr_sets[b] & nbr_sets[d]):
                    if c <= a:
                        continue
                    cycle = normalize_face((a, b, c, d))
                    if cycle not in face_keys:
                        return cycle
    return None


# ---------------------------------------------------------------------------
# Points and minimal cells
# ---------------------------------------------------------------------------


def _checked_point(K: RectComplex, pt: PointSpec) -> PointSpec:
    if not (0 <= pt.face_id < len(K.faces)):
        raise OutOfFaceError(pt.face_id, (pt.alpha, pt.beta), (0.0, 0.0))
    la, lb = K.face_sides(pt.face_id)
    tol = get_settings().point_atol
    if not (-tol <= pt.alpha <= la + tol and -tol <= pt.beta <= lb + tol):
        raise OutOfFaceError(pt.face_id, (pt.alpha, pt.beta), (la, lb))
    return PointSpec(pt.face_id, min(max(pt.alpha, 0.0), la), min(max(pt.beta, 0.0), lb))


def corner_coords(K: RectComplex, face_id: int) -> List[Tuple[float, float]]:
    """Local (alpha, beta) coordinates of the face corners v0..v3."""
    la, lb = K.face_sides(face_id)
    return [(ua * la, ub * lb) for ua, ub in _CORNER_UNITS]


def minimal_cell(K: RectComplex, pt: PointSpec) -> Tuple[int, ...]:
    """
    Smallest cell containing a point: (v,), a sorted edge (u, v), or the face's 4 vertices.

    Coordinates within point_atol of a side or corner demote the cell.
    """
    pt = _checked_point(K, pt)
    la, lb = K.face_sides(pt.face_id)
    tol = get_settings().point_atol
    v0, v1, v2, v3 = K.faces[pt.face_id]
    a_lo, a_hi = abs(pt.alpha) <= tol, abs(pt.alpha - la) <= tol
    b_lo, b_hi = abs(pt.beta) <= tol, abs(pt.beta - lb) <= tol
    if a_lo and b_lo:
        return (v0,)
    if a_hi and b_lo:
        return (v1,)
    if a_hi and b_hi:
        return (v2,)
    if a_lo and b_hi:
        return (v3,)
    for on_side, u, v in ((b_lo, v0, v1), (a_hi, v1, v2), (b_hi, v3, v2), (a_lo, v0, v3)):
        if on_side:
            return (min(u, v), max(u, v))
    return (v0, v1, v2, v3)


def offset_from(K: RectComplex, pt: PointSpec, vertex: int) -> float:
    """Distance from a corner of pt's face to pt, for pt on a side through that corner."""
    k = K.faces[pt.face_id].index(vertex)
    ca, cb = corner_coords(K, pt.face_id)[k]
    return abs(pt.alpha - ca) + abs(pt.beta - cb)


def point_in_faces(K: RectComplex, pt: PointSpec) -> List[PointSpec]:
    """
    Every spec of the same geometric point, one per face containing its minimal cell.

    The result is sorted by (face_id, alpha, beta); its first entry is canonical.
    """
    pt = _checked_point(K, pt)
    cell = minimal_cell(K, pt)
    if len(cell) == 4:
        return [pt]
    specs = []
    if len(cell) == 1:
        (v,) = cell
        for f in K.faces_of_vertex(v):
            ca, cb = corner_coords(K, f)[K.faces[f].index(v)]
            specs.append(PointSpec(f, ca, cb))
    else:
        u, w = cell
        length = K.edge_length(u, w)
        t = min(offset_from(K, pt, u), length) / length
        for f in K.faces_of_edge(K.edge_id(u, w)):
            corners = corner_coords(K, f)
            cu = corners[K.faces[f].index(u)]
            cw = corners[K.faces[f].index(w)]
            specs.append(
                PointSpec(f, cu[0] + t * (cw[0] - cu[0]), cu[1] + t * (cw[1] - cu[1]))
            )
    return sorted(specs, key=PointSpec.key)


def canonical_point(K: RectComplex, pt: PointSpec) -> PointSpec:
    """
    Canonical spec of a point: smallest face id, then smallest (alpha, beta).

    Raises:
        OutOfFaceError: Face id or coordinates out of range

    Examples:
        >>> canonical_point(K, PointSpec(0, 0.5, 0.5))
        PointSpec(face_id=0, alpha=0.5, beta=0.5)
    """
    return point_in_faces(K, pt)[0]


def cell_distance(K: RectComplex, pt: PointSpec, other: PointSpec) -> float:
    """Euclidean distance between two specs of the same face."""
    return float(np.hypot(pt.alpha - other.alpha, pt.beta - other.beta))


def random_point(K: RectComplex, rng: np.random.Generator, snap: float = 0.0) -> PointSpec:
    """
    Draw a canonical point uniformly over faces, optionally snapping to sides.

    Args:
        K: Complex with at least one face
        rng: numpy Generator
        snap: Probability that each coordinate is snapped to 0 or its side length
    """
    f = int(rng.integers(len(K.faces)))
    la, lb = K.face_sides(f)
    coords = []
    for side in (la, lb):
        if snap and rng.random() < snap:
            coords.append(side * float(rng.integers(2)))
        else:
            coords.append(side * float(rng.random()))
    return canonical_point(K, PointSpec(f, coords[0], coords[1]))


# ---------------------------------------------------------------------------
# CAT(0) validation
# ---------------------------------------------------------------------------


@dataclass
class ValidationReport:
    """
    Result of :func:`validate_cat0`.

    Every check is recorded with its witness; ``accepted`` is true iff all hold.
    """

    connected: bool = True
    unreachable: Optional[int] = None
    bipartite: bool = True
    odd_cycle: Optional[List[int]] = None
    links_triangle_free: bool = True
    link_triangle: Optional[Tuple[int, Tuple[int, int, int]]] = None
    median: bool = True
    median_witness: Optional[Tuple[int, int, int]] = None
    median_count: Optional[int] = None
    probabilistic: bool = False
    triples_checked: int = 0
    sizes: Dict[str, int] = field(default_factory=dict)

    @property
    def accepted(self) -> bool:
        return self.connected and self.bipartite and self.links_triangle_free and self.median

    def raise_for_status(self) -> None:
        """Raise the first failed check as an exception."""
        if not self.connected:
            raise DisconnectedComplexError(self.unreachable)  # type: ignore[arg-type]
        if not self.bipartite:
            raise NotBipartiteError(self.odd_cycle or [])
        if not self.links_triangle_free:
            v, tri = self.link_triangle  # type: ignore[misc]
            raise LinkTriangleError(v, tri)
        if not self.median:
            raise NotMedianError(self.median_witness, self.median_count)  # type: ignore

    def to_dict(self) -> Dict[str, object]:
        return {
            "accepted": self.accepted,
            "connected": self.connected,
            "unreachable": self.unreachable,
            "bipartite": self.bipartite,
            "odd_cycle": self.odd_cycle,
            "links_triangle_free": self.links_triangle_free,
            "link_triangle": (
                None
                if self.link_triangle is None
                else {"vertex": self.link_triangle[0], "edges": list(self.link_triangle[1])}
            ),
            "median": self.median,
            "median_witness": None if self.median_witness is None else list(self.median_witness),
            "median_count": self.median_count,
            "probabilistic": self.probabilistic,
            "triples_checked": self.triples_checked,
            "sizes": dict(self.sizes),
        }


def _odd_cycle(K: RectComplex, dist0: np.ndarray) -> Optional[List[int]]:
    _, pred = csgraph.breadth_first_order(
        K.graph(), 0, directed=False, return_predecessors=True
    )
    for u, v in K.edges:
        if dist0[u] == dist0[v]:
            left, right = [u], [v]
            while left[-1] != right[-1]:
                left.append(int(pred[left[-1]]))
                right.append(int(pred[right[-1]]))
            return left + right[-2::-1]
    return None


def _link_triangle(K: RectComplex) -> Optional[Tuple[int, Tuple[int, int, int]]]:
    for v in range(K.vertex_count):
        link = {e: set(adj) for e, adj in K.link(v).items()}
        for a in sorted(link):
            for b in sorted(link[a]):
                if b <= a:
                    continue
                common = sorted(c for c in link[a] & link[b] if c > b)
                if common:
                    return v, (a, b, common[0])
    return None


def _median_counts(D: np.ndarray, triples: np.ndarray) -> np.ndarray:
    u, v, w = triples[:, 0], triples[:, 1], triples[:, 2]
    half = (D[u, v] + D[v, w] + D[u, w]) // 2
    total = D[u] + D[v] + D[w]
    return (total == half[:, None]).sum(axis=1)


def validate_cat0(
    K: RectComplex, strict: bool = False, seed: int = 0
) -> ValidationReport:
    """
    Check that the underlying graph is a connected bipartite median graph with triangle-free
    links.

    Medianness is checked on every vertex triple when n is at most
    ``Settings.median_exhaustive_max``, otherwise on ``Settings.median_samples`` random triples
    and the report is flagged probabilistic. Cube-freeness is implied and not checked.

    Args:
        K: Structurally valid complex
        strict: Raise the first failure instead of returning the report
        seed: Seed for sampled triples

    Returns:
        ValidationReport

    Raises:
        DisconnectedComplexError, NotBipartiteError, LinkTriangleError, NotMedianError:
            only when strict is true
    """
    cfg = get_settings()
    n = K.vertex_count
    report = ValidationReport(
        sizes={"vertices": n, "edges": len(K.edges), "faces": len(K.faces)}
    )
    if n == 0:
        return report

    D = K.distance_matrix()
    unreachable = np.flatnonzero(D[0] < 0)
    if len(unreachable):
        report.connected = False
        report.unreachable = int(unreachable[0])
        report.median = False

    if report.connected:
        cycle = _odd_cycle(K, D[0])
        if cycle is not None:
            report.bipartite = False
            report.odd_cycle = cycle

    tri = _link_triangle(K)
    if tri is not None:
        report.links_triangle_free = False
        report.link_triangle = tri

    if report.connected:
        if n <= cfg.median_exhaustive_max:
            for u in range(n):
                for v in range(u + 1, n - 1):
                    ws = np.arange(v + 1, n)
                    triples = np.column_stack(
                        [np.full(len(ws), u), np.full(len(ws), v), ws]
                    )
                    counts = _median_counts(D, triples)
                    report.triples_checked += len(ws)
                    bad = np.flatnonzero(counts != 1)
                    if len(bad):
                        report.median = False
                        report.median_witness = tuple(int(x) for x in triples[bad[0]])
                        report.median_count = int(counts[bad[0]])
                        break
                if not report.median:
                    break
        else:
            report.probabilistic = True
            rng = np.random.Generator(np.random.PCG64(seed))
            remaining = cfg.median_samples
            while remaining > 0 and report.median:
                chunk = min(remaining, 1000)
                triples = rng.integers(n, size=(chunk, 3))
                counts = _median_counts(D, triples)
                report.triples_checked += chunk
                remaining -= chunk
                bad = np.flatnonzero(counts != 1)
                if len(bad):
                    report.median = False
                    report.median_witness = tuple(int(x) for x in triples[bad[0]])
                    report.median_count = int(counts[bad[0]])

    logger.debug(
        "validate_cat0() n=%d accepted=%s triples=%d probabilistic=%s",
        n, report.accepted, report.triples_checked, report.probabilistic,
    )
    if strict:
        report.raise_for_status()
    return report
