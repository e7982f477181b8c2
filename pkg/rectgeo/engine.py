"""Two-point shortest path queries.

A query runs seven steps: pick gate vertices p, q of the cells holding x and y; walk the
boundary of I(p, q); unfold it into a chain of monotone polygons; locate x and y in the
first and last polygon; triangulate each polygon and run the funnel between consecutive
joints; concatenate the pieces; map planar breakpoints back to complex vertices.
"""

import logging
import time
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from rectgeo.boundary import IntervalBoundary, boundary_walk, select_gates
from rectgeo.complex import PointSpec, RectComplex, canonical_point, minimal_cell
from rectgeo.config import get_settings
from rectgeo.exceptions import FaceNotInIntervalError
from rectgeo.polygon import PlanarPath, funnel_path, triangulate_monotone
from rectgeo.structures import QueryStructure, interval_vertices
from rectgeo.unfolding import (
    SOURCE,
    TARGET,
    UnfoldedChain,
    embed_interval,
    locate_in_unfolding,
    unfold,
)

logger = logging.getLogger(__name__)

Breakpoint = Union[PointSpec, int]


@dataclass(frozen=True)
class GeodesicPath:
    """
    Shortest path between two points of a complex.

    Attributes:
        breakpoints: x, the complex vertices where the path bends or crosses a joint, y
        length: Intrinsic l2 length
        block_trace: Per block, its sub-length, bend vertices and straight-through vertices
        gates: (p, q)
        steps: Boundary walk steps over both paths
        micros: Wall-clock time of the query
        planar: Planar polyline in the unfolded chain
        probes: Binary-search probes of the tree-product walk
        max_probes: Largest probe count of a single lookup
    """

    breakpoints: Tuple[Breakpoint, ...]
    length: float
    block_trace: Tuple[Dict[str, object], ...]
    gates: Tuple[int, int]
    steps: int
    micros: float
    planar: Tuple[Tuple[float, float], ...] = ()
    probes: int = 0
    max_probes: int = 0

    @property
    def source(self) -> PointSpec:
        return self.breakpoints[0]  # type: ignore[return-value]

    @property
    def target(self) -> PointSpec:
        return self.breakpoints[-1]  # type: ignore[return-value]

    @property
    def vertices(self) -> List[int]:
        """Interior breakpoints (complex vertex ids)."""
        return [b for b in self.breakpoints[1:-1]]  # type: ignore[misc]

    def to_dict(self, timing: bool = False) -> Dict[str, object]:
        out: Dict[str, object] = {
            "breakpoints": [
                b if isinstance(b, int) else {"face": b.face_id, "alpha": b.alpha, "beta": b.beta}
                for b in self.breakpoints
            ],
            "length": self.length,
            "gates": list(self.gates),
            "blocks": list(self.block_trace),
            "steps": self.steps,
            "probes": self.probes,
        }
        if timing:
            out["micros"] = self.micros
        return out


@dataclass(frozen=True)
class _Solution:
    x: PointSpec
    y: PointSpec
    boundary: IntervalBoundary
    chain: Optional[UnfoldedChain]
    pieces: Tuple[PlanarPath, ...]


def _solve(K: RectComplex, S: QueryStructure, x: PointSpec, y: PointSpec) -> _Solution:
    x = canonical_point(K, x)
    y = canonical_point(K, y)
    p, q = select_gates(S, minimal_cell(K, x), minimal_cell(K, y))
    B = boundary_walk(S, p, q)
    if p == q:
        # both points are the vertex p
        return _Solution(x, y, B, None, ())

    chain = unfold(B, S.theta)
    fx, _ = locate_in_unfolding(chain, K, x, SOURCE)
    fy, last = locate_in_unfolding(chain, K, y, TARGET)
    pieces: List[PlanarPath] = []
    for block in chain.blocks:
        s = fx if block.index == 0 else chain.image(block.start)
        t = fy if block.index == last else chain.image(block.end)
        if block.bridge:
            seg = (tuple(map(float, s)), tuple(map(float, t)))
            pieces.append(
                PlanarPath(seg, (None, None), (), float(np.hypot(*(np.subtract(t, s)))))  # type: ignore
            )
        else:
            pieces.append(funnel_path(triangulate_monotone(block.loop), s, t))
    return _Solution(x, y, B, chain, tuple(pieces))


def query(K: RectComplex, S: QueryStructure, x: PointSpec, y: PointSpec) -> GeodesicPath:
    """
    Shortest path from x to y.

    Args:
        K: Complex
        S: Query structure built for K
        x: Source point
        y: Target point

    Returns:
        GeodesicPath whose interior breakpoints are bend vertices and articulation vertices

    Examples:
        >>> path = query(K, S, PointSpec(1, 1.0, 0.5), PointSpec(2, 0.5, 1.0))
        >>> path.vertices, round(path.length, 6)
        ([4], 2.236068)
    """
    t0 = time.perf_counter()
    sol = _solve(K, S, x, y)
    B = sol.boundary
    steps = sum(B.steps)
    if sol.chain is None:
        micros = (time.perf_counter() - t0) * 1e6
        return GeodesicPath(
            (sol.x, sol.y), 0.0, (), (B.p, B.q), steps, micros, (), B.probes, B.max_probes
        )

    chain = sol.chain
    breakpoints: List[Breakpoint] = [sol.x]
    trace: List[Dict[str, object]] = []
    planar: List[Tuple[float, float]] = []
    total = 0.0
    for block, piece in zip(chain.blocks, sol.pieces):
        bends = [block.loop_vertices[i] for i in piece.vertices[1:-1]]  # type: ignore[index]
        breakpoints.extend(bends)
        if block.index < len(chain.blocks) - 1:
            breakpoints.append(block.end)
        trace.append(
            {
                "block": block.index,
                "start": block.start,
                "end": block.end,
                "length": piece.length,
                "bends": bends,
                "passed": [block.loop_vertices[i] for i in piece.passed],
            }
        )
        total += piece.length
        for pt in piece.points:
            if not planar or planar[-1] != pt:
                planar.append(pt)
    breakpoints.append(sol.y)

    deduped: List[Breakpoint] = []
    for b in breakpoints:
        if not deduped or deduped[-1] != b:
            deduped.append(b)
    micros = (time.perf_counter() - t0) * 1e6
    logger.debug(
        "query() gates=(%d, %d) blocks=%d length=%.12g micros=%.1f",
        B.p, B.q, len(chain.blocks), total, micros,
    )
    return GeodesicPath(
        tuple(deduped), total, tuple(trace), (B.p, B.q), steps, micros, tuple(planar),
        B.probes, B.max_probes,
    )


def distance(K: RectComplex, S: QueryStructure, x: PointSpec, y: PointSpec) -> float:
    """Length of the shortest path from x to y, without mapping breakpoints back."""
    sol = _solve(K, S, x, y)
    return float(sum(piece.length for piece in sol.pieces))


def _block_vertices(S: QueryStructure, chain: UnfoldedChain, block: int) -> List[int]:
    b = chain.blocks[block]
    return interval_vertices(S, b.start, b.end)


def _locate_in_block(
    K: RectComplex,
    S: QueryStructure,
    chain: UnfoldedChain,
    block: int,
    point: np.ndarray,
    images: Dict[int, Tuple[float, float]],
) -> PointSpec:
    tol = max(get_settings().closure_atol, 1e-9)
    members = set(_block_vertices(S, chain, block))
    faces = sorted({f for v in members for f in K.faces_of_vertex(v)})
    for f in faces:
        face = K.faces[f]
        if not all(v in members for v in face):
            continue
        p0, p1, _, p3 = (np.asarray(images[v], dtype=float) for v in face)
        la, lb = K.face_sides(f)
        alpha = float(np.dot(point - p0, (p1 - p0) / la))
        beta = float(np.dot(point - p0, (p3 - p0) / lb))
        if -tol <= alpha <= la + tol and -tol <= beta <= lb + tol:
            return canonical_point(
                K, PointSpec(f, min(max(alpha, 0.0), la), min(max(beta, 0.0), lb))
            )
    b = chain.blocks[block]
    if b.bridge:
        u, w = b.start, b.end
        owners = K.faces_of_edge(K.edge_id(u, w))
        if owners:
            f = owners[0]
            fu, fw = (np.asarray(images[v], dtype=float) for v in (u, w))
            t = float(np.linalg.norm(point - fu) / np.linalg.norm(fw - fu))
            la, lb = K.face_sides(f)
            corners = [(0.0, 0.0), (la, 0.0), (la, lb), (0.0, lb)]
            cu = np.array(corners[K.faces[f].index(u)])
            cw = np.array(corners[K.faces[f].index(w)])
            spot = cu + t * (cw - cu)
            return canonical_point(K, PointSpec(f, float(spot[0]), float(spot[1])))
    raise FaceNotInIntervalError((b.start, b.end))


def point_at(
    K: RectComplex, S: QueryStructure, x: PointSpec, y: PointSpec, fraction: float
) -> PointSpec:
    """
    The point of the geodesic from x to y at a given fraction of its length.

    Args:
        fraction: 0 gives x, 1 gives y

    Returns:
        Canonical PointSpec
    """
    if not 0.0 <= fraction <= 1.0:
        raise ValueError(f"fraction must lie in [0, 1], got {fraction}")
    sol = _solve(K, S, x, y)
    if sol.chain is None:
        return sol.x
    total = sum(piece.length for piece in sol.pieces)
    goal = fraction * total
    images = embed_interval(sol.chain, S)
    walked = 0.0
    for block, piece in enumerate(sol.pieces):
        pts = [np.asarray(pt, dtype=float) for pt in piece.points]
        for a, b in zip(pts, pts[1:]):
            seg = float(np.linalg.norm(b - a))
            if walked + seg >= goal or (block == len(sol.pieces) - 1 and b is pts[-1]):
                t = 0.0 if seg == 0 else min(max((goal - walked) / seg, 0.0), 1.0)
                return _locate_in_block(K, S, sol.chain, block, a + t * (b - a), images)
            walked += seg
    return sol.y


def interior_in_interval(S: QueryStructure, path: GeodesicPath) -> bool:
    """True when every interior breakpoint lies in I(p, q)."""
    p, q = path.gates
    dpq = S.distance(p, q)
    return all(S.distance(p, z) + S.distance(z, q) == dpq for z in path.vertices)


def batch_query(
    K: RectComplex, S: QueryStructure, pairs: Sequence[Tuple[PointSpec, PointSpec]]
) -> List[GeodesicPath]:
    """Run queries in order."""
    return [query(K, S, x, y) for x, y in pairs]
