"""Planar unfolding of an interval boundary into a chain of monotone polygons.

Between consecutive articulation vertices the interval is a disk whose boundary is one
piece of pi1 and one piece of pi2. The pi1 piece is drawn starting upward and the pi2 piece
starting rightward; at a convex vertex (deg0 2) each path turns toward the other one, at a
reflex vertex (deg0 4) away from it, and at a flat vertex (deg0 3) it goes straight. Edge
images have the length of their Θ-class. A bridge block (a single edge) is drawn rightward.
"""

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from rectgeo.boundary import IntervalBoundary
from rectgeo.complex import PointSpec, RectComplex, minimal_cell, offset_from
from rectgeo.config import get_settings
from rectgeo.exceptions import FaceNotInIntervalError, UnfoldMismatchError
from rectgeo.structures import QueryStructure, interval_vertices
from rectgeo.theta import ThetaDecomposition

logger = logging.getLogger(__name__)

Point = Tuple[float, float]

UP = (0.0, 1.0)
RIGHT = (1.0, 0.0)

SOURCE = "source"
TARGET = "target"


def _cw(d: Point) -> Point:
    return (d[1], -d[0])


def _ccw(d: Point) -> Point:
    return (-d[1], d[0])


@dataclass(frozen=True)
class UnfoldedBlock:
    """
    One polygon of the chain.

    Attributes:
        index: Position in the chain
        loop: k x 2 array of planar points in counter-clockwise order, starting at the
            image of the block's first joint
        loop_vertices: Complex vertex behind each loop point
        start: Joint vertex nearest p
        end: Joint vertex nearest q
        bridge: True for a single-edge block (loop holds two points)
        turns: Interior loop vertex -> 'convex', 'reflex' or 'flat'
    """

    index: int
    loop: np.ndarray
    loop_vertices: Tuple[int, ...]
    start: int
    end: int
    bridge: bool
    turns: Dict[int, str]

    @property
    def reflex_vertices(self) -> List[int]:
        return [v for v, kind in self.turns.items() if kind == "reflex"]

    def area(self) -> float:
        if self.bridge:
            return 0.0
        x, y = self.loop[:, 0], self.loop[:, 1]
        return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class UnfoldedChain:
    """
    The unfolded boundary of G(I(p, q)).

    Attributes:
        boundary: The walk output this chain was drawn from
        blocks: Polygons from p to q
        joints: Images of the inner articulation vertices s1..s_{m-1}
        vertex_image: Boundary vertex -> planar point
        class_direction: Θ-class -> unit direction of its edges in the plane
    """

    boundary: IntervalBoundary
    blocks: Tuple[UnfoldedBlock, ...]
    joints: Tuple[Point, ...]
    vertex_image: Dict[int, Point]
    class_direction: Dict[int, Point]

    def image(self, v: int) -> np.ndarray:
        return np.asarray(self.vertex_image[v], dtype=float)

    def vertex_at(self, block: int, point: Sequence[float], atol: float = 1e-9) -> Optional[int]:
        """Complex vertex whose image in a block is the given point, if any."""
        b = self.blocks[block]
        hits = np.flatnonzero(np.abs(b.loop - np.asarray(point)).max(axis=1) <= atol)
        return b.loop_vertices[int(hits[0])] if len(hits) else None

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.boundary.p,
            "q": self.boundary.q,
            "blocks": [
                {
                    "loop": b.loop.tolist(),
                    "vertices": list(b.loop_vertices),
                    "start": b.start,
                    "end": b.end,
                    "bridge": b.bridge,
                    "reflex": b.reflex_vertices,
                }
                for b in self.blocks
            ],
            "joints": [list(j) for j in self.joints],
            "vertex_image": {str(v): list(pt) for v, pt in sorted(self.vertex_image.items())},
        }


def _draw(
    path: Sequence[int],
    origin: Point,
    first: Point,
    convex_turn,
    reflex_turn,
    deg0: Dict[int, int],
    T: ThetaDecomposition,
    block: int,
    turns: Dict[int, str],
) -> List[Point]:
    pts = [origin]
    d = first
    x, y = origin
    for i in range(1, len(path)):
        length = T.class_length[T.edge_class(path[i - 1], path[i])]
        x, y = x + d[0] * length, y + d[1] * length
        pts.append((x, y))
        if i == len(path) - 1:
            break
        kind = {2: "convex", 3: "flat", 4: "reflex"}.get(deg0.get(path[i], 0))
        if kind is None:
            raise UnfoldMismatchError(block, pts[-1], (float("nan"), float("nan")))
        turns[path[i]] = kind
        if kind == "convex":
            d = convex_turn(d)
        elif kind == "reflex":
            d = reflex_turn(d)
    return pts


def unfold(B: IntervalBoundary, T: ThetaDecomposition) -> UnfoldedChain:
    """
    Unfold the interval boundary into the plane, block by block.

    Blocks are translated so that each starts at the image of the previous block's end,
    with f(p) = (0, 0).

    Raises:
        UnfoldMismatchError: The two sides of a block fail to meet within closure_atol

    Examples:
        >>> chain = unfold(boundary_walk_dense(M, 0, 2), M.theta)
        >>> chain.blocks[0].loop.tolist()
        [[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]
    """
    atol = get_settings().closure_atol
    origin: Point = (0.0, 0.0)
    images: Dict[int, Point] = {B.p: origin}
    directions: Dict[int, Point] = {}
    blocks: List[UnfoldedBlock] = []
    for j, (side1, side2) in enumerate(B.blocks()):
        turns: Dict[int, str] = {}
        if len(side1) == 2:
            length = T.class_length[T.edge_class(side1[0], side1[1])]
            end = (origin[0] + length, origin[1])
            loop = np.array([origin, end])
            loop_vertices = tuple(side1)
            directions[T.edge_class(side1[0], side1[1])] = RIGHT
            images[side1[1]] = end
            bridge = True
        else:
            a = _draw(side1, origin, UP, _cw, _ccw, B.deg0, T, j, turns)
            b = _draw(side2, origin, RIGHT, _ccw, _cw, B.deg0, T, j, turns)
            if max(abs(a[-1][0] - b[-1][0]), abs(a[-1][1] - b[-1][1])) > atol:
                raise UnfoldMismatchError(j, a[-1], b[-1])
            b[-1] = a[-1]
            for side, pts in ((side1, a), (side2, b)):
                for k, v in enumerate(side):
                    images.setdefault(v, pts[k])
                for k in range(1, len(side)):
                    length = T.class_length[T.edge_class(side[k - 1], side[k])]
                    directions.setdefault(
                        T.edge_class(side[k - 1], side[k]),
                        ((pts[k][0] - pts[k - 1][0]) / length, (pts[k][1] - pts[k - 1][1]) / length),
                    )
            # pi1 runs up the left, pi2 along the bottom: walk pi2 forward, pi1 back
            loop_vertices = tuple(side2) + tuple(reversed(side1[1:-1]))
            loop = np.array(b + list(reversed(a[1:-1])))
            bridge = False
        blocks.append(
            UnfoldedBlock(j, loop, loop_vertices, side1[0], side1[-1], bridge, turns)
        )
        origin = images[side1[-1]]
    joints = tuple(images[s] for s in B.articulation[1:-1])
    logger.debug("unfold() p=%d q=%d blocks=%d", B.p, B.q, len(blocks))
    return UnfoldedChain(B, tuple(blocks), joints, images, directions)


def embed_interval(chain: UnfoldedChain, S: QueryStructure) -> Dict[int, Point]:
    """
    Extend the unfolding from the boundary to every vertex of I(p, q).

    Inside the interval every edge of a Θ-class keeps the planar direction that class has
    on the boundary, so images propagate outward from p one level at a time.
    """
    B = chain.boundary
    K = S.complex
    T = S.theta
    members = interval_vertices(S, B.p, B.q)
    inside = set(members)
    level = {z: S.distance(B.p, z) for z in members}
    images: Dict[int, Point] = {B.p: (0.0, 0.0)}
    for z in members:
        fz = images[z]
        for w, e in K.adjacency[z]:
            if w in inside and level[w] == level[z] + 1 and w not in images:
                c = T.class_of[e]
                d = chain.class_direction[c]
                length = T.class_length[c]
                images[w] = (fz[0] + d[0] * length, fz[1] + d[1] * length)
    for v, pt in chain.vertex_image.items():
        images[v] = pt
    return images


def _face_images(
    chain: UnfoldedChain, K: RectComplex, face_id: int, images: Optional[Dict[int, Point]]
) -> List[np.ndarray]:
    face = K.faces[face_id]
    known = images if images is not None else chain.vertex_image
    pts: List[Optional[np.ndarray]] = [
        np.asarray(known[v], dtype=float) if v in known else None for v in face
    ]
    missing = [k for k, pt in enumerate(pts) if pt is None]
    if len(missing) > 1:
        raise FaceNotInIntervalError(face)
    if missing:
        k = missing[0]
        pts[k] = pts[(k - 1) % 4] + pts[(k + 1) % 4] - pts[(k + 2) % 4]  # type: ignore
    return pts  # type: ignore[return-value]


def face_point(
    chain: UnfoldedChain,
    K: RectComplex,
    pt: PointSpec,
    images: Optional[Dict[int, Point]] = None,
) -> np.ndarray:
    """Planar image of a point given in the frame of a face of the interval."""
    p0, p1, _, p3 = _face_images(chain, K, pt.face_id, images)
    la, lb = K.face_sides(pt.face_id)
    return p0 + (pt.alpha / la) * (p1 - p0) + (pt.beta / lb) * (p3 - p0)


def locate_in_unfolding(
    chain: UnfoldedChain, K: RectComplex, pt: PointSpec, endpoint_role: str = SOURCE
) -> Tuple[np.ndarray, int]:
    """
    Planar image of a query point and the block it lies in.

    The point's minimal cell decides the method: a vertex maps to its image, a point on an
    edge is interpolated between the endpoint images, and a face interior point is placed
    with the face frame rebuilt from its corner images.

    Args:
        chain: Unfolded interval
        K: Complex
        pt: Query point; its cell must touch p (source) or q (target)
        endpoint_role: 'source' (block 0) or 'target' (last block)

    Raises:
        FaceNotInIntervalError: The cell has no image in the chain
    """
    if endpoint_role not in (SOURCE, TARGET):
        raise ValueError(f"endpoint_role must be 'source' or 'target', got {endpoint_role!r}")
    block = 0 if endpoint_role == SOURCE else max(len(chain.blocks) - 1, 0)
    cell = minimal_cell(K, pt)
    images = chain.vertex_image
    if len(cell) == 1:
        if cell[0] not in images:
            raise FaceNotInIntervalError(cell)
        return chain.image(cell[0]), block
    if len(cell) == 2:
        u, w = cell
        if u not in images or w not in images:
            raise FaceNotInIntervalError(cell)
        t = offset_from(K, pt, u) / K.edge_length(u, w)
        return chain.image(u) + t * (chain.image(w) - chain.image(u)), block
    return face_point(chain, K, pt), block
