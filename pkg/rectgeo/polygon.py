"""Monotone polygon triangulation and shortest paths inside a triangulated polygon.

The funnel procedure follows Lee and Preparata: walk the diagonals crossed by the dual-tree
path between the triangles of s and t, maintaining a deque whose two ends are the current
diagonal's endpoints and whose apex (the cusp) is the last committed path vertex.
"""

import logging
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from rectgeo.config import get_settings
from rectgeo.exceptions import NotMonotoneError, PointOutsideError

logger = logging.getLogger(__name__)

Point = Tuple[float, float]

# Shewchuk's first-stage error bound for the 2D orientation determinant
_CCW_ERRBOUND = (3.0 + 16.0 * np.finfo(float).eps / 2) * np.finfo(float).eps / 2

CCW = 1
CW = -1
COLLINEAR = 0


def orient2d(pa: Sequence[float], pb: Sequence[float], pc: Sequence[float]) -> float:
    """
    Twice the signed area of triangle (pa, pb, pc); positive when counter-clockwise.

    The floating determinant is returned when its magnitude exceeds the rounding error
    bound; otherwise it is recomputed exactly from the binary values of the inputs.
    """
    detleft = (pa[0] - pc[0]) * (pb[1] - pc[1])
    detright = (pa[1] - pc[1]) * (pb[0] - pc[0])
    det = detleft - detright
    if abs(det) > _CCW_ERRBOUND * (abs(detleft) + abs(detright)):
        return det
    ax, ay = Fraction(pa[0]), Fraction(pa[1])
    bx, by = Fraction(pb[0]), Fraction(pb[1])
    cx, cy = Fraction(pc[0]), Fraction(pc[1])
    return float((ax - cx) * (by - cy) - (ay - cy) * (bx - cx))


def turn(pa: Sequence[float], pb: Sequence[float], pc: Sequence[float]) -> int:
    """CCW, CW or COLLINEAR, treating |orient2d| below orient_eps (scaled) as collinear."""
    det = orient2d(pa, pb, pc)
    scale = max(1.0, abs(pa[0]), abs(pa[1]), abs(pb[0]), abs(pb[1]), abs(pc[0]), abs(pc[1]))
    if abs(det) <= get_settings().orient_eps * scale * scale:
        return COLLINEAR
    return CCW if det > 0 else CW


def on_segment(p: Sequence[float], a: Sequence[float], b: Sequence[float]) -> bool:
    """True when p lies on the closed segment ab (within orient_eps)."""
    if turn(a, b, p) != COLLINEAR:
        return False
    eps = get_settings().point_atol
    return (
        min(a[0], b[0]) - eps <= p[0] <= max(a[0], b[0]) + eps
        and min(a[1], b[1]) - eps <= p[1] <= max(a[1], b[1]) + eps
    )


def signed_area(loop: np.ndarray) -> float:
    x, y = loop[:, 0], loop[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


@dataclass(frozen=True)
class Triangulation:
    """
    Triangulation of a simple polygon given by a counter-clockwise loop.

    Attributes:
        points: k x 2 loop coordinates
        triangles: Counter-clockwise index triples into points
        diagonals: Chords (i, j), i < j
        dual: Per triangle, the triangles sharing a diagonal with it
    """

    points: np.ndarray
    triangles: Tuple[Tuple[int, int, int], ...]
    diagonals: Tuple[Tuple[int, int], ...]
    dual: Tuple[Tuple[int, ...], ...]

    def contains(self, tri: int, pt: Sequence[float]) -> bool:
        a, b, c = (self.points[i] for i in self.triangles[tri])
        return turn(a, b, pt) >= 0 and turn(b, c, pt) >= 0 and turn(c, a, pt) >= 0

    def locate(self, pt: Sequence[float]) -> int:
        """Lowest-indexed triangle containing pt (boundary included)."""
        for i in range(len(self.triangles)):
            if self.contains(i, pt):
                return i
        raise PointOutsideError((float(pt[0]), float(pt[1])))

    def shared_edge(self, t1: int, t2: int) -> Tuple[int, int]:
        common = sorted(set(self.triangles[t1]) & set(self.triangles[t2]))
        return common[0], common[1]

    def to_dict(self) -> Dict[str, object]:
        return {
            "points": self.points.tolist(),
            "triangles": [list(t) for t in self.triangles],
            "diagonals": [list(d) for d in self.diagonals],
        }


def _sweep_key(pt: Sequence[float]) -> Tuple[float, float]:
    return (pt[1], pt[0])


def triangulate_monotone(loop: Sequence[Sequence[float]]) -> Triangulation:
    """
    Triangulate a polygon monotone in the (y, x) sweep order.

    The loop is made counter-clockwise, split at its lowest and highest points into the
    right chain (counter-clockwise from bottom to top) and the left chain, and swept
    bottom-up with a stack holding the not yet triangulated reflex chain.

    Raises:
        NotMonotoneError: A chain is not increasing in the sweep order
    """
    pts = np.asarray(loop, dtype=float)
    k = len(pts)
    if k < 3:
        raise NotMonotoneError(0)
    if signed_area(pts) < 0:
        pts = pts[::-1].copy()
        flipped = True
    else:
        flipped = False
    keys = [_sweep_key(p) for p in pts]
    bottom = min(range(k), key=lambda i: keys[i])
    top = max(range(k), key=lambda i: keys[i])

    side: Dict[int, str] = {bottom: "both", top: "both"}
    right = []
    i = bottom
    while i != top:
        nxt = (i + 1) % k
        if not keys[nxt] > keys[i]:
            raise NotMonotoneError(nxt)
        if nxt != top:
            side[nxt] = "right"
            right.append(nxt)
        i = nxt
    left = []
    i = top
    while i != bottom:
        nxt = (i + 1) % k
        if not keys[nxt] < keys[i]:
            raise NotMonotoneError(nxt)
        if nxt != bottom:
            side[nxt] = "left"
            left.append(nxt)
        i = nxt
    order = [bottom] + sorted(right + left, key=lambda i: keys[i]) + [top]

    triangles: List[Tuple[int, int, int]] = []

    def emit(a: int, b: int, c: int) -> None:
        if orient2d(pts[a], pts[b], pts[c]) < 0:
            b, c = c, b
        triangles.append((a, b, c))

    stack = [order[0], order[1]]
    for j in range(2, k - 1):
        u = order[j]
        if side[u] != side[stack[-1]] and side[stack[-1]] != "both":
            for a, b in zip(stack, stack[1:]):
                emit(u, a, b)
            stack = [order[j - 1], u]
        elif side[stack[-1]] == "both":
            # only the bottom vertex below u
            stack.append(u)
        else:
            last = stack.pop()
            want = CCW if side[u] == "right" else CW
            while stack and turn(pts[stack[-1]], pts[last], pts[u]) == want:
                emit(u, last, stack[-1])
                last = stack.pop()
            stack.append(last)
            stack.append(u)
    u = order[k - 1]
    for a, b in zip(stack, stack[1:]):
        emit(u, a, b)

    if flipped:
        # map indices back to the caller's loop order
        triangles = [tuple(k - 1 - v for v in tri) for tri in triangles]  # type: ignore
        pts = pts[::-1].copy()

    edge_owner: Dict[Tuple[int, int], List[int]] = {}
    for t, tri in enumerate(triangles):
        for a, b in ((tri[0], tri[1]), (tri[1], tri[2]), (tri[2], tri[0])):
            edge_owner.setdefault((min(a, b), max(a, b)), []).append(t)
    dual: List[List[int]] = [[] for _ in triangles]
    diagonals = []
    for edge, owners in sorted(edge_owner.items()):
        if len(owners) == 2:
            diagonals.append(edge)
            t1, t2 = owners
            dual[t1].append(t2)
            dual[t2].append(t1)
    logger.debug("triangulate_monotone() k=%d triangles=%d", k, len(triangles))
    return Triangulation(
        pts, tuple(triangles), tuple(diagonals), tuple(tuple(sorted(d)) for d in dual)  # type: ignore
    )


@dataclass(frozen=True)
class PlanarPath:
    """
    Shortest path inside a polygon.

    Attributes:
        points: Breakpoints from s to t
        vertices: Loop index of each breakpoint, None for s and t
        passed: Loop indices the path runs straight through
        length: Sum of segment lengths
    """

    points: Tuple[Point, ...]
    vertices: Tuple[Optional[int], ...]
    passed: Tuple[int, ...]
    length: float


def _sleeve(tri: Triangulation, t_from: int, t_to: int) -> List[int]:
    parent = {t_from: -1}
    queue = deque([t_from])
    while queue:
        a = queue.popleft()
        if a == t_to:
            break
        for b in tri.dual[a]:
            if b not in parent:
                parent[b] = a
                queue.append(b)
    path = [t_to]
    while path[-1] != t_from:
        path.append(parent[path[-1]])
    return path[::-1]


def funnel_path(tri: Triangulation, s: Sequence[float], t: Sequence[float]) -> PlanarPath:
    """
    Euclidean shortest path from s to t inside a triangulated polygon.

    Raises:
        PointOutsideError: s or t is outside the polygon

    Examples:
        >>> funnel_path(triangulate_monotone([(0, 0), (1, 0), (1, 1), (0, 1)]), (0, 0), (1, 1)).length
        1.4142135623730951
    """
    k = len(tri.points)
    S, T = k, k + 1
    pts = np.vstack([tri.points, np.asarray(s, dtype=float), np.asarray(t, dtype=float)])
    s_pt, t_pt = (float(s[0]), float(s[1])), (float(t[0]), float(t[1]))
    if np.allclose(pts[S], pts[T], rtol=0.0, atol=get_settings().point_atol):
        tri.locate(s_pt)
        return PlanarPath((s_pt,), (None,), (), 0.0)

    sleeve = _sleeve(tri, tri.locate(s_pt), tri.locate(t_pt))
    diagonals = [tri.shared_edge(a, b) for a, b in zip(sleeve, sleeve[1:])]
    # diagonals through an endpoint put it in the next triangle as well
    while diagonals and on_segment(pts[S], pts[diagonals[0][0]], pts[diagonals[0][1]]):
        diagonals.pop(0)
    while diagonals and on_segment(pts[T], pts[diagonals[-1][0]], pts[diagonals[-1][1]]):
        diagonals.pop()

    if not diagonals:
        order = [S, T]
    else:
        order = list(_funnel(pts, S, T, diagonals))
    return _clean(pts, order, k)


def _funnel(pts: np.ndarray, s: int, t: int, diagonals: List[Tuple[int, int]]):
    def tn(a: int, b: int, c: int) -> int:
        return turn(pts[a], pts[b], pts[c])

    diagonals = diagonals + [(diagonals[-1][0], t)]
    cusp = s
    a0, b0 = diagonals[0]
    funnel = deque([a0, cusp, b0])
    if tn(s, a0, b0) == CCW:
        funnel.reverse()

    for left, right in diagonals[1:]:
        if funnel[0] == right or funnel[-1] == left:
            left, right = right, left
        if left == funnel[0]:
            while funnel[-1] != cusp and tn(funnel[-2], funnel[-1], right) == CCW:
                funnel.pop()
            if funnel[-1] == cusp:
                while len(funnel) > 1 and tn(funnel[-1], funnel[-2], right) == CCW:
                    yield funnel.pop()
                cusp = funnel[-1]
            funnel.append(right)
        else:
            while funnel[0] != cusp and tn(funnel[1], funnel[0], left) == CW:
                funnel.popleft()
            if funnel[0] == cusp:
                while len(funnel) > 1 and tn(funnel[0], funnel[1], left) == CW:
                    yield funnel.popleft()
                cusp = funnel[0]
            funnel.appendleft(left)

    if funnel[0] == t:
        while funnel[-1] != cusp:
            funnel.pop()
        while funnel:
            yield funnel.pop()
    elif funnel[-1] == t:
        while funnel[0] != cusp:
            funnel.popleft()
        while funnel:
            yield funnel.popleft()
    else:
        yield cusp
        yield t


def _clean(pts: np.ndarray, order: List[int], k: int) -> PlanarPath:
    atol = get_settings().point_atol
    kept: List[int] = []
    for i in order:
        if kept and np.abs(pts[kept[-1]] - pts[i]).max() <= atol:
            if i >= k:
                kept[-1] = i
            continue
        kept.append(i)
    passed: List[int] = []
    changed = True
    while changed:
        changed = False
        for j in range(1, len(kept) - 1):
            a, b, c = pts[kept[j - 1]], pts[kept[j]], pts[kept[j + 1]]
            if turn(a, b, c) == COLLINEAR and np.dot(b - a, c - b) > 0:
                passed.append(kept.pop(j))
                changed = True
                break
    points = tuple((float(pts[i][0]), float(pts[i][1])) for i in kept)
    length = float(sum(np.hypot(*(pts[b] - pts[a])) for a, b in zip(kept, kept[1:])))
    vertices = tuple(i if i < k else None for i in kept)
    return PlanarPath(points, vertices, tuple(i for i in passed if i < k), length)


def _heading(v: np.ndarray) -> float:
    return float(np.arctan2(v[1], v[0]))


def local_optimality_violations(loop: Sequence[Sequence[float]], path: PlanarPath) -> List[int]:
    """
    Bend vertices where the path could be shortened locally.

    A path bending at a reflex vertex b is locally shortest when the angle between its two
    segments, measured on the side free of the polygon exterior, is at least pi.

    Returns:
        Loop indices of the offending bends (empty for a shortest path)
    """
    pts = np.asarray(loop, dtype=float)
    k = len(pts)
    slack = get_settings().angle_atol
    two_pi = 2.0 * np.pi
    bad: List[int] = []
    for j in range(1, len(path.points) - 1):
        i = path.vertices[j]
        if i is None:
            continue
        b = pts[i]
        a, c = np.asarray(path.points[j - 1]), np.asarray(path.points[j + 1])
        to_a, to_c = _heading(a - b), _heading(c - b)
        to_prev, to_next = _heading(pts[(i - 1) % k] - b), _heading(pts[(i + 1) % k] - b)
        # exterior wedge runs counter-clockwise from the previous to the next loop vertex
        outside = to_prev + ((to_next - to_prev) % two_pi) / 2.0
        sweep = (to_c - to_a) % two_pi
        free = two_pi - sweep if (outside - to_a) % two_pi < sweep else sweep
        if free < np.pi - slack:
            bad.append(i)
    return bad
