"""Brute-force geodesic oracle on a sampled complex.

Every face carries a grid of sample points. Points on a shared edge or vertex are one node,
and every pair of nodes of one face is joined by the straight segment between them. A
Dijkstra search on this graph gives an upper bound on the true geodesic distance that
converges as the grid is refined.
"""

import logging
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph
from scipy.spatial.distance import cdist

from rectgeo.complex import PointSpec, RectComplex, canonical_point, point_in_faces
from rectgeo.config import get_settings
from rectgeo.exceptions import OracleMemoryError
from rectgeo.theta import compute_theta

logger = logging.getLogger(__name__)

# explicit zeros are dropped by scipy.sparse, so coincident nodes get a vanishing weight
_TINY = np.finfo(float).tiny


@dataclass(frozen=True)
class SampleGraph:
    """
    Sample points of a complex and the in-cell segments joining them.

    Attributes:
        complex: Sampled complex
        h: Requested step; the actual step of each class is at most h
        arcs: Symmetric csr matrix of segment lengths
        face_nodes: Per face, node ids of its grid (shape (ka + 1, kb + 1))
        face_coords: Per face, local (alpha, beta) of its grid nodes (flattened)
        subdivisions: Θ-class -> number of segments on each of its edges
    """

    complex: RectComplex
    h: float
    arcs: sparse.csr_matrix
    face_nodes: Tuple[np.ndarray, ...]
    face_coords: Tuple[np.ndarray, ...]
    subdivisions: Tuple[int, ...]

    @property
    def node_count(self) -> int:
        return self.arcs.shape[0]

    @property
    def arc_count(self) -> int:
        return self.arcs.nnz // 2


def _subdivisions(length: float, h: float) -> int:
    # powers of two keep the grid for h/2 a refinement of the grid for h
    need = max(length / h - 1e-9, 1.0)
    return 1 << max(int(math.ceil(math.log2(need) - 1e-12)), 0)


def _min_arcs(rows: np.ndarray, cols: np.ndarray, weights: np.ndarray, size: int) -> sparse.csr_matrix:
    keys = rows.astype(np.int64) * size + cols
    order = np.lexsort((weights, keys))
    keys, weights = keys[order], weights[order]
    first = np.concatenate([[True], keys[1:] != keys[:-1]])
    keys, weights = keys[first], np.maximum(weights[first], _TINY)
    return sparse.csr_matrix((weights, (keys // size, keys % size)), shape=(size, size))


def build_sample_graph(K: RectComplex, h: float) -> SampleGraph:
    """
    Sample a complex with step at most h.

    Args:
        K: Complex
        h: Step size, > 0

    Raises:
        ValueError: h is not positive
        OracleMemoryError: The grid exceeds oracle_node_cap nodes or oracle_arc_cap arcs
    """
    if not h > 0:
        raise ValueError(f"h must be positive, got {h}")
    cfg = get_settings()
    T = compute_theta(K)
    ks = tuple(_subdivisions(length, h) for length in T.class_length)
    edge_k = [ks[c] for c in T.class_of]

    nodes = K.vertex_count + sum(k - 1 for k in edge_k)
    cliques = 0
    for f in range(len(K.faces)):
        e01, _, _, e30 = K.face_edges(f)
        ka, kb = edge_k[e01], edge_k[e30]
        nodes += (ka - 1) * (kb - 1)
        cliques += ((ka + 1) * (kb + 1)) ** 2
    if nodes > cfg.oracle_node_cap:
        raise OracleMemoryError("nodes", nodes, cfg.oracle_node_cap)
    if cliques > cfg.oracle_arc_cap:
        raise OracleMemoryError("arcs", cliques, cfg.oracle_arc_cap)

    # nodes strictly inside edge e, ordered from its smaller endpoint
    edge_inner: List[np.ndarray] = []
    nxt = K.vertex_count
    for k in edge_k:
        edge_inner.append(np.arange(nxt, nxt + k - 1))
        nxt += k - 1

    def side(u: int, w: int) -> np.ndarray:
        """Node ids from u to w along edge uw."""
        inner = edge_inner[K.edge_id(u, w)]
        if u > w:
            inner = inner[::-1]
        return np.concatenate([[u], inner, [w]])

    rows: List[np.ndarray] = []
    cols: List[np.ndarray] = []
    weights: List[np.ndarray] = []
    face_nodes: List[np.ndarray] = []
    face_coords: List[np.ndarray] = []
    covered = np.zeros(len(K.edges), dtype=bool)
    for f, (v0, v1, v2, v3) in enumerate(K.faces):
        for e in K.face_edges(f):
            covered[e] = True
        la, lb = K.face_sides(f)
        bottom, top = side(v0, v1), side(v3, v2)
        left, right = side(v0, v3), side(v1, v2)
        ka, kb = len(bottom) - 1, len(left) - 1
        grid = np.empty((ka + 1, kb + 1), dtype=np.int64)
        grid[:, 0], grid[:, kb] = bottom, top
        grid[0, :], grid[ka, :] = left, right
        if ka > 1 and kb > 1:
            grid[1:ka, 1:kb] = np.arange(nxt, nxt + (ka - 1) * (kb - 1)).reshape(ka - 1, kb - 1)
            nxt += (ka - 1) * (kb - 1)
        alpha, beta = np.meshgrid(np.linspace(0, la, ka + 1), np.linspace(0, lb, kb + 1), indexing="ij")
        coords = np.column_stack([alpha.ravel(), beta.ravel()])
        ids = grid.ravel()
        dist = cdist(coords, coords)
        r, c = np.nonzero(~np.eye(len(ids), dtype=bool))
        rows.append(ids[r])
        cols.append(ids[c])
        weights.append(dist[r, c])
        face_nodes.append(grid)
        face_coords.append(coords)

    # edges outside every face are sampled as paths
    for e in np.flatnonzero(~covered):
        u, w = K.edges[e]
        ids = side(u, w)
        step = K.lengths[e] / (len(ids) - 1)
        rows.append(np.concatenate([ids[:-1], ids[1:]]))
        cols.append(np.concatenate([ids[1:], ids[:-1]]))
        weights.append(np.full(2 * (len(ids) - 1), step))

    if rows:
        arcs = _min_arcs(np.concatenate(rows), np.concatenate(cols), np.concatenate(weights), nxt)
    else:
        arcs = sparse.csr_matrix((nxt, nxt))
    logger.debug("build_sample_graph() h=%g nodes=%d arcs=%d", h, nxt, arcs.nnz // 2)
    return SampleGraph(K, float(h), arcs, tuple(face_nodes), tuple(face_coords), ks)


def _attach(
    G: SampleGraph, pt: PointSpec, node: int
) -> Tuple[List[int], List[int], List[float], Dict[int, np.ndarray]]:
    rows: List[int] = []
    cols: List[int] = []
    weights: List[float] = []
    local: Dict[int, np.ndarray] = {}
    for spec in point_in_faces(G.complex, pt):
        here = np.array([[spec.alpha, spec.beta]])
        dist = cdist(here, G.face_coords[spec.face_id])[0]
        ids = G.face_nodes[spec.face_id].ravel()
        rows.extend([node] * len(ids) + list(ids))
        cols.extend(list(ids) + [node] * len(ids))
        weights.extend(list(dist) * 2)
        local[spec.face_id] = here[0]
    return rows, cols, weights, local


def oracle_distance(
    K: RectComplex, x: PointSpec, y: PointSpec, h: float, graph: Optional[SampleGraph] = None
) -> float:
    """
    Approximate geodesic distance from x to y on a sample graph of step h.

    x and y become extra nodes joined to every sample of every face containing them. The
    result is never below the true distance and does not grow when h is halved.

    Args:
        K: Complex
        x: Source point
        y: Target point
        h: Step size
        graph: Prebuilt sample graph of K for h, reused across calls

    Examples:
        >>> round(oracle_distance(K, PointSpec(0, 0.0, 0.0), PointSpec(0, 1.0, 1.0), 1 / 32), 6)
        1.414214
    """
    x = canonical_point(K, x)
    y = canonical_point(K, y)
    if x == y:
        return 0.0
    G = graph if graph is not None else build_sample_graph(K, h)
    N = G.node_count
    rx, cx, wx, lx = _attach(G, x, N)
    ry, cy, wy, ly = _attach(G, y, N + 1)
    rows, cols, weights = rx + ry, cx + cy, wx + wy
    for f in set(lx) & set(ly):
        gap = float(np.linalg.norm(lx[f] - ly[f]))
        rows.extend([N, N + 1])
        cols.extend([N + 1, N])
        weights.extend([gap, gap])
    base = G.arcs.tocoo()
    full = _min_arcs(
        np.concatenate([base.row, np.asarray(rows, dtype=np.int64)]),
        np.concatenate([base.col, np.asarray(cols, dtype=np.int64)]),
        np.concatenate([base.data, np.asarray(weights, dtype=float)]),
        N + 2,
    )
    dist = csgraph.dijkstra(full, directed=True, indices=N)
    return float(dist[N + 1])
