"""Preprocessing structures for distance and interval queries.

Two variants are provided:

* :class:`DenseMatrix` works for every CAT(0) rectangular complex. It stores the hop
  distance matrix D and, for every ordered pair (u, v), the one or two neighbors of v that
  lie on a shortest path back to u (the list L_u(v)).
* :class:`TreeProduct` works for ramified rectilinear polygons. The graph embeds
  isometrically into the product of two trees obtained by contracting the edges of each
  color of the Inc(G) 2-coloring, so distances come from two LCA lookups and linear space.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from rectgeo.complex import RectComplex
from rectgeo.config import get_settings
from rectgeo.exceptions import (
    EmbeddingMismatchError,
    NotATreeError,
    NotRamifiedError,
    StructureError,
)
from rectgeo.lca import EulerLCA
from rectgeo.theta import ThetaDecomposition, compute_theta

logger = logging.getLogger(__name__)

STRUCTURE_KINDS = ("dense", "treeproduct", "auto")


@dataclass(frozen=True, eq=False)
class DenseMatrix:
    """
    Distance matrix plus per-source predecessor lists.

    Attributes:
        complex: The complex
        theta: Its Θ-decomposition
        D: n x n hop distances
        L: n x n x 2 array; L[u, v] holds L_u(v) padded with -1
    """

    complex: RectComplex
    theta: ThetaDecomposition
    D: np.ndarray
    L: np.ndarray
    kind: str = field(default="dense", init=False)

    def distance(self, u: int, v: int) -> int:
        return int(self.D[u, v])

    def l_list(self, u: int, v: int) -> Tuple[int, ...]:
        """Neighbors of v inside I(u, v), sorted by id."""
        row = self.L[u, v]
        return tuple(sorted(int(w) for w in row if w >= 0))

    def deg0(self, p: int, q: int, z: int) -> int:
        return int((self.L[p, z] >= 0).sum() + (self.L[q, z] >= 0).sum())

    @property
    def entry_count(self) -> int:
        """Distance-matrix entries, exactly n squared."""
        return int(self.D.size)

    @property
    def list_entry_count(self) -> int:
        return int((self.L >= 0).sum())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return (
            self.complex == other.complex
            and np.array_equal(self.D, other.D)
            and np.array_equal(self.L, other.L)
        )


def build_dense(K: RectComplex, theta: Optional[ThetaDecomposition] = None) -> DenseMatrix:
    """
    Build the dense structure: one BFS per source plus the L lists.

    L_u(v) collects the neighbors w of v with D[u, w] = D[u, v] - 1.

    Examples:
        >>> M = build_dense(single_square)
        >>> M.l_list(0, 2), M.distance(0, 2)
        ((1, 3), 2)
    """
    n = K.vertex_count
    theta = theta if theta is not None else compute_theta(K)
    D = K.distance_matrix().astype(np.int32)
    if n and (D < 0).any():
        raise StructureError("dense structure needs a connected complex")
    L = np.full((n, n, 2), -1, dtype=np.int32)
    count = np.zeros((n, n), dtype=np.int8)
    for v in range(n):
        for w in K.neighbors(v):
            mask = D[:, w] == D[:, v] - 1
            if not mask.any():
                continue
            slots = count[mask, v]
            if (slots >= 2).any():
                raise StructureError(f"vertex {v} has more than two predecessors; not median")
            L[mask, v, slots] = w
            count[mask, v] += 1
    D.setflags(write=False)
    L.setflags(write=False)
    logger.debug("build_dense() n=%d entries=%d lists=%d", n, D.size, int(count.sum()))
    return DenseMatrix(K, theta, D, L)


@dataclass(frozen=True, eq=False)
class ContractedTree:
    """
    One factor tree of the tree product.

    Attributes:
        index: 1 or 2
        parent: Parent node per node, -1 at the root (node 0)
        parent_class: Θ-class labelling the edge to the parent, -1 at the root
        depth: Hop distance from the root
        lca: Euler tour + sparse table
    """

    index: int
    parent: Tuple[int, ...]
    parent_class: Tuple[int, ...]
    depth: np.ndarray
    lca: EulerLCA = field(repr=False)

    @property
    def node_count(self) -> int:
        return len(self.parent)

    def distance(self, a: int, b: int) -> int:
        r = self.lca.lca(a, b)
        return int(self.depth[a] + self.depth[b] - 2 * self.depth[r])

    def path(self, a: int, b: int) -> Tuple[List[int], List[int]]:
        """Nodes and edge classes along the tree path from a to b."""
        r = self.lca.lca(a, b)
        up_nodes, up_classes = [a], []
        while up_nodes[-1] != r:
            up_classes.append(self.parent_class[up_nodes[-1]])
            up_nodes.append(self.parent[up_nodes[-1]])
        down_nodes, down_classes = [b], []
        while down_nodes[-1] != r:
            down_classes.append(self.parent_class[down_nodes[-1]])
            down_nodes.append(self.parent[down_nodes[-1]])
        return up_nodes + down_nodes[-2::-1], up_classes + down_classes[::-1]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ContractedTree):
            return NotImplemented
        return (
            self.index == other.index
            and self.parent == other.parent
            and self.parent_class == other.parent_class
            and np.array_equal(self.depth, other.depth)
        )


@dataclass(frozen=True, eq=False)
class TreeProduct:
    """
    Isometric embedding into the product of two trees.

    Attributes:
        complex: The complex
        theta: Its Θ-decomposition (colored)
        trees: (T1, T2)
        coords: n x 2 array of (C1(u), C2(u))
        Q: Per vertex, incident Θ-class ids in ascending order
        Q_next: Per vertex, the neighbor across each class in Q
    """

    complex: RectComplex
    theta: ThetaDecomposition
    trees: Tuple[ContractedTree, ContractedTree]
    coords: np.ndarray
    Q: Tuple[Tuple[int, ...], ...]
    Q_next: Tuple[Tuple[int, ...], ...]
    kind: str = field(default="treeproduct", init=False)

    def distance(self, u: int, v: int) -> int:
        c = self.coords
        return self.trees[0].distance(c[u, 0], c[v, 0]) + self.trees[1].distance(
            c[u, 1], c[v, 1]
        )

    def find_class(self, v: int, class_id: int) -> Tuple[Optional[int], int]:
        """
        Binary search Q(v) for a class.

        Returns:
            (neighbor across that class or None, number of probes)
        """
        q = self.Q[v]
        lo, hi, probes = 0, len(q), 0
        while lo < hi:
            mid = (lo + hi) // 2
            probes += 1
            if q[mid] < class_id:
                lo = mid + 1
            elif q[mid] > class_id:
                hi = mid
            else:
                return self.Q_next[v][mid], probes
        return None, probes

    @property
    def node_count(self) -> int:
        return self.trees[0].node_count + self.trees[1].node_count

    @property
    def entry_count(self) -> int:
        """Tree nodes, LCA tables, coordinates and class lists."""
        tables = sum(t.lca.table_entries + 3 * t.node_count for t in self.trees)
        return int(tables + self.coords.size + 2 * sum(len(q) for q in self.Q))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TreeProduct):
            return NotImplemented
        return (
            self.complex == other.complex
            and self.trees == other.trees
            and np.array_equal(self.coords, other.coords)
            and self.Q == other.Q
            and self.Q_next == other.Q_next
        )


def _first_seen_labels(labels: np.ndarray) -> np.ndarray:
    order: dict = {}
    for label in labels:
        order.setdefault(int(label), len(order))
    return np.array([order[int(label)] for label in labels], dtype=np.int64)


def _contract(K: RectComplex, T: ThetaDecomposition, color: int) -> Tuple[ContractedTree, np.ndarray]:
    n = K.vertex_count
    edge_color = [T.coloring[c] for c in T.class_of]  # type: ignore[index]
    kept = [e for e, col in enumerate(edge_color) if col != color]
    if kept:
        u, v = np.array([K.edges[e] for e in kept], dtype=np.int64).T
    else:
        u = v = np.zeros(0, dtype=np.int64)
    g = sparse.csr_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(n, n))
    count, labels = csgraph.connected_components(g, directed=False)
    labels = _first_seen_labels(labels)

    arc_of_class: dict = {}
    for e, col in enumerate(edge_color):
        if col != color:
            continue
        a, b = (int(labels[x]) for x in K.edges[e])
        c = T.class_of[e]
        if a == b:
            raise NotATreeError(color, f"class {c} edge {K.edges[e]} inside one component")
        pair = (min(a, b), max(a, b))
        if arc_of_class.setdefault(c, pair) != pair:
            raise NotATreeError(color, f"class {c} joins {arc_of_class[c]} and {pair}")
    if len(set(arc_of_class.values())) != len(arc_of_class) or len(arc_of_class) != count - 1:
        raise NotATreeError(color, f"{count} nodes but {len(arc_of_class)} arcs")

    adj: List[List[Tuple[int, int]]] = [[] for _ in range(count)]
    for c, (a, b) in arc_of_class.items():
        adj[a].append((b, c))
        adj[b].append((a, c))
    parent = [-1] * count
    parent_class = [-1] * count
    depth = np.zeros(count, dtype=np.int64)
    seen = [False] * count
    seen[0] = True
    queue = deque([0])
    while queue:
        a = queue.popleft()
        for b, c in sorted(adj[a]):
            if not seen[b]:
                seen[b] = True
                parent[b], parent_class[b] = a, c
                depth[b] = depth[a] + 1
                queue.append(b)
    if not all(seen):
        raise NotATreeError(color, f"node {seen.index(False)} unreachable from the root")
    depth.setflags(write=False)
    tree = ContractedTree(color, tuple(parent), tuple(parent_class), depth, EulerLCA(parent, depth))
    return tree, labels


def build_treeproduct(
    K: RectComplex, theta: Optional[ThetaDecomposition] = None, seed: int = 0
) -> TreeProduct:
    """
    Build the two-tree embedding of a ramified rectilinear polygon.

    T_i has a node per connected component of G minus its color-i edges and an arc per
    color-i Θ-class. The embedding is checked against BFS on sampled vertex pairs.

    Raises:
        NotRamifiedError: Inc(G) is not bipartite
        NotATreeError: A contraction is not a tree
        EmbeddingMismatchError: Tree distances disagree with BFS
    """
    T = theta if theta is not None else compute_theta(K)
    if not T.is_ramified:
        raise NotRamifiedError(T.odd_cycle.cycle if T.odd_cycle else ())
    t1, c1 = _contract(K, T, 1)
    t2, c2 = _contract(K, T, 2)
    coords = np.column_stack([c1, c2]).astype(np.int64)
    coords.setflags(write=False)

    Q, Q_next = [], []
    for v in range(K.vertex_count):
        entries = sorted((T.class_of[e], w) for w, e in K.adjacency[v])
        Q.append(tuple(c for c, _ in entries))
        Q_next.append(tuple(w for _, w in entries))
    S = TreeProduct(K, T, (t1, t2), coords, tuple(Q), tuple(Q_next))
    _check_isometry(S, seed)
    logger.debug(
        "build_treeproduct() n=%d T1=%d T2=%d entries=%d",
        K.vertex_count, t1.node_count, t2.node_count, S.entry_count,
    )
    return S


def _check_isometry(S: TreeProduct, seed: int) -> None:
    n = S.complex.vertex_count
    if n < 2:
        return
    rng = np.random.Generator(np.random.PCG64(seed))
    pairs = rng.integers(n, size=(get_settings().isometry_samples, 2))
    sources = np.unique(pairs[:, 0])
    rows = csgraph.shortest_path(
        S.complex.graph(), directed=False, unweighted=True, indices=sources
    )
    row_of = {int(s): i for i, s in enumerate(sources)}
    for u, v in pairs:
        expected = rows[row_of[int(u)], v]
        got = S.distance(int(u), int(v))
        if not np.isfinite(expected) or int(expected) != got:
            raise EmbeddingMismatchError((int(u), int(v)), int(expected) if np.isfinite(expected) else -1, got)


QueryStructure = Union[DenseMatrix, TreeProduct]


def build_structure(
    K: RectComplex, kind: str = "auto", theta: Optional[ThetaDecomposition] = None
) -> QueryStructure:
    """
    Build the requested structure; 'auto' picks the tree product when Inc(G) is bipartite.

    Args:
        K: Accepted complex
        kind: 'dense', 'treeproduct' or 'auto'
        theta: Precomputed Θ-decomposition
    """
    if kind not in STRUCTURE_KINDS:
        raise ValueError(f"structure kind must be one of {STRUCTURE_KINDS}, got {kind!r}")
    T = theta if theta is not None else compute_theta(K)
    if kind == "auto":
        kind = "treeproduct" if T.is_ramified else "dense"
        logger.info("build_structure() auto selected %s", kind)
    if kind == "treeproduct":
        return build_treeproduct(K, T)
    return build_dense(K, T)


def interval_vertices(S: QueryStructure, p: int, q: int) -> List[int]:
    """Vertices z with d(p, z) + d(z, q) = d(p, q), in increasing d(p, z) then id."""
    n = S.complex.vertex_count
    dpq = S.distance(p, q)
    if isinstance(S, DenseMatrix):
        on = np.flatnonzero(S.D[p] + S.D[q] == dpq)
        return sorted((int(z) for z in on), key=lambda z: (int(S.D[p, z]), z))
    members = [z for z in range(n) if S.distance(p, z) + S.distance(z, q) == dpq]
    return sorted(members, key=lambda z: (S.distance(p, z), z))


def structure_sizes(S: QueryStructure) -> dict:
    """Entry counts reported by build and bench."""
    if isinstance(S, DenseMatrix):
        return {
            "kind": S.kind,
            "vertices": S.complex.vertex_count,
            "entries": S.entry_count,
            "list_entries": S.list_entry_count,
        }
    return {
        "kind": S.kind,
        "vertices": S.complex.vertex_count,
        "tree_nodes": S.node_count,
        "tree_nodes_T1": S.trees[0].node_count,
        "tree_nodes_T2": S.trees[1].node_count,
        "entries": S.entry_count,
    }
