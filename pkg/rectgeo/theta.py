"""Djoković-Winkler Θ-classes, halfspaces and the incompatibility graph.

Two edges are Θ-related when they are opposite sides of a face; the classes are the
transitive closure of that relation. In a CAT(0) rectangular complex each class is a cut
whose removal leaves exactly two convex halfspaces. Two classes are incompatible when
they cross inside some face; Inc(G) records those crossings, and a proper 2-coloring of it
exists exactly when the complex is a ramified rectilinear polygon.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from rectgeo.complex import RectComplex
from rectgeo.config import get_settings
from rectgeo.exceptions import (
    ClassCrossingError,
    InconsistentLengthError,
    UnknownClassError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OddCycleWitness:
    """An odd cycle of Inc(G), given as class ids in cyclic order."""

    cycle: Tuple[int, ...]

    def __len__(self) -> int:
        return len(self.cycle)


@dataclass(frozen=True)
class ThetaDecomposition:
    """
    Partition of the edges into Θ-classes.

    Attributes:
        complex: The complex the classes belong to
        class_of: Edge id -> class id
        class_length: Class id -> common edge length
        classes: Class id -> sorted edge ids
        inc_arcs: Sorted, deduplicated pairs (i, j), i < j, of classes crossing in a face
        coloring: Class id -> 1 or 2, or None when Inc(G) has an odd cycle
        odd_cycle: Witness when coloring is None
    """

    complex: RectComplex
    class_of: Tuple[int, ...]
    class_length: Tuple[float, ...]
    classes: Tuple[Tuple[int, ...], ...]
    inc_arcs: Tuple[Tuple[int, int], ...]
    coloring: Optional[Tuple[int, ...]]
    odd_cycle: Optional[OddCycleWitness] = None

    @property
    def class_count(self) -> int:
        return len(self.classes)

    @property
    def is_ramified(self) -> bool:
        return self.coloring is not None

    def edge_class(self, u: int, v: int) -> int:
        return self.class_of[self.complex.edge_id(u, v)]

    def inc_neighbors(self) -> List[List[int]]:
        adj: List[List[int]] = [[] for _ in self.classes]
        for i, j in self.inc_arcs:
            adj[i].append(j)
            adj[j].append(i)
        return adj

    def to_dict(self) -> Dict[str, object]:
        return {
            "class_of": list(self.class_of),
            "class_length": list(self.class_length),
            "classes": [list(c) for c in self.classes],
            "inc_arcs": [list(a) for a in self.inc_arcs],
            "coloring": None if self.coloring is None else list(self.coloring),
            "odd_cycle": None if self.odd_cycle is None else list(self.odd_cycle.cycle),
        }


def compute_theta(K: RectComplex) -> ThetaDecomposition:
    """
    Compute Θ-classes, class lengths, Inc(G) and its 2-coloring.

    Classes are the connected components of the graph on edges whose arcs join opposite
    sides of each face; class ids are assigned in order of each class's smallest edge id.

    Args:
        K: Complex accepted by validate_cat0

    Returns:
        ThetaDecomposition

    Raises:
        InconsistentLengthError: A class mixes edge lengths
        ClassCrossingError: Two sides of a face meeting at a corner share a class

    Examples:
        >>> T = compute_theta(single_square)
        >>> T.class_count, T.inc_arcs
        (2, ((0, 1),))
    """
    m = len(K.edges)
    if m == 0:
        return ThetaDecomposition(K, (), (), (), (), ())
    rows: List[int] = []
    cols: List[int] = []
    for f in range(len(K.faces)):
        e01, e12, e23, e30 = K.face_edges(f)
        rows += [e01, e12]
        cols += [e23, e30]
    arcs = sparse.csr_matrix(
        (np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(m, m)
    )
    _, labels = csgraph.connected_components(arcs, directed=False)

    # relabel so class ids follow the smallest member edge
    order: Dict[int, int] = {}
    for e in range(m):
        order.setdefault(int(labels[e]), len(order))
    class_of = tuple(order[int(label)] for label in labels)
    members: List[List[int]] = [[] for _ in order]
    for e, c in enumerate(class_of):
        members[c].append(e)

    rtol = get_settings().length_rtol
    class_length = []
    for c, edges in enumerate(members):
        ref = float(K.lengths[edges[0]])
        for e in edges[1:]:
            other = float(K.lengths[e])
            if abs(other - ref) > rtol * max(ref, other):
                raise InconsistentLengthError(c, (edges[0], e), (ref, other))
        class_length.append(ref)

    inc: Set[Tuple[int, int]] = set()
    for f in range(len(K.faces)):
        e01, e12, _, _ = K.face_edges(f)
        a, b = class_of[e01], class_of[e12]
        if a == b:
            raise ClassCrossingError(K.faces[f], a)
        inc.add((a, b) if a < b else (b, a))

    T = ThetaDecomposition(
        complex=K,
        class_of=class_of,
        class_length=tuple(class_length),
        classes=tuple(tuple(c) for c in members),
        inc_arcs=tuple(sorted(inc)),
        coloring=None,
    )
    result = bipartition_inc(T)
    if isinstance(result, OddCycleWitness):
        T = ThetaDecomposition(
            T.complex, T.class_of, T.class_length, T.classes, T.inc_arcs, None, result
        )
    else:
        T = ThetaDecomposition(
            T.complex, T.class_of, T.class_length, T.classes, T.inc_arcs, result
        )
    logger.debug(
        "compute_theta() classes=%d inc_arcs=%d ramified=%s",
        T.class_count, len(T.inc_arcs), T.is_ramified,
    )
    return T


def halfspaces(T: ThetaDecomposition, class_id: int) -> Tuple[Set[int], Set[int]]:
    """
    The two halfspaces cut out by a Θ-class.

    H1 is the side holding the smallest vertex id incident to the class.

    Raises:
        UnknownClassError: class_id out of range
    """
    if not isinstance(class_id, (int, np.integer)) or not (0 <= class_id < T.class_count):
        raise UnknownClassError(class_id, T.class_count)
    K = T.complex
    keep = [i for i, c in enumerate(T.class_of) if c != class_id]
    if keep:
        u, v = np.array([K.edges[i] for i in keep], dtype=np.int64).T
    else:
        u = v = np.zeros(0, dtype=np.int64)
    g = sparse.csr_matrix(
        (np.ones(len(u), dtype=np.int8), (u, v)), shape=(K.vertex_count, K.vertex_count)
    )
    _, labels = csgraph.connected_components(g, directed=False)
    anchor = min(min(K.edges[e]) for e in T.classes[class_id])
    side = labels == labels[anchor]
    h1 = {int(x) for x in np.flatnonzero(side)}
    h2 = {int(x) for x in np.flatnonzero(~side)}
    return h1, h2


def bipartition_inc(T: ThetaDecomposition):
    """
    Properly 2-color Inc(G) by BFS, or return an odd cycle.

    Roots are taken in increasing class id and get color 1, so class 0 is always color 1.

    Returns:
        Tuple of colors indexed by class id, or an OddCycleWitness
    """
    adj = T.inc_neighbors()
    color = [0] * T.class_count
    parent = [-1] * T.class_count
    depth = [0] * T.class_count
    for root in range(T.class_count):
        if color[root]:
            continue
        color[root] = 1
        queue = deque([root])
        while queue:
            a = queue.popleft()
            for b in adj[a]:
                if not color[b]:
                    color[b] = 3 - color[a]
                    parent[b] = a
                    depth[b] = depth[a] + 1
                    queue.append(b)
                elif color[b] == color[a]:
                    return OddCycleWitness(_tree_cycle(a, b, parent, depth))
    return tuple(color)


def _tree_cycle(a: int, b: int, parent: List[int], depth: List[int]) -> Tuple[int, ...]:
    left, right = [a], [b]
    while depth[left[-1]] > depth[right[-1]]:
        left.append(parent[left[-1]])
    while depth[right[-1]] > depth[left[-1]]:
        right.append(parent[right[-1]])
    while left[-1] != right[-1]:
        left.append(parent[left[-1]])
        right.append(parent[right[-1]])
    return tuple(left + right[-2::-1])
