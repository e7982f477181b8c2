"""Gate selection and the walk along the boundary of an interval.

For gate vertices p and q the interval I(p, q) induces a chain of planar disks whose
boundary is made of two shortest p-q paths pi1 and pi2. Both walks below build the two
paths one level at a time (every vertex on level k is k steps from p) and report for each
boundary vertex z its degree deg0(z) inside the interval: 2 at a convex corner, 3 on a
straight side, 4 at a reflex corner or an articulation vertex.
"""

import logging
from dataclasses import dataclass, field
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

from rectgeo.exceptions import InternalContradictionError
from rectgeo.structures import DenseMatrix, QueryStructure, TreeProduct

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class IntervalBoundary:
    """
    The two boundary paths of G(I(p, q)).

    Attributes:
        p: Source gate
        q: Target gate
        pi1: First boundary path, p to q
        pi2: Second boundary path, p to q
        deg0: Boundary vertex -> degree inside the interval
        articulation: Vertices common to both paths, from p to q
        steps: Walk steps taken along (pi1, pi2)
        probes: Binary-search probes spent (tree-product walk only)
        max_probes: Largest number of probes in a single lookup
        kind: Structure the walk ran on
    """

    p: int
    q: int
    pi1: Tuple[int, ...]
    pi2: Tuple[int, ...]
    deg0: Dict[int, int]
    articulation: Tuple[int, ...]
    steps: Tuple[int, int] = (0, 0)
    probes: int = 0
    max_probes: int = 0
    kind: str = "dense"

    @property
    def distance(self) -> int:
        return len(self.pi1) - 1

    def articulation_positions(self) -> List[int]:
        return [k for k, (a, b) in enumerate(zip(self.pi1, self.pi2)) if a == b]

    def blocks(self) -> List[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
        """(pi1 part, pi2 part) between consecutive articulation vertices."""
        pos = self.articulation_positions()
        return [
            (self.pi1[a:b + 1], self.pi2[a:b + 1]) for a, b in zip(pos, pos[1:])
        ]

    def vertices(self) -> List[int]:
        return sorted(set(self.pi1) | set(self.pi2))

    def swapped(self) -> "IntervalBoundary":
        return IntervalBoundary(
            self.p, self.q, self.pi2, self.pi1, dict(self.deg0), self.articulation,
            (self.steps[1], self.steps[0]), self.probes, self.max_probes, self.kind,
        )

    def path_pair(self) -> frozenset:
        """Unordered pair of boundary paths for comparisons."""
        return frozenset([self.pi1, self.pi2])

    def to_dict(self) -> Dict[str, object]:
        return {
            "p": self.p,
            "q": self.q,
            "pi1": list(self.pi1),
            "pi2": list(self.pi2),
            "deg0": {str(z): d for z, d in sorted(self.deg0.items())},
            "articulation": list(self.articulation),
            "steps": list(self.steps),
            "probes": self.probes,
            "max_probes": self.max_probes,
            "kind": self.kind,
        }


def select_gates(
    S: QueryStructure, cell_x: Sequence[int], cell_y: Sequence[int]
) -> Tuple[int, int]:
    """
    Mutually furthest vertices of two minimal cells.

    Maximizes the graph distance over the vertex pairs of cell_x x cell_y; ties go to the
    lexicographically smallest (p, q).

    Args:
        S: Query structure (for O(1) distances)
        cell_x: Vertices of the minimal cell of x (1, 2 or 4 of them)
        cell_y: Vertices of the minimal cell of y

    Examples:
        >>> select_gates(M, (1, 2, 5, 4), (3, 4, 7, 6))
        (2, 6)
    """
    best: Optional[Tuple[int, int, int]] = None
    for p, q in product(sorted(cell_x), sorted(cell_y)):
        key = (-S.distance(p, q), p, q)
        if best is None or key < best:
            best = key
    assert best is not None
    return best[1], best[2]


def _name_sides(pi1: List[int], pi2: List[int]) -> Tuple[List[int], List[int]]:
    """Swap block pieces so that pi1 leaves every split through the smaller vertex id."""
    pi1, pi2 = list(pi1), list(pi2)
    pos = [k for k, (a, b) in enumerate(zip(pi1, pi2)) if a == b]
    for a, b in zip(pos, pos[1:]):
        if b - a > 1 and pi1[a + 1] > pi2[a + 1]:
            pi1[a + 1:b], pi2[a + 1:b] = pi2[a + 1:b], pi1[a + 1:b]
    return pi1, pi2


def _finish(
    p: int,
    q: int,
    pi1: List[int],
    pi2: List[int],
    deg0: Dict[int, int],
    steps: Tuple[int, int],
    **extra,
) -> IntervalBoundary:
    pi1, pi2 = _name_sides(pi1, pi2)
    articulation = tuple(a for a, b in zip(pi1, pi2) if a == b)
    return IntervalBoundary(
        p, q, tuple(pi1), tuple(pi2), deg0, articulation, steps=steps, **extra,
    )


def boundary_walk_dense(M: DenseMatrix, p: int, q: int) -> IntervalBoundary:
    """
    Walk the interval boundary using the L lists of the dense structure.

    Each step extends pi1 from x and pi2 from y, where x and y are the current ends:

    * x == y (p itself or an articulation vertex): stop at q; else follow L_q(x), splitting
      when it has two entries, pi1 taking the smaller id.
    * |L_q(x)| == 1: x advances to its only successor a; y advances to a if L_q(y) = {a},
      to the other entry if a is in L_q(y), otherwise to the entry with deg0 <= 3.
    * |L_q(x)| == 2: a successor with deg0 == 4 is interior and excluded; when both remain,
      the one that y is not adjacent to belongs to pi1.

    Raises:
        InternalContradictionError: No consistent successor (non-CAT(0) input)
    """
    if p == q:
        return IntervalBoundary(p, q, (p,), (p,), {p: M.deg0(p, q, p)}, (p,))

    pi1, pi2 = [p], [p]
    trace: List[Tuple[int, int]] = []
    deg0 = lambda z: M.deg0(p, q, z)  # noqa: E731

    def partner(y: int, taken: int) -> int:
        ly = M.l_list(q, y)
        if len(ly) == 1:
            return ly[0]
        if taken in ly:
            return ly[1] if ly[0] == taken else ly[0]
        keep = [c for c in ly if deg0(c) <= 3]
        if len(keep) != 1:
            raise InternalContradictionError(
                f"cannot choose successor of {y} among {ly}", trace
            )
        return keep[0]

    x = y = p
    walked = [0, 0]
    while True:
        trace.append((x, y))
        lx = M.l_list(q, x)
        if x == y:
            if x == q:
                break
            if len(lx) == 1:
                x = y = lx[0]
            else:
                x, y = lx[0], lx[1]
        elif len(lx) == 1:
            (a,) = lx
            x, y = a, partner(y, a)
        else:
            a, b = lx
            da, db = deg0(a), deg0(b)
            if da == 4 and db == 4:
                raise InternalContradictionError(
                    f"both successors {a}, {b} of {x} have deg0 4", trace
                )
            if da == 4 or db == 4:
                nxt = b if da == 4 else a
                x, y = nxt, partner(y, nxt)
            else:
                ly = M.l_list(q, y)
                if b in ly and a not in ly:
                    x, y = a, b
                elif a in ly and b not in ly:
                    x, y = b, a
                else:
                    raise InternalContradictionError(
                        f"{y} is adjacent to both or neither of {a}, {b}", trace
                    )
        pi1.append(x)
        pi2.append(y)
        walked[0] += 1
        walked[1] += 1
        if len(pi1) - 1 > M.distance(p, q):
            raise InternalContradictionError("walk overran d(p, q)", trace)

    degrees = {z: deg0(z) for z in set(pi1) | set(pi2)}
    logger.debug("boundary_walk_dense() p=%d q=%d d=%d", p, q, len(pi1) - 1)
    return _finish(p, q, pi1, pi2, degrees, (walked[0], walked[1]), kind="dense")


@dataclass
class _Cursor:
    vertex: int
    i1: int = 0
    i2: int = 0
    steps: int = 0
    path: List[int] = field(default_factory=list)
    positions: List[Tuple[int, int]] = field(default_factory=list)


def boundary_walk_treeproduct(S: TreeProduct, p: int, q: int) -> IntervalBoundary:
    """
    Walk the interval boundary inside the product of the two tree paths.

    P1 joins C1(p) to C1(q) in T1 and P2 joins C2(p) to C2(q) in T2. pi1 steps across the
    next P1 class whenever its current vertex has an edge of that class and across the
    next P2 class otherwise; pi2 prefers P2. Each test is a binary search in Q(x).

    Raises:
        InternalContradictionError: Neither class is incident (non-isometric embedding)
    """
    c = S.coords
    _, cls1 = S.trees[0].path(int(c[p, 0]), int(c[q, 0]))
    _, cls2 = S.trees[1].path(int(c[p, 1]), int(c[q, 1]))
    d = len(cls1) + len(cls2)
    probes = 0
    max_probes = 0

    def lookup(v: int, class_id: Optional[int]) -> Optional[int]:
        nonlocal probes, max_probes
        if class_id is None:
            return None
        w, spent = S.find_class(v, class_id)
        probes += spent
        max_probes = max(max_probes, spent)
        return w

    trace: List[Tuple[int, int]] = []
    cursors = (_Cursor(p, path=[p], positions=[(0, 0)]), _Cursor(p, path=[p], positions=[(0, 0)]))
    for _ in range(d):
        trace.append((cursors[0].vertex, cursors[1].vertex))
        for which, cur in enumerate(cursors):
            next1 = cls1[cur.i1] if cur.i1 < len(cls1) else None
            next2 = cls2[cur.i2] if cur.i2 < len(cls2) else None
            order = ((next1, 1), (next2, 2)) if which == 0 else ((next2, 2), (next1, 1))
            for class_id, axis in order:
                w = lookup(cur.vertex, class_id)
                if w is not None:
                    cur.vertex = w
                    if axis == 1:
                        cur.i1 += 1
                    else:
                        cur.i2 += 1
                    break
            else:
                raise InternalContradictionError(
                    f"vertex {cur.vertex} has no edge in class {next1} or {next2}", trace
                )
            cur.steps += 1
            cur.path.append(cur.vertex)
            cur.positions.append((cur.i1, cur.i2))
    for cur in cursors:
        if cur.vertex != q:
            raise InternalContradictionError(f"walk ended at {cur.vertex}, not {q}", trace)

    degrees: Dict[int, int] = {}
    for cur in cursors:
        for z, (i1, i2) in zip(cur.path, cur.positions):
            if z in degrees:
                continue
            near = [
                cls1[i1] if i1 < len(cls1) else None,
                cls2[i2] if i2 < len(cls2) else None,
                cls1[i1 - 1] if i1 > 0 else None,
                cls2[i2 - 1] if i2 > 0 else None,
            ]
            degrees[z] = sum(lookup(z, cl) is not None for cl in near)
    logger.debug("boundary_walk_treeproduct() p=%d q=%d d=%d probes=%d", p, q, d, probes)
    return _finish(
        p, q, cursors[0].path, cursors[1].path, degrees, (cursors[0].steps, cursors[1].steps),
        probes=probes, max_probes=max_probes, kind="treeproduct",
    )


def boundary_walk(S: QueryStructure, p: int, q: int) -> IntervalBoundary:
    """Run the walk that matches the structure's variant."""
    if isinstance(S, TreeProduct):
        return boundary_walk_treeproduct(S, p, q)
    return boundary_walk_dense(S, p, q)
