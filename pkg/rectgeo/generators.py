"""Instance generators for tests and benchmarks.

Families:

* ``book``: n rectangular pages sharing one spine edge.
* ``staircase``: n unit squares glued corner to corner along the diagonal.
* ``grid-L``: the unit grid on [0, k]^2 with the upper right quadrant removed, k = n - 1.
* ``squaregraph``: a random plane quadrangulation grown from one square whose inner vertices
  all have degree at least 4 (the inner degree may be 5, so Inc may be non-bipartite).
* ``ramified``: a random complex grown by gluing pages onto any edge and filling corners
  only where the vertex link stays bipartite.

Random families draw from ``numpy.random.Generator(PCG64(seed))``. Growth is pure integer
combinatorics; lengths are drawn per Θ-class as multiples of 1/8, so the same spec gives the
same complex on every platform.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Set, Tuple, Union

import numpy as np

from rectgeo.complex import RectComplex, build_complex, validate_cat0
from rectgeo.config import get_settings
from rectgeo.exceptions import GenerationFailedError, NotRamifiedError, RectGeoException
from rectgeo.theta import compute_theta

logger = logging.getLogger(__name__)

FAMILIES = ("squaregraph", "ramified", "book", "staircase", "grid-L")

LengthSpec = Union[str, Tuple[str, float, float]]

# dyadic grid for drawn lengths
_LENGTH_DENOM = 8


@dataclass(frozen=True)
class GeneratorSpec:
    """
    Parameters of a generated complex.

    Attributes:
        family: One of FAMILIES
        n: Size (pages, squares, grid side, or vertex count for the random families)
        seed: 64-bit seed
        lengths: 'unit' or ('uniform', a, b)
    """

    family: str
    n: int
    seed: int = 0
    lengths: LengthSpec = "unit"

    @classmethod
    def parse_lengths(cls, text: str) -> LengthSpec:
        """
        Parse 'unit' or 'uniform:a:b'.

        Examples:
            >>> GeneratorSpec.parse_lengths("uniform:0.5:2")
            ('uniform', 0.5, 2.0)
        """
        if text == "unit":
            return "unit"
        parts = text.split(":")
        if len(parts) != 3 or parts[0] != "uniform":
            raise ValueError(f"expected 'unit' or 'uniform:a:b', got {text!r}")
        a, b = float(parts[1]), float(parts[2])
        if not 0 < a <= b:
            raise ValueError(f"need 0 < a <= b, got a={a}, b={b}")
        return ("uniform", a, b)

    def to_dict(self) -> Dict[str, object]:
        lengths = self.lengths if isinstance(self.lengths, str) else list(self.lengths)
        return {"family": self.family, "n": self.n, "seed": self.seed, "lengths": lengths}


class _Growth:
    """Mutable complex under construction: unit edges and faces in creation order."""

    def __init__(self) -> None:
        self.n = 0
        self.edges: List[Tuple[int, int]] = []
        self.faces: List[Tuple[int, int, int, int]] = []
        self.adj: List[Set[int]] = []
        self.faces_at: List[List[int]] = []

    def vertex(self) -> int:
        self.adj.append(set())
        self.faces_at.append([])
        self.n += 1
        return self.n - 1

    def edge(self, u: int, v: int) -> None:
        self.edges.append((u, v))
        self.adj[u].add(v)
        self.adj[v].add(u)

    def face(self, a: int, b: int, c: int, d: int) -> None:
        for u in (a, b, c, d):
            self.faces_at[u].append(len(self.faces))
        self.faces.append((a, b, c, d))

    def square_on_edge(self, u: int, v: int) -> Tuple[int, int]:
        u2, v2 = self.vertex(), self.vertex()
        self.edge(u, u2)
        self.edge(u2, v2)
        self.edge(v2, v)
        self.face(u, v, v2, u2)
        return u2, v2

    def square_at_vertex(self, w: int) -> Tuple[int, int, int]:
        a, b, c = self.vertex(), self.vertex(), self.vertex()
        self.edge(w, a)
        self.edge(a, b)
        self.edge(b, c)
        self.edge(c, w)
        self.face(w, a, b, c)
        return a, b, c

    def fill(self, u: int, w: int, v: int) -> int:
        z = self.vertex()
        self.edge(u, z)
        self.edge(z, v)
        self.face(u, w, v, z)
        return z

    def link_distances(self, w: int, source: int) -> Dict[int, int]:
        """BFS over the link of w, nodes named by the far endpoint of each edge at w."""
        near: Dict[int, Set[int]] = {u: set() for u in self.adj[w]}
        for f in self.faces_at[w]:
            face = self.faces[f]
            k = face.index(w)
            a, b = face[(k - 1) % 4], face[(k + 1) % 4]
            near[a].add(b)
            near[b].add(a)
        dist = {source: 0}
        queue = deque([source])
        while queue:
            a = queue.popleft()
            for b in near[a]:
                if b not in dist:
                    dist[b] = dist[a] + 1
                    queue.append(b)
        return dist

    def build(self) -> RectComplex:
        return build_complex(self.n, self.edges, self.faces)


def _book(n: int) -> _Growth:
    g = _Growth()
    c0, c1 = g.vertex(), g.vertex()
    g.edge(c0, c1)
    for _ in range(max(n, 1)):
        a, b = g.vertex(), g.vertex()
        g.edge(c0, a)
        g.edge(c1, b)
        g.edge(a, b)
        g.face(c0, c1, b, a)
    return g


def _staircase(n: int) -> _Growth:
    g = _Growth()
    ids: Dict[Tuple[int, int], int] = {}

    def at(x: int, y: int) -> int:
        if (x, y) not in ids:
            ids[(x, y)] = g.vertex()
        return ids[(x, y)]

    for i in range(max(n, 1)):
        corners = [at(i, i), at(i + 1, i), at(i + 1, i + 1), at(i, i + 1)]
        for k in range(4):
            g.edge(corners[k], corners[(k + 1) % 4])
        g.face(*corners)
    return g


def _grid_l(n: int) -> _Growth:
    k = max(n - 1, 1)
    h = -(-k // 2)
    g = _Growth()
    ids: Dict[Tuple[int, int], int] = {}
    for y in range(k + 1):
        for x in range(k + 1):
            if not (x > h and y > h):
                ids[(x, y)] = g.vertex()
    for y in range(k + 1):
        for x in range(k):
            if (x, y) in ids and (x + 1, y) in ids:
                g.edge(ids[(x, y)], ids[(x + 1, y)])
    for y in range(k):
        for x in range(k + 1):
            if (x, y) in ids and (x, y + 1) in ids:
                g.edge(ids[(x, y)], ids[(x, y + 1)])
    for y in range(k):
        for x in range(k):
            if not (x >= h and y >= h):
                g.face(ids[(x, y)], ids[(x + 1, y)], ids[(x + 1, y + 1)], ids[(x, y + 1)])
    return g


def _pick_size(rng: np.random.Generator, remaining: int, can_fill: bool, weights: Dict[int, float]) -> int:
    """Vertex gain of the next growth step, never leaving exactly one vertex to add."""
    options = [
        s for s in (1, 2, 3)
        if s <= remaining and remaining - s != 1 and (s != 1 or can_fill)
    ]
    if not options:
        # only reachable from a lone square asked for 5 vertices
        return 2
    w = np.array([weights[s] for s in options])
    return int(options[int(rng.choice(len(options), p=w / w.sum()))])


def _squaregraph(n: int, rng: np.random.Generator) -> _Growth:
    g = _Growth()
    square = [g.vertex() for _ in range(4)]
    for k in range(4):
        g.edge(square[k], square[(k + 1) % 4])
    g.face(*square)
    # closed boundary walk of the plane disk; cut vertices appear more than once
    walk = list(square)
    while g.n < n:

        def fillable(j: int) -> bool:
            w = walk[j]
            u, v = walk[j - 1], walk[(j + 1) % len(walk)]
            return u != v and (len(g.adj[w]) >= 4 or walk.count(w) > 1)

        spots = [j for j in range(len(walk)) if fillable(j)]
        size = _pick_size(rng, n - g.n, bool(spots), {1: 0.35, 2: 0.45, 3: 0.2})
        if size == 1:
            j = spots[int(rng.integers(len(spots)))]
            u, w, v = walk[j - 1], walk[j], walk[(j + 1) % len(walk)]
            z = g.fill(u, w, v)
            walk[j] = z
        elif size == 2:
            j = int(rng.integers(len(walk)))
            u, v = walk[j], walk[(j + 1) % len(walk)]
            u2, v2 = g.square_on_edge(u, v)
            walk[j + 1:j + 1] = [u2, v2]
        else:
            j = int(rng.integers(len(walk)))
            a, b, c = g.square_at_vertex(walk[j])
            walk[j + 1:j + 1] = [a, b, c, walk[j]]
    return g


def _ramified(n: int, rng: np.random.Generator) -> _Growth:
    g = _Growth()
    square = [g.vertex() for _ in range(4)]
    for k in range(4):
        g.edge(square[k], square[(k + 1) % 4])
    g.face(*square)
    while g.n < n:
        corners: List[Tuple[int, int, int]] = []
        for w in rng.permutation(g.n):
            w = int(w)
            nbrs = sorted(g.adj[w])
            for i, u in enumerate(nbrs):
                dist = g.link_distances(w, u)
                for v in nbrs[i + 1:]:
                    d = dist.get(v)
                    # closing an odd path keeps the link bipartite with girth >= 4
                    if d is None or (d % 2 == 1 and d >= 3):
                        corners.append((u, w, v))
            if corners:
                break
        size = _pick_size(rng, n - g.n, bool(corners), {1: 0.3, 2: 0.55, 3: 0.15})
        if size == 1:
            g.fill(*corners[int(rng.integers(len(corners)))])
        elif size == 2:
            u, v = g.edges[int(rng.integers(len(g.edges)))]
            g.square_on_edge(u, v)
        else:
            g.square_at_vertex(int(rng.integers(g.n)))
    return g


_FIXED: Dict[str, Callable[[int], _Growth]] = {
    "book": _book,
    "staircase": _staircase,
    "grid-L": _grid_l,
}
_RANDOM: Dict[str, Callable[[int, np.random.Generator], _Growth]] = {
    "squaregraph": _squaregraph,
    "ramified": _ramified,
}


def _with_lengths(K: RectComplex, lengths: LengthSpec, rng: np.random.Generator) -> RectComplex:
    if lengths == "unit":
        return K
    _, a, b = lengths  # type: ignore[misc]
    T = compute_theta(K)
    lo = max(int(np.ceil(a * _LENGTH_DENOM)), 1)
    hi = max(int(np.floor(b * _LENGTH_DENOM)), lo)
    per_class = rng.integers(lo, hi + 1, size=T.class_count) / _LENGTH_DENOM
    edges = [(u, v, float(per_class[c])) for (u, v), c in zip(K.edges, T.class_of)]
    return build_complex(K.vertex_count, edges, K.faces)


def generate(spec: GeneratorSpec) -> RectComplex:
    """
    Generate a complex.

    The random families reach exactly n vertices for n = 4 and n >= 6; smaller sizes round
    up to the nearest reachable count. Every output passes validate_cat0; a random attempt
    that does not is redrawn from a spawned seed.

    Raises:
        ValueError: Unknown family or n < 1
        GenerationFailedError: generator_retries attempts all failed validation

    Examples:
        >>> K = generate(GeneratorSpec("book", 3))
        >>> K.vertex_count, len(K.faces)
        (8, 3)
    """
    if spec.family not in FAMILIES:
        raise ValueError(f"unknown family {spec.family!r}; expected one of {FAMILIES}")
    if spec.n < 1:
        raise ValueError(f"n must be at least 1, got {spec.n}")
    logger.info("generate() family=%s n=%d seed=%d", spec.family, spec.n, spec.seed)

    retries = get_settings().generator_retries
    streams = np.random.SeedSequence(spec.seed).spawn(retries)
    last: Optional[RectGeoException] = None
    attempts = 0
    for attempt, stream in enumerate(streams):
        attempts += 1
        rng = np.random.Generator(np.random.PCG64(stream))
        if spec.family in _FIXED:
            growth = _FIXED[spec.family](spec.n)
        else:
            growth = _RANDOM[spec.family](max(spec.n, 4), rng)
        try:
            K = _with_lengths(growth.build(), spec.lengths, rng)
            validate_cat0(K, strict=True, seed=spec.seed)
            if spec.family == "ramified":
                T = compute_theta(K)
                if not T.is_ramified:
                    raise NotRamifiedError(T.odd_cycle.cycle if T.odd_cycle else ())
        except RectGeoException as exc:
            last = exc
            logger.debug("generate() attempt %d rejected: %s", attempt, exc)
            if spec.family in _FIXED:
                break
            continue
        return K
    raise GenerationFailedError(spec.family, spec.seed, attempts) from last
