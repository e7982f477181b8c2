"""Tests for gate selection and the interval boundary walks."""

import numpy as np
import pytest

from rectgeo import build_dense, build_structure, build_treeproduct, generate, GeneratorSpec
from rectgeo.boundary import (
    _name_sides,
    boundary_walk,
    boundary_walk_dense,
    boundary_walk_treeproduct,
    select_gates,
)
from rectgeo.structures import interval_vertices


def _interval_edges(S, p, q):
    members = set(interval_vertices(S, p, q))
    K = S.complex
    return [
        (u, v) for u, v in K.edges if u in members and v in members
    ], members


def _boundary_edges(S, p, q):
    """Edges of G(I(p, q)) lying in at most one face inside the interval."""
    edges, members = _interval_edges(S, p, q)
    K = S.complex
    out = set()
    for u, v in edges:
        inside = [
            f for f in K.faces_of_edge(K.edge_id(u, v)) if all(w in members for w in K.faces[f])
        ]
        if len(inside) <= 1:
            out.add((u, v))
    return out


def _path_edges(path):
    return {(min(a, b), max(a, b)) for a, b in zip(path, path[1:])}


class TestSelectGates:
    """Test the mutually furthest pair of two cells."""

    def test_edge_cells(self, grid_l_dense):
        """Test the two far corners of the L."""
        assert select_gates(grid_l_dense, (2, 5), (6, 7)) == (2, 6)

    def test_tie_breaks_lexicographically(self, book):
        """Test (2, 5) beats (3, 4) at equal distance."""
        M = build_dense(book)
        assert select_gates(M, (0, 1, 3, 2), (0, 1, 5, 4)) == (2, 5)

    def test_vertex_cells(self, grid_l_dense):
        """Test single vertices are their own gates."""
        assert select_gates(grid_l_dense, (4,), (4,)) == (4, 4)


class TestDenseWalk:
    """Test the walk on the dense structure."""

    def test_grid_l(self, grid_l_dense):
        """Test the two sides of the L."""
        B = boundary_walk_dense(grid_l_dense, 2, 6)
        assert B.pi1 == (2, 1, 0, 3, 6)
        assert B.pi2 == (2, 5, 4, 7, 6)
        assert B.deg0[4] == 4
        assert B.deg0[0] == 2
        assert B.deg0[1] == 3
        assert B.articulation == (2, 6)
        assert B.steps == (4, 4)

    def test_book(self, book):
        """Test the split at p goes to the smaller id first."""
        B = boundary_walk_dense(build_dense(book), 2, 5)
        assert B.pi1 == (2, 0, 4, 5)
        assert B.pi2 == (2, 3, 1, 5)
        assert B.deg0[0] == 3
        assert B.deg0[1] == 3
        assert B.articulation == (2, 5)

    def test_staircase_articulation(self, staircase):
        """Test the walk rejoins at the cut vertex."""
        B = boundary_walk_dense(build_dense(staircase), 0, 5)
        assert B.pi1 == (0, 1, 2, 4, 5)
        assert B.pi2 == (0, 3, 2, 6, 5)
        assert B.articulation == (0, 2, 5)
        assert B.deg0[2] == 4
        assert len(B.blocks()) == 2

    def test_same_vertex(self, grid_l_dense):
        """Test p == q gives the trivial boundary."""
        B = boundary_walk_dense(grid_l_dense, 4, 4)
        assert B.pi1 == B.pi2 == (4,)
        assert B.distance == 0
        assert B.blocks() == []

    def test_path_interval(self, grid_l_dense):
        """Test an interval that is a single edge is one bridge block."""
        B = boundary_walk_dense(grid_l_dense, 0, 1)
        assert B.pi1 == B.pi2 == (0, 1)
        assert B.blocks() == [((0, 1), (0, 1))]

    def test_flower(self, flower):
        """Test the walk on a non-ramified complex covers the interval boundary."""
        M = build_dense(flower)
        B = boundary_walk_dense(M, 6, 8)
        assert B.distance == 4
        assert _path_edges(B.pi1) | _path_edges(B.pi2) == _boundary_edges(M, 6, 8)


class TestTreeProductWalk:
    """Test the walk on the tree product."""

    def test_grid_l(self, grid_l_tree):
        """Test the same sides as the dense walk."""
        B = boundary_walk_treeproduct(grid_l_tree, 2, 6)
        assert B.pi1 == (2, 1, 0, 3, 6)
        assert B.pi2 == (2, 5, 4, 7, 6)
        assert B.deg0[4] == 4
        assert B.kind == "treeproduct"
        assert B.probes > 0

    def test_book_named_like_dense(self, book):
        """Test the book's sides get the dense walk's names."""
        dense = boundary_walk_dense(build_dense(book), 2, 5)
        tree = boundary_walk_treeproduct(build_treeproduct(book), 2, 5)
        assert (tree.pi1, tree.pi2) == (dense.pi1, dense.pi2)
        assert tree.deg0 == dense.deg0
        assert tree.path_pair() == dense.path_pair()

    def test_probe_bound(self, grid_l_tree, grid_l):
        """Test a single lookup probes at most ceil(log2(deg + 1)) times."""
        B = boundary_walk_treeproduct(grid_l_tree, 2, 6)
        assert B.max_probes <= 3


class TestWalkAgreement:
    """Test both walks against each other and the interval itself."""

    @pytest.mark.parametrize(
        "family, n, seed",
        [("grid-L", 5, 0), ("staircase", 3, 0), ("ramified", 14, 3), ("book", 4, 0)],
    )
    def test_same_boundary(self, family, n, seed):
        """Test every pair gets the same unordered boundary and deg0."""
        K = generate(GeneratorSpec(family, n, seed))
        dense = build_structure(K, "dense")
        tree = build_structure(K, "treeproduct")
        for p in range(K.vertex_count):
            for q in range(K.vertex_count):
                a = boundary_walk(dense, p, q)
                b = boundary_walk(tree, p, q)
                assert a.path_pair() == b.path_pair()
                assert (a.pi1, a.pi2) == (b.pi1, b.pi2)
                assert a.deg0 == b.deg0
                assert a.steps[0] + a.steps[1] == 2 * dense.distance(p, q)

    @pytest.mark.parametrize("family, n, seed", [("grid-L", 5, 0), ("squaregraph", 12, 1)])
    def test_boundary_edges(self, family, n, seed):
        """Test pi1 and pi2 trace exactly the interval edges in at most one interval face."""
        K = generate(GeneratorSpec(family, n, seed))
        M = build_dense(K)
        for p in range(K.vertex_count):
            for q in range(p + 1, K.vertex_count):
                B = boundary_walk(M, p, q)
                assert _path_edges(B.pi1) | _path_edges(B.pi2) == _boundary_edges(M, p, q)
                assert B.pi1[0] == B.pi2[0] == p
                assert B.pi1[-1] == B.pi2[-1] == q

    @pytest.mark.slow
    @pytest.mark.parametrize("seed", range(10))
    def test_large_ramified_naming(self, seed):
        """Test whole boundary paths agree on large ramified complexes with multi-block intervals."""
        K = generate(GeneratorSpec("ramified", 120, seed, lengths=("uniform", 0.5, 2.0)))
        dense = build_structure(K, "dense")
        tree = build_structure(K, "treeproduct")
        rng = np.random.default_rng(seed)
        for p, q in rng.integers(0, K.vertex_count, size=(200, 2)):
            a = boundary_walk(dense, int(p), int(q))
            b = boundary_walk(tree, int(p), int(q))
            assert (a.pi1, a.pi2) == (b.pi1, b.pi2)
            assert a.deg0 == b.deg0
            assert a.steps == b.steps == (dense.distance(p, q), dense.distance(p, q))


class TestSideNaming:
    """Test the rule naming the two sides of every block."""

    def test_smaller_id_goes_first(self):
        """Test each block piece is swapped so pi1 leaves the split through the smaller id."""
        pi1, pi2 = _name_sides([0, 5, 6, 9, 10, 12], [0, 2, 3, 9, 11, 12])
        assert pi1 == [0, 2, 3, 9, 10, 12]
        assert pi2 == [0, 5, 6, 9, 11, 12]

    def test_bridges_untouched(self):
        """Test shared edges between blocks are left alone."""
        assert _name_sides([0, 1, 2], [0, 1, 2]) == ([0, 1, 2], [0, 1, 2])
