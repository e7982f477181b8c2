"""Tests for the sampled-graph distance oracle."""

import numpy as np
import pytest

from rectgeo import GeneratorSpec, GeodesicContext, build_structure, distance, generate
from rectgeo.complex import PointSpec, random_point
from rectgeo.exceptions import OracleMemoryError
from rectgeo.oracle import _subdivisions, build_sample_graph, oracle_distance


class TestSampleGraph:
    """Test grid construction."""

    @pytest.mark.parametrize(
        "length, h, expected",
        [(1.0, 1 / 8, 8), (1.0, 0.3, 4), (1.0, 2.0, 1), (2.0, 1 / 8, 16), (0.75, 0.25, 4)],
    )
    def test_subdivisions(self, length, h, expected):
        """Test segment counts are powers of two with step at most h."""
        assert _subdivisions(length, h) == expected
        assert length / expected <= h + 1e-12 or expected == 1

    def test_node_count(self, grid_l):
        """Test shared sides and corners are sampled once."""
        assert build_sample_graph(grid_l, 1.0).node_count == 8
        G = build_sample_graph(grid_l, 0.5)
        assert G.subdivisions == (2, 2, 2, 2)
        # 8 corners, 10 edge midpoints, 3 face centres
        assert G.node_count == 21

    def test_face_clique(self, single_square):
        """Test every pair of a face's samples is joined."""
        G = build_sample_graph(single_square, 0.5)
        assert G.node_count == 9
        assert G.arc_count == 9 * 8 // 2

    def test_arcs_symmetric(self, grid_l):
        """Test arcs are stored in both directions with equal weights."""
        A = build_sample_graph(grid_l, 0.5).arcs
        assert (A != A.T).nnz == 0

    @pytest.mark.parametrize("h", [0.0, -1.0])
    def test_bad_step(self, grid_l, h):
        """Test non-positive steps are rejected."""
        with pytest.raises(ValueError):
            build_sample_graph(grid_l, h)

    def test_node_cap(self, grid_l):
        """Test the node limit."""
        with GeodesicContext(oracle_node_cap=10):
            with pytest.raises(OracleMemoryError):
                build_sample_graph(grid_l, 0.5)

    def test_arc_cap(self, grid_l):
        """Test the arc limit."""
        with GeodesicContext(oracle_arc_cap=10):
            with pytest.raises(OracleMemoryError):
                build_sample_graph(grid_l, 1.0)


class TestOracleDistance:
    """Test distances on the sample graph."""

    def test_same_point(self, grid_l):
        """Test x == y is 0 without building a graph."""
        x = PointSpec(0, 0.3, 0.3)
        assert oracle_distance(grid_l, x, x, 1e-9) == 0.0

    def test_square_diagonal(self, single_square):
        """Test opposite corners are joined straight even on the coarsest grid."""
        d = oracle_distance(single_square, PointSpec(0, 0.0, 0.0), PointSpec(0, 1.0, 1.0), 1.0)
        assert d == pytest.approx(np.sqrt(2))

    @pytest.mark.parametrize("h", [1 / 2, 1 / 8])
    def test_grid_l_exact(self, grid_l, h):
        """Test the L path through a sampled corner is found exactly."""
        d = oracle_distance(grid_l, PointSpec(1, 1.0, 0.5), PointSpec(2, 0.5, 1.0), h)
        assert d == pytest.approx(2 * np.sqrt(1.25), abs=1e-9)

    def test_reused_graph(self, grid_l):
        """Test a prebuilt graph gives the same answer."""
        G = build_sample_graph(grid_l, 0.25)
        x, y = PointSpec(0, 0.1, 0.2), PointSpec(1, 0.7, 0.9)
        assert oracle_distance(grid_l, x, y, 0.25, graph=G) == oracle_distance(grid_l, x, y, 0.25)

    def test_refinement_never_longer(self, grid_l):
        """Test halving h does not increase the distance."""
        x, y = PointSpec(0, 0.1, 0.7), PointSpec(1, 0.9, 0.3)
        coarse = oracle_distance(grid_l, x, y, 0.5)
        fine = oracle_distance(grid_l, x, y, 0.25)
        assert fine <= coarse + 1e-12


class TestAgreement:
    """Test the engine against the oracle."""

    @pytest.mark.parametrize("family, n, seed", [("grid-L", 4, 0), ("staircase", 3, 0)])
    def test_engine_within_oracle(self, family, n, seed):
        """Test engine <= oracle <= engine + 2 h per face."""
        K = generate(GeneratorSpec(family, n, seed))
        S = build_structure(K)
        h = 1 / 8
        G = build_sample_graph(K, h)
        rng = np.random.Generator(np.random.PCG64(seed))
        for _ in range(10):
            x, y = random_point(K, rng), random_point(K, rng)
            exact = distance(K, S, x, y)
            approx = oracle_distance(K, x, y, h, graph=G)
            assert exact <= approx + 1e-9
            assert approx - exact <= 2 * h * len(K.faces)

    @pytest.mark.slow
    def test_squaregraph(self):
        """Test a random squaregraph on the snapped grid of the oracle."""
        K = generate(GeneratorSpec("squaregraph", 12, 1))
        S = build_structure(K)
        h = 1 / 16
        G = build_sample_graph(K, h)
        rng = np.random.Generator(np.random.PCG64(5))
        for _ in range(10):
            x, y = random_point(K, rng, snap=0.5), random_point(K, rng, snap=0.5)
            exact = distance(K, S, x, y)
            approx = oracle_distance(K, x, y, h, graph=G)
            assert exact <= approx + 1e-9
            assert approx - exact <= 2 * h * len(K.faces)

    @pytest.mark.slow
    @pytest.mark.parametrize("family, seed", [("squaregraph", 21), ("ramified", 22)])
    def test_many_queries(self, family, seed):
        """Test 500 random queries on a 50-vertex complex never beat the oracle from below."""
        K = generate(GeneratorSpec(family, 50, seed))
        S = build_structure(K, "dense")
        h = 1 / 4
        G = build_sample_graph(K, h)
        rng = np.random.Generator(np.random.PCG64(seed))
        for _ in range(500):
            x, y = random_point(K, rng), random_point(K, rng)
            exact = distance(K, S, x, y)
            approx = oracle_distance(K, x, y, h, graph=G)
            assert exact <= approx + 1e-9
            assert approx - exact <= 2 * h * len(K.faces)
