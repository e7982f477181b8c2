"""Tests for the instance generators."""

import numpy as np
import pytest

from rectgeo import GeodesicContext, compute_theta, validate_cat0
from rectgeo.exceptions import GenerationFailedError
from rectgeo.generators import FAMILIES, GeneratorSpec, generate


class TestFixedFamilies:
    """Test the deterministic shapes."""

    def test_grid_l(self, grid_l):
        """Test grid-L 3 is the L fixture."""
        assert generate(GeneratorSpec("grid-L", 3)) == grid_l

    def test_staircase(self, staircase):
        """Test staircase 2 is the staircase fixture."""
        assert generate(GeneratorSpec("staircase", 2)) == staircase

    def test_book(self, book):
        """Test book 3 is the book fixture."""
        K = generate(GeneratorSpec("book", 3))
        assert K == book
        assert K.vertex_count == 8
        assert len(K.faces) == 3

    def test_grid_l_size(self):
        """Test grid-L n has (n)^2 minus the removed quadrant's vertices."""
        K = generate(GeneratorSpec("grid-L", 5))
        assert K.vertex_count == 25 - 4
        assert len(K.faces) == 16 - 4

    def test_seed_ignored(self):
        """Test fixed families do not depend on the seed."""
        assert generate(GeneratorSpec("book", 4, 1)) == generate(GeneratorSpec("book", 4, 2))


class TestRandomFamilies:
    """Test the seeded random growth."""

    @pytest.mark.parametrize("family", ["squaregraph", "ramified"])
    @pytest.mark.parametrize("n", [4, 6, 9, 15])
    def test_exact_size(self, family, n):
        """Test the vertex count is hit exactly."""
        assert generate(GeneratorSpec(family, n, 3)).vertex_count == n

    @pytest.mark.parametrize("family", ["squaregraph", "ramified"])
    def test_deterministic(self, family):
        """Test one seed gives one complex."""
        a = generate(GeneratorSpec(family, 14, 11))
        b = generate(GeneratorSpec(family, 14, 11))
        assert a == b

    @pytest.mark.parametrize("family", ["squaregraph", "ramified"])
    def test_accepted(self, family):
        """Test every output passes the CAT(0) check."""
        for seed in range(4):
            assert validate_cat0(generate(GeneratorSpec(family, 12, seed))).accepted

    def test_ramified_has_bipartite_inc(self):
        """Test the ramified family only returns ramified complexes."""
        for seed in range(6):
            assert compute_theta(generate(GeneratorSpec("ramified", 16, seed))).is_ramified

    def test_small_sizes_round_up(self):
        """Test n below 4 gives the starting square."""
        assert generate(GeneratorSpec("squaregraph", 2)).vertex_count == 4


class TestLengths:
    """Test drawn side lengths."""

    def test_uniform_on_dyadic_grid(self):
        """Test lengths are multiples of 1/8 inside [a, b], equal across a class."""
        K = generate(GeneratorSpec("grid-L", 4, 5, ("uniform", 0.5, 2.0)))
        T = compute_theta(K)
        eighths = K.lengths * 8
        assert np.array_equal(eighths, np.round(eighths))
        assert K.lengths.min() >= 0.5
        assert K.lengths.max() <= 2.0
        for members in T.classes:
            assert len({float(K.lengths[e]) for e in members}) == 1

    def test_unit(self):
        """Test unit lengths by default."""
        assert np.all(generate(GeneratorSpec("staircase", 3)).lengths == 1.0)

    def test_parse(self):
        """Test the length spec parser."""
        assert GeneratorSpec.parse_lengths("unit") == "unit"
        assert GeneratorSpec.parse_lengths("uniform:0.5:2") == ("uniform", 0.5, 2.0)

    @pytest.mark.parametrize("text", ["gauss", "uniform:2:1", "uniform:0:1", "uniform:1"])
    def test_parse_errors(self, text):
        """Test malformed length specs are rejected."""
        with pytest.raises(ValueError):
            GeneratorSpec.parse_lengths(text)

    def test_to_dict(self):
        """Test the JSON form of a spec."""
        spec = GeneratorSpec("ramified", 10, 2, ("uniform", 1.0, 3.0))
        assert spec.to_dict() == {
            "family": "ramified", "n": 10, "seed": 2, "lengths": ["uniform", 1.0, 3.0]
        }


class TestErrors:
    """Test rejected specs."""

    def test_unknown_family(self):
        """Test family names are checked."""
        with pytest.raises(ValueError):
            generate(GeneratorSpec("torus", 5))

    def test_bad_size(self):
        """Test n < 1 is refused."""
        with pytest.raises(ValueError):
            generate(GeneratorSpec("book", 0))

    def test_families(self):
        """Test the list of families."""
        assert set(FAMILIES) == {"squaregraph", "ramified", "book", "staircase", "grid-L"}

    def test_retries_exhausted(self, monkeypatch):
        """Test a generator that never validates gives up after generator_retries attempts."""
        from rectgeo import generators
        from rectgeo.exceptions import NotBipartiteError

        def always_fails(*args, **kwargs):
            raise NotBipartiteError([0, 1, 2])

        monkeypatch.setattr(generators, "validate_cat0", always_fails)
        with GeodesicContext(generator_retries=3):
            with pytest.raises(GenerationFailedError) as info:
                generate(GeneratorSpec("squaregraph", 8, 0))
        assert info.value.attempts == 3


class TestSquaregraphSize:
    """Test the sparsity of plane quadrangulations."""

    @pytest.mark.parametrize("n", [4, 10, 30, 80])
    @pytest.mark.parametrize("seed", range(3))
    def test_edge_and_face_bounds(self, n, seed):
        """Test |E| <= 2n and |F| <= n."""
        K = generate(GeneratorSpec("squaregraph", n, seed))
        assert len(K.edges) <= 2 * n
        assert len(K.faces) <= n
