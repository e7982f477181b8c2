"""Tests for settings and the settings context manager."""

import pytest

from rectgeo.config import (
    MEDIAN_EXHAUSTIVE_LIMIT,
    GeodesicContext,
    Settings,
    get_settings,
    settings,
)
from rectgeo.exceptions import ConfigurationError


class TestSettings:
    """Test the defaults."""

    def test_defaults(self):
        """Test the documented default tolerances and caps."""
        cfg = Settings()
        assert cfg.length_rtol == 1e-9
        assert cfg.point_atol == 1e-12
        assert cfg.closure_atol == 1e-9
        assert cfg.median_exhaustive_max == 60
        assert cfg.oracle_node_cap == 2_000_000
        assert cfg.generator_retries == 16

    def test_to_dict(self):
        """Test conversion to a plain dictionary."""
        d = Settings().to_dict()
        assert d["isometry_samples"] == 256
        assert set(d) >= {"orient_eps", "angle_atol", "oracle_arc_cap"}


class TestGeodesicContext:
    """Test temporary overrides."""

    def test_override_and_restore(self):
        """Test that a value is swapped in and restored on exit."""
        before = get_settings().point_atol
        with GeodesicContext(point_atol=1e-6):
            assert get_settings().point_atol == 1e-6
        assert get_settings().point_atol == before

    def test_nested(self):
        """Test that nested contexts stack."""
        with GeodesicContext(median_samples=10):
            with GeodesicContext(median_exhaustive_max=5):
                cfg = get_settings()
                assert cfg.median_samples == 10
                assert cfg.median_exhaustive_max == 5
            assert get_settings().median_exhaustive_max == 60

    def test_restored_after_error(self):
        """Test that an exception inside the block still restores settings."""
        with pytest.raises(RuntimeError):
            with GeodesicContext(closure_atol=0.5):
                raise RuntimeError("boom")
        assert get_settings().closure_atol == 1e-9

    def test_settings_helper_yields_active(self):
        """Test the functional form."""
        with settings(orient_eps=1e-6) as active:
            assert active.orient_eps == 1e-6


class TestValidation:
    """Test rejected overrides."""

    def test_unknown_key(self):
        """Test that an unknown setting is rejected."""
        with pytest.raises(ConfigurationError, match="unknown setting"):
            with GeodesicContext(tolerance=1e-3):
                pass

    @pytest.mark.parametrize("value", [0, -1e-9])
    def test_non_positive(self, value):
        """Test that zero and negative values are rejected."""
        with pytest.raises(ConfigurationError, match="positive"):
            with GeodesicContext(point_atol=value):
                pass

    def test_non_number(self):
        """Test that strings and booleans are rejected."""
        with pytest.raises(ConfigurationError):
            with GeodesicContext(point_atol="1e-9"):
                pass
        with pytest.raises(ConfigurationError):
            with GeodesicContext(median_samples=True):
                pass

    def test_integer_field(self):
        """Test that an integer field refuses fractions."""
        with pytest.raises(ConfigurationError, match="integer"):
            with GeodesicContext(median_samples=2.5):
                pass

    def test_median_threshold_limit(self):
        """Test the exhaustive median threshold may be raised to 2000 but no further."""
        with GeodesicContext(median_exhaustive_max=MEDIAN_EXHAUSTIVE_LIMIT):
            assert get_settings().median_exhaustive_max == 2000
        with pytest.raises(ConfigurationError, match="at most 2000"):
            with GeodesicContext(median_exhaustive_max=2001):
                pass
