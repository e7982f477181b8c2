"""Numeric settings and the context manager that swaps them."""

from contextlib import contextmanager
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Iterator, Optional

from rectgeo.exceptions import ConfigurationError


@dataclass(frozen=True)
class Settings:
    """
    Tolerances and limits read by the library.

    Attributes:
        length_rtol: Relative tolerance for equal opposite sides and class lengths
        point_atol: Absolute tolerance for a point lying on a cell side or corner
        closure_atol: Absolute tolerance for an unfolded block loop to close
        orient_eps: Orientation magnitude treated as collinear
        angle_atol: Slack in radians for the local optimality check
        median_exhaustive_max: Largest n validated on every vertex triple. The all-triples check
            costs O(n^3) distance sums, so the default stays at test scale; it may be raised
            up to MEDIAN_EXHAUSTIVE_LIMIT
        median_samples: Number of random triples checked above that size
        isometry_samples: Vertex pairs checked against BFS when a tree product is built
        oracle_node_cap: Maximum sample graph nodes
        oracle_arc_cap: Maximum sample graph arcs
        generator_retries: Attempts a random generator makes before giving up
    """

    length_rtol: float = 1e-9
    point_atol: float = 1e-12
    closure_atol: float = 1e-9
    orient_eps: float = 1e-12
    angle_atol: float = 1e-9
    median_exhaustive_max: int = 60
    median_samples: int = 10_000
    isometry_samples: int = 256
    oracle_node_cap: int = 2_000_000
    oracle_arc_cap: int = 60_000_000
    generator_retries: int = 16

    def to_dict(self) -> Dict[str, Any]:
        """Return the settings as a plain dictionary."""
        return asdict(self)


# exhaustive median checks beyond this many vertices are refused
MEDIAN_EXHAUSTIVE_LIMIT = 2000

_FIELD_TYPES = {f.name: f.type for f in fields(Settings)}


def _checked(base: Settings, overrides: Dict[str, Any]) -> Settings:
    for key, value in overrides.items():
        if key not in _FIELD_TYPES:
            raise ConfigurationError(key, value, "unknown setting")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigurationError(key, value, "must be a number")
        if value <= 0:
            raise ConfigurationError(key, value, "must be positive")
        if _FIELD_TYPES[key] in (int, "int") and int(value) != value:
            raise ConfigurationError(key, value, "must be an integer")
        if key == "median_exhaustive_max" and value > MEDIAN_EXHAUSTIVE_LIMIT:
            raise ConfigurationError(key, value, f"must be at most {MEDIAN_EXHAUSTIVE_LIMIT}")
    return replace(base, **overrides)


class GeodesicContext:
    """
    Context manager for temporarily changing settings.

    Examples:
        >>> with GeodesicContext(median_exhaustive_max=200):
        ...     report = validate_cat0(K)
    """

    _current: Settings = Settings()

    def __init__(self, **overrides: Any):
        """
        Initialize context with setting overrides.

        Args:
            **overrides: Settings field names and their temporary values
        """
        self.overrides = dict(overrides)
        self._previous: Optional[Settings] = None

    def __enter__(self) -> "GeodesicContext":
        self._previous = GeodesicContext._current
        GeodesicContext._current = _checked(self._previous, self.overrides)
        return self

    def __exit__(self, exc_type, exc_val, exc_tb) -> None:
        if self._previous is not None:
            GeodesicContext._current = self._previous

    @classmethod
    def get_current(cls) -> Settings:
        """Get the active settings."""
        return cls._current


def get_settings() -> Settings:
    """Return the settings currently in force."""
    return GeodesicContext.get_current()


@contextmanager
def settings(**overrides: Any) -> Iterator[Settings]:
    """
    Temporarily override settings.

    Args:
        **overrides: Settings field names and values

    Examples:
        >>> with settings(point_atol=1e-9) as active:
        ...     active.point_atol
        1e-09
    """
    ctx = GeodesicContext(**overrides)
    with ctx:
        yield get_settings()
