"""Tests for the query benchmark."""

import numpy as np
import pytest

from rectgeo import GeneratorSpec, build_structure, generate
from rectgeo.benchmark import PERCENTILES, run_benchmark, sample_queries


@pytest.fixture
def grid5():
    return generate(GeneratorSpec("grid-L", 5))


class TestSampleQueries:
    """Test query point sampling."""

    def test_seeded(self, grid5):
        """Test one seed gives one query list."""
        assert sample_queries(grid5, 10, 4) == sample_queries(grid5, 10, 4)
        assert sample_queries(grid5, 10, 4) != sample_queries(grid5, 10, 5)

    def test_count(self, grid5):
        """Test the number of pairs."""
        assert len(sample_queries(grid5, 7, 0)) == 7


class TestRunBenchmark:
    """Test the benchmark report."""

    def test_records(self, grid5):
        """Test one record per query, in order, with steps = 2 d(p, q)."""
        report = run_benchmark(grid5, "treeproduct", queries=30, seed=1)
        assert [r["index"] for r in report.records] == list(range(30))
        for r in report.records:
            assert r["steps"] == 2 * r["d"]
            assert r["contained"]
        assert report.containment_violations == 0

    def test_linear_fit(self, grid5):
        """Test the walk length fits steps = 2 d exactly."""
        report = run_benchmark(grid5, "dense", queries=40, seed=2)
        assert report.slope == pytest.approx(2.0)
        assert report.intercept == pytest.approx(0.0, abs=1e-9)

    def test_probe_bound(self, grid5):
        """Test binary-search probes stay within ceil(log2(deg + 1)) + 1."""
        report = run_benchmark(grid5, "treeproduct", queries=30, seed=3)
        assert report.probe_bound == 4
        assert 0 < report.max_probes <= report.probe_bound

    def test_percentiles(self, grid5):
        """Test the timing summary."""
        report = run_benchmark(grid5, queries=10, seed=0)
        assert set(report.percentiles) == {f"p{p}" for p in PERCENTILES}
        assert report.build_micros >= 0

    def test_workers(self, grid5):
        """Test a thread pool gives the same records apart from timings."""
        S = build_structure(grid5)
        serial = run_benchmark(grid5, queries=20, seed=6, structure=S)
        pooled = run_benchmark(grid5, queries=20, seed=6, workers=2, structure=S)
        assert serial.to_dict(timing=False) == pooled.to_dict(timing=False)

    def test_to_dict_without_timing(self, grid5):
        """Test timing fields are left out when asked."""
        d = run_benchmark(grid5, queries=5, seed=0).to_dict(timing=False)
        assert "percentiles" not in d
        assert "build_micros" not in d
        assert all("micros" not in r for r in d["records"])
        assert d["queries"] == 5

    def test_no_queries(self, grid5):
        """Test an empty run has no fit."""
        report = run_benchmark(grid5, queries=0)
        assert report.records == []
        assert report.slope is None


class TestScaling:
    """Test the step fit on growing complexes."""

    @pytest.mark.slow
    def test_slope_across_sizes(self):
        """Test steps grow as 2 d(p, q) on ramified complexes from 50 to 400 vertices."""
        d, steps = [], []
        for n in (50, 100, 200, 400):
            K = generate(GeneratorSpec("ramified", n, n))
            report = run_benchmark(K, "treeproduct", queries=50, seed=n)
            assert report.containment_violations == 0
            assert report.max_probes <= report.probe_bound
            d.extend(r["d"] for r in report.records)
            steps.extend(r["steps"] for r in report.records)
        slope, intercept = np.polyfit(np.array(d, dtype=float), np.array(steps, dtype=float), 1)
        assert slope == pytest.approx(2.0, abs=0.01)
        assert intercept == pytest.approx(0.0, abs=0.05)
