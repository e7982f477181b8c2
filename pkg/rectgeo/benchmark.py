"""Query benchmark: structure sizes, walk step counts, timings and their fit against d(p, q)."""

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from rectgeo.complex import PointSpec, RectComplex, random_point
from rectgeo.engine import GeodesicPath, interior_in_interval, query
from rectgeo.exceptions import InternalContradictionError
from rectgeo.structures import QueryStructure, build_structure, structure_sizes

logger = logging.getLogger(__name__)

PERCENTILES = (50, 90, 99)


@dataclass
class BenchmarkReport:
    """
    Outcome of a benchmark run.

    Attributes:
        sizes: Structure entry counts
        seed: Seed of the query points
        build_micros: Structure construction time
        records: One dict per query, in query order
        percentiles: Wall-clock percentiles of the query time in microseconds
        slope: Least-squares slope of total walk steps against d(p, q)
        intercept: Intercept of the same fit
        max_probes: Largest binary-search probe count of a single lookup
        probe_bound: ceil(log2(max degree + 1)) + 1
        containment_violations: Queries with a bend vertex outside I(p, q)
    """

    sizes: Dict[str, object]
    seed: int
    build_micros: float
    records: List[Dict[str, object]] = field(default_factory=list)
    percentiles: Dict[str, float] = field(default_factory=dict)
    slope: Optional[float] = None
    intercept: Optional[float] = None
    max_probes: int = 0
    probe_bound: int = 0
    containment_violations: int = 0

    def to_dict(self, timing: bool = True) -> Dict[str, object]:
        records = self.records if timing else [
            {k: v for k, v in r.items() if k != "micros"} for r in self.records
        ]
        out: Dict[str, object] = {
            "sizes": self.sizes,
            "seed": self.seed,
            "queries": len(self.records),
            "records": records,
            "slope": self.slope,
            "intercept": self.intercept,
            "max_probes": self.max_probes,
            "probe_bound": self.probe_bound,
            "containment_violations": self.containment_violations,
        }
        if timing:
            out["build_micros"] = self.build_micros
            out["percentiles"] = self.percentiles
        return out


def sample_queries(K: RectComplex, count: int, seed: int) -> List[Tuple[PointSpec, PointSpec]]:
    """Random query pairs; a third of the coordinates snap to cell sides."""
    rng = np.random.Generator(np.random.PCG64(seed))
    return [(random_point(K, rng, snap=0.3), random_point(K, rng, snap=0.3)) for _ in range(count)]


def _record(index: int, S: QueryStructure, path: GeodesicPath) -> Dict[str, object]:
    p, q = path.gates
    d = S.distance(p, q)
    if path.steps != 2 * d:
        raise InternalContradictionError(
            f"query {index}: walk took {path.steps} steps for d(p, q) = {d}"
        )
    return {
        "index": index,
        "p": p,
        "q": q,
        "d": d,
        "steps": path.steps,
        "length": path.length,
        "probes": path.probes,
        "max_probes": path.max_probes,
        "micros": path.micros,
        "contained": interior_in_interval(S, path),
    }


def run_benchmark(
    K: RectComplex,
    kind: str = "auto",
    queries: int = 1000,
    seed: int = 0,
    workers: int = 1,
    structure: Optional[QueryStructure] = None,
) -> BenchmarkReport:
    """
    Build a structure (unless given) and time random queries on it.

    Args:
        K: Accepted complex with at least one face
        kind: 'dense', 'treeproduct' or 'auto'
        queries: Number of queries
        seed: Seed of the query points
        workers: Thread pool size; records are ordered by query index either way
        structure: Prebuilt structure for K

    Raises:
        InternalContradictionError: A walk took other than d(p, q) steps per path
    """
    t0 = time.perf_counter()
    S = structure if structure is not None else build_structure(K, kind)
    build_micros = (time.perf_counter() - t0) * 1e6
    report = BenchmarkReport(structure_sizes(S), seed, build_micros)
    logger.info("run_benchmark() kind=%s queries=%d seed=%d workers=%d", S.kind, queries, seed, workers)

    pairs = sample_queries(K, queries, seed)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            paths = list(pool.map(lambda xy: query(K, S, *xy), pairs))
    else:
        paths = [query(K, S, x, y) for x, y in pairs]
    report.records = [_record(i, S, path) for i, path in enumerate(paths)]

    if report.records:
        micros = np.array([r["micros"] for r in report.records], dtype=float)
        report.percentiles = {
            f"p{p}": float(v) for p, v in zip(PERCENTILES, np.percentile(micros, PERCENTILES))
        }
        d = np.array([r["d"] for r in report.records], dtype=float)
        steps = np.array([r["steps"] for r in report.records], dtype=float)
        if len(np.unique(d)) >= 2:
            slope, intercept = np.polyfit(d, steps, 1)
            report.slope, report.intercept = float(slope), float(intercept)
        report.max_probes = max(int(r["max_probes"]) for r in report.records)
        report.containment_violations = sum(not r["contained"] for r in report.records)
    max_degree = max((K.degree(v) for v in range(K.vertex_count)), default=0)
    report.probe_bound = int(math.ceil(math.log2(max_degree + 1))) + 1
    logger.debug(
        "run_benchmark() slope=%s max_probes=%d violations=%d",
        report.slope, report.max_probes, report.containment_violations,
    )
    return report
