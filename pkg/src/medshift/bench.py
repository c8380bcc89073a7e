"""Benchmark harness: generate a synthetic dataset, sweep each algorithm over
its parameter grid, score every run with the adjusted Rand index.

The configuration is a plain-text file of ``key = value`` lines. ``#`` starts
a comment. List values are comma separated. Recognized keys::

    algorithms            comma list of algorithm names (default: all)
    dataset.<field>       any SynthConfig field; ranges as "lo, hi"
    wms.h                 bandwidth grid, support units
    median-shift.h        bandwidth grid for L1 median shift on cumulative
                          histograms, support units
    mean-shift.h          bandwidth grid on squared Euclidean distance
                          between raw histogram vectors
    kmws.k, kmws.restarts, kmws.seed
    dbscan-ws.eps         support units
    dbscan-ws.min_pts

Support units mean the distance between adjacent bins is the dataset's bin
width, ``(bin_range[1] - bin_range[0]) / bins``.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field, fields
from typing import Dict, List, Optional

import numpy as np

from .clustering import cluster_dataset, dbscan_wasserstein, kmeans_wasserstein
from .core import cumul
from .datagen import SynthConfig, gen_synthetic
from .evaluation import adjusted_rand_index
from .exceptions import InvalidConfig, MedshiftError
from .modeseek import EngineConfig

ALGORITHMS = ("wms", "median-shift", "mean-shift", "kmws", "dbscan-ws")

DEFAULT_CONFIG = """\
# Synthetic two-class histogram benchmark.
algorithms = wms, median-shift, mean-shift, kmws, dbscan-ws

dataset.per_class = 50
dataset.samples_per_histogram = 100
dataset.bins = 100
dataset.rng_seed = 0

wms.h = 0.02, 0.05, 0.1, 0.2
median-shift.h = 0.02, 0.05, 0.1, 0.2
mean-shift.h = 0.02, 0.05, 0.1, 0.2

kmws.k = 2
kmws.restarts = 100
kmws.seed = 0

dbscan-ws.eps = 0.01, 0.02, 0.03, 0.04, 0.05
dbscan-ws.min_pts = 3, 5, 10
"""

_TUPLE_FIELDS = {"bin_range", "class1_mean_range", "class2_secondary_mean_range", "mixture_weights"}
_INT_FIELDS = {"per_class", "samples_per_histogram", "bins", "rng_seed"}


@dataclass
class BenchConfig:
    dataset: SynthConfig = field(default_factory=SynthConfig)
    algorithms: tuple = ALGORITHMS
    grids: Dict[str, Dict[str, list]] = field(default_factory=dict)

    def grid(self, algorithm) -> List[dict]:
        grid = self.grids.get(algorithm, {})
        keys = sorted(grid)
        return [dict(zip(keys, combo)) for combo in itertools.product(*(grid[k] for k in keys))]

    def as_dict(self) -> dict:
        return {
            "dataset": self.dataset.as_dict(),
            "algorithms": list(self.algorithms),
            "grids": self.grids,
        }


def _number(text: str, key: str):
    try:
        value = float(text)
    except ValueError:
        raise InvalidConfig(f"{key}: not a number: {text!r}") from None
    return int(value) if value.is_integer() and "." not in text and "e" not in text.lower() else value


def parse_bench_config(text: str) -> BenchConfig:
    dataset = {}
    algorithms = ALGORITHMS
    grids: Dict[str, Dict[str, list]] = {}
    synth_fields = {f.name for f in fields(SynthConfig)}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidConfig(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        items = [v.strip() for v in value.split(",") if v.strip()]
        if not items:
            raise InvalidConfig(f"line {lineno}: empty value for {key}")
        if key == "algorithms":
            unknown = set(items) - set(ALGORITHMS)
            if unknown:
                raise InvalidConfig(f"unknown algorithms {sorted(unknown)}")
            algorithms = tuple(items)
        elif key.startswith("dataset."):
            name = key[len("dataset."):]
            if name not in synth_fields:
                raise InvalidConfig(f"line {lineno}: unknown dataset field {name!r}")
            nums = [_number(v, key) for v in items]
            if name in _TUPLE_FIELDS:
                dataset[name] = tuple(float(v) for v in nums)
            elif name in _INT_FIELDS:
                dataset[name] = int(nums[0])
            else:
                dataset[name] = float(nums[0])
        elif "." in key:
            algo, param = key.split(".", 1)
            if algo not in ALGORITHMS:
                raise InvalidConfig(f"line {lineno}: unknown algorithm {algo!r}")
            grids.setdefault(algo, {})[param] = [_number(v, key) for v in items]
        else:
            raise InvalidConfig(f"line {lineno}: unknown key {key!r}")
    for algo in algorithms:
        required = {
            "wms": ("h",),
            "median-shift": ("h",),
            "mean-shift": ("h",),
            "kmws": ("k",),
            "dbscan-ws": ("eps", "min_pts"),
        }[algo]
        missing = [p for p in required if p not in grids.get(algo, {})]
        if missing:
            raise InvalidConfig(f"{algo}: missing grid for {', '.join(missing)}")
    return BenchConfig(SynthConfig(**dataset), algorithms, grids)


@dataclass
class BenchRow:
    algorithm: str
    params: dict
    ari: Optional[float]
    seconds: float
    ari_std: Optional[float] = None
    n_clusters: Optional[int] = None
    error: str = ""

    @property
    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params.items())


@dataclass
class BenchReport:
    rows: List[BenchRow]
    provenance: dict

    COLUMNS = ("algorithm", "params", "ari", "ari_std", "n_clusters", "seconds", "error")

    def best(self, algorithm) -> Optional[BenchRow]:
        scored = [r for r in self.rows if r.algorithm == algorithm and r.ari is not None]
        return max(scored, key=lambda r: r.ari) if scored else None

    def records(self) -> List[dict]:
        def fmt(v, spec):
            return "" if v is None else format(v, spec)

        return [
            {
                "algorithm": r.algorithm,
                "params": r.params_text,
                "ari": fmt(r.ari, ".6f"),
                "ari_std": fmt(r.ari_std, ".6f"),
                "n_clusters": fmt(r.n_clusters, "d"),
                "seconds": f"{r.seconds:.3f}",
                "error": r.error,
            }
            for r in self.rows
        ]

    def render(self) -> str:
        recs = self.records()
        widths = {c: max(len(c), *(len(r[c]) for r in recs)) for c in self.COLUMNS}
        line = "  ".join(c.ljust(widths[c]) for c in self.COLUMNS)
        out = [line, "  ".join("-" * widths[c] for c in self.COLUMNS)]
        for r in recs:
            out.append("  ".join(r[c].ljust(widths[c]) for c in self.COLUMNS))
        return "\n".join(out)


def _run_one(algorithm, params, X, truth, bin_width, n_jobs):
    if algorithm in ("wms", "median-shift", "mean-shift"):
        h = float(params["h"])
        if algorithm == "wms":
            config = EngineConfig.create(h / bin_width, "wasserstein1")
            data = X
        elif algorithm == "median-shift":
            config = EngineConfig.create(h / bin_width, "l1")
            data = cumul(X)
        else:
            config = EngineConfig.create(h, "sqeuclidean")
            data = X
        res = cluster_dataset(data, algorithm, config, keep_trajectories=False, n_jobs=n_jobs)
        return adjusted_rand_index(res.labels, truth), None, res.n_clusters
    if algorithm == "kmws":
        restarts = int(params.get("restarts", 1))
        seed = int(params.get("seed", 0))
        scores, sizes = [], []
        for r in range(restarts):
            res = kmeans_wasserstein(X, int(params["k"]), seed + r)
            scores.append(adjusted_rand_index(res.labels, truth))
            sizes.append(res.n_clusters)
        return float(np.mean(scores)), float(np.std(scores)), int(max(sizes))
    res = dbscan_wasserstein(X, float(params["eps"]) / bin_width, int(params["min_pts"]))
    return adjusted_rand_index(res.labels, truth), None, res.n_clusters


def run_bench(config: BenchConfig, n_jobs: Optional[int] = None) -> BenchReport:
    dataset = gen_synthetic(config.dataset)
    X, truth = dataset.histograms, dataset.labels
    rows = []
    for algorithm in config.algorithms:
        for params in config.grid(algorithm):
            start = time.perf_counter()
            try:
                ari, std, k = _run_one(algorithm, params, X, truth, config.dataset.bin_width, n_jobs)
                rows.append(BenchRow(algorithm, params, ari, time.perf_counter() - start, std, k))
            except MedshiftError as exc:
                rows.append(
                    BenchRow(algorithm, params, None, time.perf_counter() - start,
                             error=f"{type(exc).__name__}: {exc}")
                )
    return BenchReport(rows, {"dataset": dataset.provenance, "n": len(truth)})
