"""Synthetic histogram datasets and time-series ingestion.

The synthetic generator draws two classes of empirical histograms:

* class 0: samples from one Gaussian whose mean is drawn in a narrow range,
* class 1: samples from a two-component Gaussian mixture whose main
  component is drawn like class 0 and whose secondary component sits
  further to the left.

All randomness comes from one ``numpy.random.default_rng(rng_seed)`` stream
(PCG64), consumed in a fixed order, so a config fully determines the dataset.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import List, Tuple

import numpy as np

from .core import PointCloud, make_histogram
from .exceptions import EmptyRange, EmptySeries, InvalidConfig, ParseError


@dataclass(frozen=True)
class SynthConfig:
    per_class: int = 50
    samples_per_histogram: int = 100
    bins: int = 100
    bin_range: Tuple[float, float] = (0.0, 1.0)
    class1_mean_range: Tuple[float, float] = (0.47, 0.53)
    class2_secondary_mean_range: Tuple[float, float] = (0.17, 0.23)
    mixture_weights: Tuple[float, float] = (0.8, 0.2)
    sigma: float = 0.02
    rng_seed: int = 0

    def __post_init__(self):
        for name in ("per_class", "samples_per_histogram", "bins"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise InvalidConfig(f"{name} must be a positive integer, got {value}")
        lo, hi = self.bin_range
        if not lo < hi:
            raise InvalidConfig("bin_range must be a nonempty interval")
        for name in ("class1_mean_range", "class2_secondary_mean_range"):
            a, b = getattr(self, name)
            if not (a <= b and lo <= a and b <= hi):
                raise InvalidConfig(f"{name} must be an interval inside bin_range")
        w = self.mixture_weights
        if len(w) != 2 or min(w) <= 0 or abs(sum(w) - 1.0) > 1e-12:
            raise InvalidConfig("mixture_weights must be two positive numbers summing to 1")
        if not self.sigma > 0:
            raise InvalidConfig("sigma must be positive")

    @property
    def bin_width(self) -> float:
        return (self.bin_range[1] - self.bin_range[0]) / self.bins

    def as_dict(self) -> dict:
        d = asdict(self)
        d["generator"] = "numpy.random.default_rng (PCG64)"
        return d


@dataclass
class LabeledDataset:
    cloud: PointCloud
    labels: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def histograms(self) -> np.ndarray:
        return self.cloud.points


def bin_values(values, bins: int, value_range) -> np.ndarray:
    """Bin counts on a uniform grid; bins are ``[lo, hi)`` except the last,
    which is closed, and out-of-range values go to the end bins."""
    lo, hi = float(value_range[0]), float(value_range[1])
    values = np.asarray(values, dtype=float)
    idx = np.floor((values - lo) / (hi - lo) * bins)
    idx = np.clip(idx, 0, bins - 1).astype(int)
    return np.bincount(idx, minlength=bins).astype(float)


def gen_synthetic(config: SynthConfig = SynthConfig()) -> LabeledDataset:
    rng = np.random.default_rng(config.rng_seed)
    n = config.per_class
    s = config.samples_per_histogram
    hists = []
    for _ in range(n):
        mean = rng.uniform(*config.class1_mean_range)
        samples = rng.normal(mean, config.sigma, size=s)
        hists.append(bin_values(samples, config.bins, config.bin_range) / s)
    for _ in range(n):
        main = rng.uniform(*config.class1_mean_range)
        secondary = rng.uniform(*config.class2_secondary_mean_range)
        pick_secondary = rng.random(s) < config.mixture_weights[1]
        means = np.where(pick_secondary, secondary, main)
        samples = rng.normal(means, config.sigma)
        hists.append(bin_values(samples, config.bins, config.bin_range) / s)
    labels = np.repeat([0, 1], n)
    points = np.array(hists)
    return LabeledDataset(PointCloud(points, labels), labels, config.as_dict())


def series_to_histogram(series, bins: int, value_range) -> np.ndarray:
    series = np.asarray(series, dtype=float).ravel()
    if series.size == 0:
        raise EmptySeries("series has no values")
    if int(bins) != bins or bins < 1:
        raise InvalidConfig("bins must be a positive integer")
    lo, hi = value_range
    if not lo < hi:
        raise EmptyRange(f"empty range [{lo}, {hi}]")
    counts = bin_values(series, int(bins), (lo, hi))
    return make_histogram(counts / series.size, renormalize=False)


def read_series(path) -> np.ndarray:
    """Read one real per line; blank lines are skipped."""
    values = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                values.append(float(line))
            except ValueError:
                raise ParseError(f"{path}:{lineno}: not a number: {line!r}") from None
    if not values:
        raise EmptySeries(f"{path} holds no values")
    return np.array(values)


def ingest_directory(directory, bins: int, value_range) -> Tuple[np.ndarray, List[str]]:
    """Histogram every regular file of ``directory`` (sorted by name)."""
    directory = Path(directory)
    names = sorted(
        p.name for p in directory.iterdir() if p.is_file() and not p.name.startswith(".")
    )
    if not names:
        raise EmptySeries(f"no series files in {directory}")
    hists = [
        series_to_histogram(read_series(directory / name), bins, value_range) for name in names
    ]
    return np.array(hists), names
