"""Mode-seeking engines with flat weights.

With the triangular profile every point strictly inside the bandwidth weighs
the same, so each step replaces the iterate by a minimizer of the summed
distance to the active points:

* median shift (L1): coordinate-wise lower median,
* Wasserstein median shift: the same median taken on cumulative histograms,
* classical mean shift (squared Euclidean): arithmetic mean.

Because the minimizer depends only on the active set, the flat-weight
iterations become exactly constant after finitely many steps, so
stationarity is tested with exact equality.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, List, Optional

import numpy as np

from .core import (
    DistanceKind,
    KernelSpec,
    as_cloud,
    check_histograms,
    coordinate_median,
    cumul,
    diff,
    distances_to,
    _coerce_kind,
)
from .exceptions import DimensionMismatch, EmptyActiveSet, InvalidConfig, InvalidHistogram


class Termination(str, enum.Enum):
    STATIONARY = "stationary"
    MAX_ITERATIONS = "max_iterations"
    EMPTY_ACTIVE_SET = "empty_active_set"
    TOLERANCE_REACHED = "tolerance_reached"


@dataclass(frozen=True)
class EngineConfig:
    kernel: KernelSpec
    distance: DistanceKind
    max_iterations: int = 1000
    mean_shift_epsilon: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "distance", _coerce_kind(self.distance))
        if int(self.max_iterations) != self.max_iterations or self.max_iterations < 1:
            raise InvalidConfig("max_iterations must be a positive integer")
        if not self.mean_shift_epsilon > 0:
            raise InvalidConfig("mean_shift_epsilon must be positive")

    @classmethod
    def create(cls, bandwidth, distance, **kwargs) -> "EngineConfig":
        return cls(KernelSpec(float(bandwidth)), distance, **kwargs)

    @property
    def bandwidth(self) -> float:
        return self.kernel.bandwidth

    def as_dict(self) -> dict:
        return {
            "bandwidth": self.kernel.bandwidth,
            "profile": self.kernel.profile,
            "distance": self.distance.value,
            "max_iterations": self.max_iterations,
            "mean_shift_epsilon": self.mean_shift_epsilon,
        }


@dataclass
class ModeTrajectory:
    """Audited run of one seed.

    ``iterates[n]``, ``active_sets[n]`` and ``densities[n]`` all describe the
    n-th iterate. For Wasserstein runs ``cumulative[n]`` holds the iterate in
    cumulative-histogram space, where the engine actually works.
    """

    iterates: List[np.ndarray]
    active_sets: List[np.ndarray]
    densities: List[float]
    terminated: Termination
    cumulative: Optional[List[np.ndarray]] = field(default=None)

    @property
    def mode(self) -> np.ndarray:
        return self.iterates[-1]

    @property
    def n_steps(self) -> int:
        return len(self.iterates) - 1


def active_set(x, cloud, config: EngineConfig) -> np.ndarray:
    """Sorted indices ``i`` with ``d(x, x_i) / h < 1``."""
    cloud = as_cloud(cloud)
    u = distances_to(config.distance, x, cloud.points) / config.bandwidth
    return np.flatnonzero(u < 1.0)


def flat_step(x, cloud, config: EngineConfig) -> np.ndarray:
    """One flat-weight step from ``x``: minimizer over the active set."""
    cloud = as_cloud(cloud)
    idx = active_set(x, cloud, config)
    if idx.size == 0:
        raise EmptyActiveSet("no data point within the bandwidth")
    kind = config.distance
    if kind is DistanceKind.L1:
        return coordinate_median(cloud.points[idx])
    if kind is DistanceKind.WASSERSTEIN1:
        return diff(coordinate_median(cumul(cloud.points[idx])))
    return cloud.points[idx].mean(axis=0)


def _iterate(
    seed: np.ndarray,
    points: np.ndarray,
    bandwidth: float,
    dist: Callable[[np.ndarray], np.ndarray],
    step: Callable[[np.ndarray], np.ndarray],
    max_iterations: int,
    epsilon: Optional[float] = None,
):
    def evaluate(x):
        u = dist(x) / bandwidth
        active = np.flatnonzero(u < 1.0)
        return active, float(np.sum(1.0 - u[active]))

    x = seed
    active, dens = evaluate(x)
    if active.size == 0:
        raise EmptyActiveSet("seed has no data point within the bandwidth")
    iterates, actives, densities = [x], [active], [dens]
    terminated = Termination.MAX_ITERATIONS
    for _ in range(max_iterations):
        new = step(points[active])
        active, dens = evaluate(new)
        iterates.append(new)
        actives.append(active)
        densities.append(dens)
        if np.array_equal(new, x):
            terminated = Termination.STATIONARY
            break
        if epsilon is not None and np.linalg.norm(new - x) < epsilon:
            terminated = Termination.TOLERANCE_REACHED
            break
        if active.size == 0:
            terminated = Termination.EMPTY_ACTIVE_SET
            break
        x = new
    return iterates, actives, densities, terminated


def _check_seed(seed, cloud):
    seed = np.asarray(seed, dtype=float).ravel().copy()
    if seed.size != cloud.dimension:
        raise DimensionMismatch(
            f"seed of dimension {seed.size} against cloud of dimension {cloud.dimension}"
        )
    return seed


def _require(config: EngineConfig, kind: DistanceKind, engine: str):
    if config.distance is not kind:
        raise InvalidConfig(f"{engine} requires distance {kind.value}, got {config.distance.value}")


def run_median_shift(seed, cloud, config: EngineConfig) -> ModeTrajectory:
    """Median shift under the L1 distance, iterated to exact stationarity."""
    _require(config, DistanceKind.L1, "median shift")
    cloud = as_cloud(cloud)
    seed = _check_seed(seed, cloud)
    points = cloud.points
    its, acts, dens, term = _iterate(
        seed,
        points,
        config.bandwidth,
        lambda x: np.abs(points - x).sum(axis=1),
        coordinate_median,
        config.max_iterations,
    )
    return ModeTrajectory(its, acts, dens, term)


def run_wms(seed, cloud, config: EngineConfig) -> ModeTrajectory:
    """Wasserstein median shift on histograms.

    Works entirely on cumulative histograms ``z_i = cumul(x_i)``: each step
    takes the coordinate-wise lower median of the ``z_i`` within L1 distance
    ``h`` of the current cumulative iterate. The reported iterates are mapped
    back with :func:`diff`.
    """
    _require(config, DistanceKind.WASSERSTEIN1, "Wasserstein median shift")
    cloud = as_cloud(cloud)
    z = cumul(check_histograms(cloud.points))
    seed = _check_seed(seed, cloud)
    try:
        check_histograms(seed)
    except InvalidHistogram as exc:
        raise InvalidHistogram(f"seed is not a histogram: {exc}") from None
    zs, acts, dens, term = _iterate(
        cumul(seed),
        z,
        config.bandwidth,
        lambda x: np.abs(z - x).sum(axis=1),
        coordinate_median,
        config.max_iterations,
    )
    return ModeTrajectory([diff(v) for v in zs], acts, dens, term, cumulative=zs)


def run_mean_shift(seed, cloud, config: EngineConfig) -> ModeTrajectory:
    """Classical mean shift with the triangular profile on squared Euclidean distance.

    Stops at exact stationarity, when the Euclidean step falls below
    ``config.mean_shift_epsilon``, or after ``config.max_iterations`` steps.
    """
    _require(config, DistanceKind.SQUARED_EUCLIDEAN, "mean shift")
    cloud = as_cloud(cloud)
    seed = _check_seed(seed, cloud)
    points = cloud.points
    its, acts, dens, term = _iterate(
        seed,
        points,
        config.bandwidth,
        lambda x: np.square(points - x).sum(axis=1),
        lambda active: active.mean(axis=0),
        config.max_iterations,
        epsilon=config.mean_shift_epsilon,
    )
    return ModeTrajectory(its, acts, dens, term)


ENGINES = {
    DistanceKind.L1: run_median_shift,
    DistanceKind.WASSERSTEIN1: run_wms,
    DistanceKind.SQUARED_EUCLIDEAN: run_mean_shift,
}
