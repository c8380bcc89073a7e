"""Histogram arithmetic, distances, the triangular kernel and density evaluation.

Histograms are plain 1-D ``float64`` arrays whose bins are nonnegative and sum
to one. Cumulative histograms are their prefix sums. Bins are assumed to be
evenly spaced with unit spacing, so the 1-D Wasserstein distance between two
histograms is the L1 distance between their cumulative histograms.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np

from .exceptions import (
    DimensionMismatch,
    EmptyInput,
    EmptySet,
    InvalidConfig,
    InvalidHistogram,
    NegativeMass,
    NonMonotone,
    NotNormalized,
    ZeroTotal,
)

NORMALIZATION_TOL = 1e-9
ROUNDTRIP_TOL = 1e-12
NEGATIVE_CLAMP = 1e-12


class DistanceKind(str, enum.Enum):
    L1 = "l1"
    SQUARED_EUCLIDEAN = "sqeuclidean"
    WASSERSTEIN1 = "wasserstein1"


@dataclass(frozen=True)
class KernelSpec:
    """Triangular kernel profile with bandwidth ``bandwidth``.

    ``k(u) = 1 - u`` and ``g(u) = 1`` for ``u < 1``, both zero otherwise,
    where ``u = d(x, x_i) / bandwidth``.
    """

    bandwidth: float
    profile: str = "triangular"

    def __post_init__(self):
        if self.profile != "triangular":
            raise InvalidConfig(f"unsupported kernel profile {self.profile!r}")
        if not np.isfinite(self.bandwidth) or self.bandwidth <= 0:
            raise InvalidConfig(f"bandwidth must be positive, got {self.bandwidth}")

    def profile_value(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < 1.0, 1.0 - u, 0.0)

    def weight(self, u):
        u = np.asarray(u, dtype=float)
        return np.where(u < 1.0, 1.0, 0.0)


@dataclass
class PointCloud:
    """N points in R^q, optionally with integer ground-truth labels."""

    points: np.ndarray
    labels: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1)
        if pts.ndim != 2:
            raise DimensionMismatch("points must form a 2-D array (N, q)")
        if pts.shape[0] == 0:
            raise EmptyInput("point cloud is empty")
        self.points = pts
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (pts.shape[0],):
                raise DimensionMismatch(
                    f"expected {pts.shape[0]} labels, got {labels.shape}"
                )
            self.labels = labels

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dimension(self) -> int:
        return self.points.shape[1]

    def __len__(self):
        return self.size


CloudLike = Union[PointCloud, np.ndarray]


def as_cloud(cloud) -> PointCloud:
    if isinstance(cloud, PointCloud):
        return cloud
    return PointCloud(np.asarray(cloud, dtype=float))


# --------------------------------------------------------------------------
# histograms


def make_histogram(raw, renormalize: bool = False) -> np.ndarray:
    """Validate ``raw`` as a histogram, optionally dividing by its total.

    Negative entries above ``-1e-12`` are treated as rounding dust and clamped
    to zero; anything more negative raises :class:`NegativeMass`.
    """
    m = np.array(raw, dtype=float).ravel()
    if m.size == 0:
        raise EmptyInput("histogram has no bins")
    if not np.all(np.isfinite(m)):
        raise InvalidHistogram("histogram contains non-finite values")
    if np.any(m < -NEGATIVE_CLAMP):
        raise NegativeMass(f"negative bin mass {m.min()!r}")
    m[m < 0] = 0.0
    total = m.sum()
    if renormalize:
        if total == 0:
            raise ZeroTotal("cannot renormalize a histogram with zero total mass")
        return m / total
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalized(f"histogram sums to {total!r}, expected 1")
    return m


def is_histogram(m, tol: float = NORMALIZATION_TOL) -> bool:
    m = np.asarray(m, dtype=float)
    return (
        m.ndim == 1
        and m.size >= 1
        and bool(np.all(m >= 0))
        and abs(m.sum() - 1.0) <= tol
    )


def is_cumulative(z, tol: float = NORMALIZATION_TOL) -> bool:
    z = np.asarray(z, dtype=float)
    return (
        z.ndim == 1
        and z.size >= 1
        and z[0] >= 0
        and bool(np.all(np.diff(z) >= 0))
        and abs(z[-1] - 1.0) <= tol
    )


def check_histograms(X) -> np.ndarray:
    """Return ``X`` as an (N, q) array after checking every row is a histogram."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.ndim != 2 or X.shape[1] == 0:
        raise InvalidHistogram("histograms must form a 2-D array (N, q)")
    if np.any(X < 0):
        raise InvalidHistogram("histogram bins must be nonnegative")
    sums = X.sum(axis=1)
    bad = np.flatnonzero(np.abs(sums - 1.0) > NORMALIZATION_TOL)
    if bad.size:
        raise InvalidHistogram(f"row {bad[0]} sums to {sums[bad[0]]!r}, expected 1")
    return X


def cumul(m) -> np.ndarray:
    """Prefix sums of a histogram (or of each row of a 2-D array)."""
    m = np.asarray(m, dtype=float)
    return np.cumsum(m, axis=-1)


def diff(z) -> np.ndarray:
    """Inverse of :func:`cumul`, with the convention ``z[-1] = 0``."""
    z = np.asarray(z, dtype=float)
    steps = np.diff(z, axis=-1, prepend=0.0)
    if np.any(steps < -ROUNDTRIP_TOL):
        raise NonMonotone("cumulative histogram decreases")
    return steps


# --------------------------------------------------------------------------
# distances


def _coerce_kind(kind) -> DistanceKind:
    if isinstance(kind, DistanceKind):
        return kind
    try:
        return DistanceKind(kind)
    except ValueError:
        raise InvalidConfig(f"unknown distance kind {kind!r}") from None


def distance(kind, a, b) -> float:
    """Distance of kind ``kind`` between two vectors.

    ``WASSERSTEIN1`` requires both arguments to be valid histograms and
    returns ``||cumul(a) - cumul(b)||_1``.
    """
    kind = _coerce_kind(kind)
    a = np.asarray(a, dtype=float).ravel()
    b = np.asarray(b, dtype=float).ravel()
    if a.shape != b.shape:
        raise DimensionMismatch(f"dimensions differ: {a.size} vs {b.size}")
    if kind is DistanceKind.L1:
        return float(np.abs(a - b).sum())
    if kind is DistanceKind.SQUARED_EUCLIDEAN:
        return float(np.square(a - b).sum())
    if not (is_histogram(a) and is_histogram(b)):
        raise InvalidHistogram("Wasserstein distance needs normalized histograms")
    return float(np.abs(cumul(a) - cumul(b)).sum())


def wasserstein1(a, b) -> float:
    return distance(DistanceKind.WASSERSTEIN1, a, b)


def distances_to(kind, x, points) -> np.ndarray:
    """Distances from ``x`` to each row of ``points``.

    For ``WASSERSTEIN1`` both ``x`` and ``points`` are histograms; callers
    that already hold cumulative histograms should use ``L1`` on them.
    """
    kind = _coerce_kind(kind)
    x = np.asarray(x, dtype=float).ravel()
    points = np.asarray(points, dtype=float)
    if points.ndim != 2 or points.shape[1] != x.size:
        raise DimensionMismatch(
            f"point of dimension {x.size} against cloud of shape {points.shape}"
        )
    if kind is DistanceKind.L1:
        return np.abs(points - x).sum(axis=1)
    if kind is DistanceKind.SQUARED_EUCLIDEAN:
        return np.square(points - x).sum(axis=1)
    if not is_histogram(x):
        raise InvalidHistogram("Wasserstein distance needs normalized histograms")
    return np.abs(cumul(check_histograms(points)) - cumul(x)).sum(axis=1)


def pairwise_distances(kind, X, Y=None) -> np.ndarray:
    """Dense (len(X), len(Y)) distance matrix, computed row by row."""
    kind = _coerce_kind(kind)
    X = np.asarray(X, dtype=float)
    Y = X if Y is None else np.asarray(Y, dtype=float)
    if kind is DistanceKind.WASSERSTEIN1:
        X = cumul(check_histograms(X))
        Y = cumul(check_histograms(Y))
        kind = DistanceKind.L1
    return np.stack([distances_to(kind, x, Y) for x in X])


# --------------------------------------------------------------------------
# medians and densities


def coordinate_median(points) -> np.ndarray:
    """Coordinate-wise lower median.

    For P points, each coordinate takes the sorted order statistic at index
    ``(P - 1) // 2``. The output therefore only uses input coordinate values
    and depends only on the set of points, not their order.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.shape[0] == 0:
        raise EmptySet("median of an empty set")
    return np.sort(pts, axis=0)[(pts.shape[0] - 1) // 2].copy()


def _scaled_distances(x, cloud, kind, kernel):
    cloud = as_cloud(cloud)
    return distances_to(kind, x, cloud.points) / kernel.bandwidth


def density_at(x, cloud, kind, kernel: KernelSpec) -> float:
    """Unnormalized kernel density ``sum_i k(d(x, x_i) / h)``."""
    u = _scaled_distances(x, cloud, kind, kernel)
    active = u < 1.0
    return float(np.sum(1.0 - u[active]))


def bound_at(x, anchor, cloud, kind, kernel: KernelSpec) -> float:
    """Minorizer of the density built at ``anchor``, evaluated at ``x``.

    Equals ``f(anchor) - sum_i g(u_anchor_i) * (u_x_i - u_anchor_i)``. It
    touches the density at ``anchor`` and lies below it everywhere.
    """
    u_anchor = _scaled_distances(anchor, cloud, kind, kernel)
    u_x = _scaled_distances(x, cloud, kind, kernel)
    active = u_anchor < 1.0
    f_anchor = float(np.sum(1.0 - u_anchor[active]))
    return f_anchor - float(np.sum(u_x[active] - u_anchor[active]))
