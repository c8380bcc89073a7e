"""scikit-learn compatible estimators.

All Wasserstein estimators take a ``bin_width`` that sets the ground
distance between adjacent bins. Bandwidths, radii and ``eps`` are given in
those support units; with the default ``bin_width=1.0`` they are in bins.
For histograms of 100 bins over [0, 1], pass ``bin_width=0.01``.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils import check_array, check_random_state
from sklearn.utils.validation import check_is_fitted

from .clustering import (
    MergePolicy,
    cluster_dataset,
    dbscan_wasserstein,
    kmeans_wasserstein,
)
from .core import DistanceKind, cumul, diff, pairwise_distances
from .exceptions import EmptyActiveSet
from .modeseek import ENGINES, EngineConfig
from .validation import check_histogram_array, check_n_features, check_positive


class _FlatShiftMixin(ClusterMixin, BaseEstimator):
    _engine = None
    _distance = None

    def _scale(self):
        return 1.0

    def _validate(self, X):
        return check_array(X, dtype=np.float64)

    def _engine_config(self):
        h = check_positive(self.bandwidth, "bandwidth")
        return EngineConfig.create(
            h / self._scale(), self._distance, max_iterations=self.max_iter
        )

    def fit(self, X, y=None):
        X = self._validate(X)
        config = self._engine_config()
        policy = None
        if self.merge_radius is not None:
            radius = check_positive(self.merge_radius, "merge_radius")
            policy = MergePolicy(radius / self._scale())
        result = cluster_dataset(X, self._engine, config, policy, n_jobs=self.n_jobs)
        self.result_ = result
        self.labels_ = result.labels
        self.cluster_centers_ = result.modes
        self.n_iter_ = result.diagnostics["max_steps"]
        self.n_features_in_ = X.shape[1]
        self._train = X
        return self

    def predict(self, X):
        """Run the engine from each row of ``X`` over the training data and
        return the cluster whose representative is nearest to the endpoint."""
        check_is_fitted(self, "labels_")
        X = self._validate(X)
        check_n_features(self, X)
        config = self._engine_config()
        run = ENGINES[config.distance]
        ends = []
        for x in X:
            try:
                ends.append(run(x, self._train, config).mode)
            except EmptyActiveSet:
                ends.append(x)
        D = pairwise_distances(self._distance, np.array(ends), self.cluster_centers_)
        return np.argmin(D, axis=1)


class WassersteinMedianShift(_FlatShiftMixin):
    """Wasserstein median shift clustering of histograms.

    Parameters
    ----------
    bandwidth : float
        Points enter the active set when their 1-D Wasserstein distance to
        the iterate is strictly below ``bandwidth`` (support units).
    bin_width : float, default=1.0
        Distance between adjacent bin centers.
    merge_radius : float, optional
        Endpoints closer than this are merged. Defaults to ``bandwidth / 2``.
    max_iter : int, default=1000
        Safety cap on iterations per seed.
    n_jobs : int, optional
        Number of threads for the per-seed runs.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    cluster_centers_ : ndarray of shape (n_clusters, n_bins)
        Representative histogram of each cluster.
    result_ : ClusterResult
        Full output including per-seed trajectories.
    """

    _engine = "wms"
    _distance = DistanceKind.WASSERSTEIN1

    def __init__(self, bandwidth=1.0, bin_width=1.0, merge_radius=None, max_iter=1000, n_jobs=None):
        self.bandwidth = bandwidth
        self.bin_width = bin_width
        self.merge_radius = merge_radius
        self.max_iter = max_iter
        self.n_jobs = n_jobs

    def _scale(self):
        return check_positive(self.bin_width, "bin_width")

    def _validate(self, X):
        return check_histogram_array(X)


class MedianShift(_FlatShiftMixin):
    """Median shift: flat-weight mean shift under the L1 distance."""

    _engine = "median-shift"
    _distance = DistanceKind.L1

    def __init__(self, bandwidth=1.0, merge_radius=None, max_iter=1000, n_jobs=None):
        self.bandwidth = bandwidth
        self.merge_radius = merge_radius
        self.max_iter = max_iter
        self.n_jobs = n_jobs


class TriangularMeanShift(_FlatShiftMixin):
    """Classical mean shift with a triangular profile.

    A point is active when its squared Euclidean distance to the iterate is
    below ``bandwidth``; the next iterate is the mean of the active points.
    """

    _engine = "mean-shift"
    _distance = DistanceKind.SQUARED_EUCLIDEAN

    def __init__(self, bandwidth=1.0, merge_radius=None, max_iter=1000, tol=1e-8, n_jobs=None):
        self.bandwidth = bandwidth
        self.merge_radius = merge_radius
        self.max_iter = max_iter
        self.tol = tol
        self.n_jobs = n_jobs

    def _engine_config(self):
        h = check_positive(self.bandwidth, "bandwidth")
        return EngineConfig.create(
            h, self._distance, max_iterations=self.max_iter, mean_shift_epsilon=self.tol
        )


class WassersteinKMeans(ClusterMixin, TransformerMixin, BaseEstimator):
    """K-means on histograms under the 1-D Wasserstein distance.

    Centroids are Wasserstein barycenters: the diff of the coordinate-wise
    median of the members' cumulative histograms.
    """

    def __init__(self, n_clusters=2, bin_width=1.0, max_iter=300, random_state=None):
        self.n_clusters = n_clusters
        self.bin_width = bin_width
        self.max_iter = max_iter
        self.random_state = random_state

    def fit(self, X, y=None):
        X = check_histogram_array(X)
        w = check_positive(self.bin_width, "bin_width")
        seed = self.random_state
        if not isinstance(seed, (int, np.integer)):
            seed = int(check_random_state(seed).randint(np.iinfo(np.int32).max))
        result = kmeans_wasserstein(X, self.n_clusters, seed, self.max_iter)
        self.result_ = result
        self.labels_ = result.labels
        self.cluster_centers_ = result.modes
        self.inertia_ = result.diagnostics["inertia"] * w
        self.n_iter_ = result.diagnostics["n_iter"]
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        """Wasserstein distance from each row of ``X`` to each centroid."""
        check_is_fitted(self, "cluster_centers_")
        X = check_histogram_array(X)
        check_n_features(self, X)
        return pairwise_distances(DistanceKind.WASSERSTEIN1, X, self.cluster_centers_) * self.bin_width

    def predict(self, X):
        return np.argmin(self.transform(X), axis=1)


class WassersteinDBSCAN(ClusterMixin, BaseEstimator):
    """DBSCAN on histograms with an inclusive Wasserstein ``eps`` neighborhood.

    Noise points get the label -1.
    """

    def __init__(self, eps=1.0, min_samples=5, bin_width=1.0):
        self.eps = eps
        self.min_samples = min_samples
        self.bin_width = bin_width

    def fit(self, X, y=None):
        X = check_histogram_array(X)
        eps = check_positive(self.eps, "eps") / check_positive(self.bin_width, "bin_width")
        result = dbscan_wasserstein(X, eps, self.min_samples)
        self.result_ = result
        self.labels_ = result.labels
        self.core_sample_indices_ = np.array(result.diagnostics["core_sample_indices"], dtype=int)
        self.components_ = X[self.core_sample_indices_]
        self.n_features_in_ = X.shape[1]
        return self


class CumulativeHistogramTransformer(TransformerMixin, BaseEstimator):
    """Map histograms to cumulative histograms and back.

    Under this map the 1-D Wasserstein distance becomes the L1 distance, so
    any L1 method can be applied downstream.
    """

    def fit(self, X, y=None):
        X = check_histogram_array(X)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "n_features_in_")
        X = check_histogram_array(X)
        check_n_features(self, X)
        return cumul(X)

    def inverse_transform(self, Z):
        check_is_fitted(self, "n_features_in_")
        Z = check_array(Z, dtype=np.float64)
        return diff(Z)
