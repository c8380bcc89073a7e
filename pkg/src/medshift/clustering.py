"""Clustering drivers built on the mode-seeking engines, plus the Wasserstein
variants of K-means and DBSCAN.

A mode-seeking clustering seeds one run at every data point. Runs whose
stationary endpoints are linked by a chain of distances below the merge
radius form one cluster.
"""

from __future__ import annotations

import enum
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from .core import (
    DistanceKind,
    as_cloud,
    check_histograms,
    coordinate_median,
    cumul,
    diff,
    pairwise_distances,
    _coerce_kind,
)
from .exceptions import DegenerateInit, EmptyActiveSet, EngineError, InvalidConfig, KTooLarge
from .modeseek import ENGINES, EngineConfig, ModeTrajectory, Termination

NOISE = -1


class Algorithm(str, enum.Enum):
    WMS = "wms"
    MEDIAN_SHIFT = "median-shift"
    MEAN_SHIFT = "mean-shift"
    KMWS = "kmws"
    DBSCAN_WS = "dbscan-ws"


_ENGINE_DISTANCE = {
    Algorithm.WMS: DistanceKind.WASSERSTEIN1,
    Algorithm.MEDIAN_SHIFT: DistanceKind.L1,
    Algorithm.MEAN_SHIFT: DistanceKind.SQUARED_EUCLIDEAN,
}


@dataclass(frozen=True)
class MergePolicy:
    merge_radius: float

    def __post_init__(self):
        if not self.merge_radius > 0:
            raise InvalidConfig("merge_radius must be positive")

    @classmethod
    def default_for(cls, config: EngineConfig) -> "MergePolicy":
        return cls(config.bandwidth / 2.0)


@dataclass
class ClusterResult:
    labels: np.ndarray
    modes: np.ndarray
    algorithm: Algorithm
    config: dict
    trajectories: Optional[List[Optional[ModeTrajectory]]] = None
    diagnostics: dict = field(default_factory=dict)

    @property
    def n_clusters(self) -> int:
        return len(self.modes)


def _threshold_components(D: np.ndarray, radius: float) -> np.ndarray:
    """Connected components of the graph ``D < radius``, numbered by the
    smallest member index."""
    n = D.shape[0]
    _, raw = connected_components(csr_matrix(D < radius), directed=False)
    order = {}
    labels = np.empty(n, dtype=int)
    for i, c in enumerate(raw):
        labels[i] = order.setdefault(c, len(order))
    return labels


def merge_modes(modes, kind, policy: MergePolicy):
    """Single-link grouping of modes.

    Returns ``(labels, representatives)``: ``labels[i]`` is the group of
    ``modes[i]`` and groups are numbered by their smallest member index.
    Each representative is the coordinate-wise lower median of its group,
    taken on cumulative histograms for ``WASSERSTEIN1``.
    """
    kind = _coerce_kind(kind)
    modes = np.asarray(modes, dtype=float)
    if modes.ndim == 1:
        modes = modes.reshape(-1, 1)
    if kind is DistanceKind.WASSERSTEIN1:
        space = cumul(check_histograms(modes))
        D = pairwise_distances(DistanceKind.L1, space)
    else:
        space = modes
        D = pairwise_distances(kind, space)
    labels = _threshold_components(D, policy.merge_radius)
    reps = []
    for g in range(labels.max() + 1):
        rep = coordinate_median(space[labels == g])
        reps.append(diff(rep) if kind is DistanceKind.WASSERSTEIN1 else rep)
    return labels, np.array(reps)


def _run_seed(engine, seed, cloud, config):
    try:
        return engine(seed, cloud, config)
    except EmptyActiveSet:
        return None


def cluster_dataset(
    cloud,
    engine,
    config: EngineConfig,
    policy: Optional[MergePolicy] = None,
    keep_trajectories: bool = True,
    n_jobs: Optional[int] = None,
) -> ClusterResult:
    """Seed the engine at every data point, merge endpoints, label points.

    ``engine`` is one of ``"wms"``, ``"median-shift"``, ``"mean-shift"``.
    Seeds whose run fails are labeled with the cluster of the nearest
    successful endpoint; their count is reported in ``diagnostics``.
    """
    algorithm = Algorithm(engine)
    if algorithm not in _ENGINE_DISTANCE:
        raise InvalidConfig(f"{algorithm.value} is not a mode-seeking engine")
    if config.distance is not _ENGINE_DISTANCE[algorithm]:
        raise InvalidConfig(
            f"{algorithm.value} requires distance {_ENGINE_DISTANCE[algorithm].value}"
        )
    cloud = as_cloud(cloud)
    policy = policy or MergePolicy.default_for(config)
    run = ENGINES[config.distance]
    seeds = list(cloud.points)
    if n_jobs and n_jobs > 1:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            trajectories = list(pool.map(lambda s: _run_seed(run, s, cloud, config), seeds))
    else:
        trajectories = [_run_seed(run, s, cloud, config) for s in seeds]

    ok = [i for i, t in enumerate(trajectories) if t is not None]
    if not ok:
        raise EngineError("every seed failed")
    endpoints = np.array([trajectories[i].mode for i in ok])
    group, reps = merge_modes(endpoints, config.distance, policy)

    labels = np.empty(cloud.size, dtype=int)
    labels[ok] = group
    failed = [i for i, t in enumerate(trajectories) if t is None]
    if failed:
        D = pairwise_distances(config.distance, cloud.points[failed], endpoints)
        labels[failed] = group[np.argmin(D, axis=1)]

    terms = [t.terminated for t in trajectories if t is not None]
    diagnostics = {
        "n_failed_seeds": len(failed),
        "n_max_iterations": sum(t is Termination.MAX_ITERATIONS for t in terms),
        "n_empty_active_set": sum(t is Termination.EMPTY_ACTIVE_SET for t in terms),
        "max_steps": max(t.n_steps for t in trajectories if t is not None),
    }
    return ClusterResult(
        labels=labels,
        modes=reps,
        algorithm=algorithm,
        config={**config.as_dict(), "merge_radius": policy.merge_radius},
        trajectories=trajectories if keep_trajectories else None,
        diagnostics=diagnostics,
    )


# --------------------------------------------------------------------------
# Wasserstein K-means


def _kmws_objective(Z, C, assign):
    return float(np.abs(Z - C[assign]).sum())


def kmeans_wasserstein(
    cloud,
    k: int,
    rng_seed: int = 0,
    max_iterations: int = 300,
    max_init_draws: int = 10,
) -> ClusterResult:
    """Lloyd iteration under the 1-D Wasserstein distance.

    Centroids are the diff of the coordinate-wise lower median of their
    members' cumulative histograms, which minimizes the within-cluster W1
    sum. Initial centroids are ``k`` data points drawn without replacement;
    a draw containing two identical histograms is rejected and redrawn.
    """
    cloud = as_cloud(cloud)
    X = check_histograms(cloud.points)
    n = X.shape[0]
    if not 1 <= k <= n:
        raise KTooLarge(f"k={k} must lie in [1, {n}]")
    if max_iterations < 1:
        raise InvalidConfig("max_iterations must be positive")
    Z = cumul(X)
    rng = np.random.default_rng(rng_seed)
    for _ in range(max_init_draws):
        idx = rng.choice(n, size=k, replace=False)
        C = Z[idx].copy()
        if len(np.unique(C, axis=0)) == k:
            break
    else:
        raise DegenerateInit(f"no {k} distinct histograms found in {max_init_draws} draws")

    assign = None
    objective = []
    n_iter = 0
    for n_iter in range(1, max_iterations + 1):
        D = pairwise_distances(DistanceKind.L1, Z, C)
        new_assign = np.argmin(D, axis=1)
        if assign is not None and np.array_equal(new_assign, assign):
            break
        assign = new_assign
        objective.append(_kmws_objective(Z, C, assign))
        for c in range(k):
            members = Z[assign == c]
            if len(members):
                C[c] = coordinate_median(members)
        objective.append(_kmws_objective(Z, C, assign))

    # relabel clusters by first occurrence so ids are canonical
    order = {}
    for c in assign:
        order.setdefault(int(c), len(order))
    labels = np.array([order[int(c)] for c in assign])
    used = sorted(order, key=order.get)
    return ClusterResult(
        labels=labels,
        modes=diff(C[used]),
        algorithm=Algorithm.KMWS,
        config={"k": k, "rng_seed": rng_seed, "max_iterations": max_iterations},
        diagnostics={
            "objective": objective,
            "inertia": objective[-1],
            "n_iter": n_iter,
            "init_indices": idx.tolist(),
        },
    )


# --------------------------------------------------------------------------
# Wasserstein DBSCAN


def dbscan_wasserstein(cloud, eps: float, min_pts: int) -> ClusterResult:
    """DBSCAN with neighborhoods ``{j : W1(x_i, x_j) <= eps}``.

    A point is core when its neighborhood, itself included, holds at least
    ``min_pts`` points. Points are visited in index order; a border point
    reachable from several clusters joins the first one that reaches it.
    Unreachable non-core points are labeled ``-1``.
    """
    if not eps > 0:
        raise InvalidConfig("eps must be positive")
    if min_pts < 1:
        raise InvalidConfig("min_pts must be at least 1")
    cloud = as_cloud(cloud)
    X = check_histograms(cloud.points)
    D = pairwise_distances(DistanceKind.WASSERSTEIN1, X)
    neighbors = [np.flatnonzero(row <= eps) for row in D]
    core = np.array([len(nb) >= min_pts for nb in neighbors])

    n = X.shape[0]
    labels = np.full(n, NOISE, dtype=int)
    visited = np.zeros(n, dtype=bool)
    cluster = 0
    for i in range(n):
        if visited[i] or not core[i]:
            continue
        visited[i] = True
        labels[i] = cluster
        queue = deque(neighbors[i])
        while queue:
            j = queue.popleft()
            if labels[j] == NOISE:
                labels[j] = cluster
            if visited[j]:
                continue
            visited[j] = True
            if core[j]:
                queue.extend(neighbors[j])
        cluster += 1

    Z = cumul(X)
    modes = np.array([diff(coordinate_median(Z[labels == c])) for c in range(cluster)])
    return ClusterResult(
        labels=labels,
        modes=modes.reshape(cluster, X.shape[1]),
        algorithm=Algorithm.DBSCAN_WS,
        config={"eps": eps, "min_pts": min_pts},
        diagnostics={
            "core_sample_indices": np.flatnonzero(core).tolist(),
            "n_noise": int(np.sum(labels == NOISE)),
        },
    )
