"""Flat-weight mean shift variants for clustering, with a focus on histograms.

The main entry points are the scikit-learn style estimators
(:class:`WassersteinMedianShift`, :class:`MedianShift`,
:class:`TriangularMeanShift`, :class:`WassersteinKMeans`,
:class:`WassersteinDBSCAN`) and the lower-level engines in
:mod:`medshift.modeseek`.
"""

__version__ = "0.1.0"

from .core import (
    DistanceKind,
    KernelSpec,
    PointCloud,
    bound_at,
    coordinate_median,
    cumul,
    density_at,
    diff,
    distance,
    make_histogram,
    wasserstein1,
)
from .modeseek import (
    EngineConfig,
    ModeTrajectory,
    Termination,
    active_set,
    flat_step,
    run_mean_shift,
    run_median_shift,
    run_wms,
)
from .clustering import (
    ClusterResult,
    MergePolicy,
    cluster_dataset,
    dbscan_wasserstein,
    kmeans_wasserstein,
    merge_modes,
)
from .evaluation import adjusted_rand_index, contingency
from .datagen import SynthConfig, gen_synthetic, series_to_histogram
from .estimators import (
    CumulativeHistogramTransformer,
    MedianShift,
    TriangularMeanShift,
    WassersteinDBSCAN,
    WassersteinKMeans,
    WassersteinMedianShift,
)
