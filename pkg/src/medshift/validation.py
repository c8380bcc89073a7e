"""Input validation helpers shared by the estimators."""

import numbers

import numpy as np
from sklearn.utils import check_array

from .core import check_histograms, make_histogram
from .exceptions import InvalidConfig


def check_histogram_array(X, renormalize=False):
    """Validate ``X`` as an (n_samples, n_bins) array of histograms.

    With ``renormalize=True`` each row is divided by its total first.
    """
    X = check_array(X, dtype=np.float64, ensure_2d=True)
    if renormalize:
        X = np.array([make_histogram(row, renormalize=True) for row in X])
    return check_histograms(X)


def check_positive(value, name):
    if not isinstance(value, numbers.Real) or not np.isfinite(value) or value <= 0:
        raise InvalidConfig(f"{name} must be a positive real, got {value!r}")
    return float(value)


def check_n_features(estimator, X):
    if X.shape[1] != estimator.n_features_in_:
        raise ValueError(
            f"X has {X.shape[1]} features, but {type(estimator).__name__} "
            f"was fitted with {estimator.n_features_in_}"
        )
