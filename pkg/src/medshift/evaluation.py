"""Adjusted Rand Index and the contingency table it is computed from."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import LengthMismatch, TooFewPoints


@dataclass(frozen=True)
class ContingencyTable:
    """``counts[u, v]`` = number of points with predicted cluster ``u`` and
    true class ``v``. Label ids are mapped to rows/columns in order of first
    occurrence; ``pred_labels`` and ``true_labels`` keep the original ids."""

    counts: np.ndarray
    pred_labels: tuple
    true_labels: tuple

    @property
    def row_sums(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def col_sums(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())


def _dense(labels):
    ids = {}
    codes = [ids.setdefault(lab, len(ids)) for lab in labels]
    return np.array(codes, dtype=int), tuple(ids)


def _as_labels(labels):
    arr = np.asarray(labels)
    if arr.ndim != 1:
        raise LengthMismatch("labels must be one-dimensional")
    return arr.tolist()


def contingency(pred, truth) -> ContingencyTable:
    pred = _as_labels(pred)
    truth = _as_labels(truth)
    if len(pred) != len(truth):
        raise LengthMismatch(f"{len(pred)} predicted labels vs {len(truth)} true labels")
    if len(pred) < 2:
        raise TooFewPoints("at least two points are needed")
    p, p_ids = _dense(pred)
    t, t_ids = _dense(truth)
    counts = np.zeros((len(p_ids), len(t_ids)), dtype=np.int64)
    np.add.at(counts, (p, t), 1)
    return ContingencyTable(counts, p_ids, t_ids)


def _pairs(values) -> int:
    return sum(int(v) * (int(v) - 1) // 2 for v in np.ravel(values))


def adjusted_rand_index(pred, truth) -> float:
    """Hubert-Arabie adjusted Rand index of two labelings.

    The noise label ``-1`` counts as an ordinary cluster. When the adjustment
    denominator vanishes, which happens only when both labelings are the same
    trivial partition (one cluster, or all singletons), the score is 1.0.

    Pair counts are kept as exact integers and the ratio is formed with
    rationals, so the result is exactly symmetric and exactly 1.0 for
    identical partitions.
    """
    table = contingency(pred, truth)
    index = _pairs(table.counts)
    a = _pairs(table.row_sums)
    b = _pairs(table.col_sums)
    total = table.n * (table.n - 1) // 2
    expected = Fraction(a * b, total)
    denom = Fraction(a + b, 2) - expected
    if denom == 0:
        return 1.0
    return float((index - expected) / denom)
