"""Modified k-nearest-neighbor prediction over the count distance.

The neighborhood of a query x collects every training element whose
distance to x equals one of the k smallest *distinct* qualifying distance
values.  Under the default ``zero_distance_policy="exclude"`` only nonzero
distances qualify (so exact equivalents of x are skipped); ``"include"``
admits distance zero as the smallest value.  Because many training elements
share a band count, the neighborhood routinely holds more than k elements.

The predicted weight is the mean of the training weights over the
neighborhood.  ``denominator_policy="neighborhood_size"`` (default) divides
by the actual neighborhood size; ``"fixed_k"`` divides by k, which can push
predictions outside the training range when ties inflate the set.  An empty
neighborhood falls back to the global training mean, flagged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .countmetric import CountMetric, stable_mean
from .errors import DomainError, PredictionError

ZERO_DISTANCE_POLICIES = ("exclude", "include")
DENOMINATOR_POLICIES = ("neighborhood_size", "fixed_k")


@dataclass(frozen=True)
class KnnConfig:
    """Tunables for the kNN predictor (the bandwidth h rides with the metric)."""

    k: int = 5
    zero_distance_policy: str = "exclude"
    denominator_policy: str = "neighborhood_size"

    def __post_init__(self):
        if not (isinstance(self.k, int) and self.k >= 1):
            raise ValueError(f"k must be a positive integer, got {self.k!r}")
        if self.zero_distance_policy not in ZERO_DISTANCE_POLICIES:
            raise ValueError(
                f"zero_distance_policy must be one of {ZERO_DISTANCE_POLICIES}"
            )
        if self.denominator_policy not in DENOMINATOR_POLICIES:
            raise ValueError(
                f"denominator_policy must be one of {DENOMINATOR_POLICIES}"
            )


@dataclass(frozen=True)
class KnnNeighborhood:
    elements: tuple
    degenerate: bool  # fewer than k distinct qualifying distance values


@dataclass(frozen=True)
class KnnPrediction:
    value: float
    used_fallback: bool
    degenerate: bool
    neighborhood_size: int


class KnnModel:
    """kNN predictor bound to a metric and a fixed training enumeration."""

    def __init__(self, metric: CountMetric, training: Sequence, config: KnnConfig = KnnConfig()):
        training = tuple(training)
        if not training:
            raise PredictionError("kNN requires a non-empty training set")
        domain = metric.weighting.domain
        for elem in training:
            if elem not in domain:
                raise DomainError(f"training element {elem!r} has no weight")
        self.metric = metric
        self.training = training
        self.config = config
        self._counts = np.array(
            [metric.profile(a).band_count for a in training], dtype=np.int64
        )
        self._weights = np.array(
            [metric.weighting.weights[a] for a in training], dtype=np.float64
        )
        self._fallback = stable_mean(self._weights.tolist())

    def _select(self, x):
        dists = np.abs(self._counts - self.metric.profile(x).band_count)
        if self.config.zero_distance_policy == "exclude":
            qualifying = dists > 0
        else:
            qualifying = np.ones(len(dists), dtype=bool)
        values = np.unique(dists[qualifying])
        chosen = values[: self.config.k]
        degenerate = len(values) < self.config.k
        mask = qualifying & np.isin(dists, chosen)
        return mask, degenerate

    def neighborhood(self, x) -> KnnNeighborhood:
        mask, degenerate = self._select(x)
        elems = tuple(self.training[i] for i in np.flatnonzero(mask))
        return KnnNeighborhood(elements=elems, degenerate=degenerate)

    def predict(self, x) -> KnnPrediction:
        mask, degenerate = self._select(x)
        n = int(mask.sum())
        if n == 0:
            return KnnPrediction(
                value=self._fallback,
                used_fallback=True,
                degenerate=degenerate,
                neighborhood_size=0,
            )
        total = sum(sorted(self._weights[mask].tolist()))
        denom = n if self.config.denominator_policy == "neighborhood_size" else self.config.k
        return KnnPrediction(
            value=total / denom,
            used_fallback=False,
            degenerate=degenerate,
            neighborhood_size=n,
        )


def knn_neighborhood(metric: CountMetric, x, training, config: KnnConfig = KnnConfig()) -> KnnNeighborhood:
    """One-shot neighborhood query (builds a throwaway model)."""
    return KnnModel(metric, training, config).neighborhood(x)


def predict_weight_knn(metric: CountMetric, x, training, config: KnnConfig = KnnConfig()) -> KnnPrediction:
    """One-shot prediction for x from the given training enumeration."""
    return KnnModel(metric, training, config).predict(x)
