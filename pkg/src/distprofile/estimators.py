"""Scikit-learn style estimators wrapping the functional core.

These exist so the profile machinery composes with pipelines and model
selection tooling; everything they compute is also reachable through the
plain functions in the sibling modules.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .mds import classical_mds
from .metrics import MetricSpec, check_distance_matrix, cross_distance_matrix, distance_matrix, validate_objects
from .profiles import build_profiles, out_of_sample_profile, profile_distance_matrix
from .ranks import quantile_groups, rank_all, transport_median, transport_rank

__all__ = ["DistanceProfileRanker", "ClassicalMDS", "ProfileMDS"]


def _as_spec(metric: Union[str, MetricSpec]) -> MetricSpec:
    return metric if isinstance(metric, MetricSpec) else MetricSpec(metric)


class DistanceProfileRanker(BaseEstimator):
    """Center-outward ranking of metric-space objects by transport rank.

    Parameters
    ----------
    metric : str or MetricSpec, default="euclidean"
        How to measure distances between objects.  With ``"precomputed"``,
        ``fit`` expects a distance matrix and ``transform`` expects rows of
        cross-distances to the fitted sample.
    bins : int, default=10
        Number of rank bins; bin 1 is the most central.

    Attributes
    ----------
    ranks_ : ndarray of shape (n,)
        Transport rank of each fitted object, strictly inside (0, 1).
    median_indices_ : ndarray
        Indices attaining the maximal rank.
    labels_ : ndarray of shape (n,)
        Rank-bin labels in ``1..bins``.
    thresholds_ : ndarray of shape (bins - 1,)
        Rank quantiles separating the bins.
    """

    def __init__(self, metric: Union[str, MetricSpec] = "euclidean", bins: int = 10):
        self.metric = metric
        self.bins = bins

    def fit(self, X, y=None):
        spec = _as_spec(self.metric)
        if spec.kind == "precomputed":
            self.distance_matrix_ = check_distance_matrix(X)
            self._sample = None
        else:
            self._sample = validate_objects(spec, X)
            self.distance_matrix_ = distance_matrix(spec, self._sample)
        self.profiles_ = build_profiles(self.distance_matrix_, mode="with_self")
        self.ranks_ = rank_all(self.profiles_)
        self.median_indices_ = transport_median(self.ranks_)
        self.labels_, self.thresholds_ = quantile_groups(self.ranks_, self.bins)
        return self

    def _check_fitted(self):
        if not hasattr(self, "profiles_"):
            raise NotFittedError("this DistanceProfileRanker is not fitted yet")

    def fit_transform(self, X, y=None):
        return self.fit(X).ranks_.reshape(-1, 1)

    def _cross_rows(self, X) -> np.ndarray:
        spec = _as_spec(self.metric)
        if spec.kind == "precomputed":
            rows = np.atleast_2d(np.asarray(X, dtype=float))
            if rows.shape[1] != self.distance_matrix_.shape[0]:
                raise ValueError(
                    f"expected cross-distance rows of length "
                    f"{self.distance_matrix_.shape[0]}, got {rows.shape[1]}"
                )
            return rows
        queries = validate_objects(spec, np.asarray(X))
        return cross_distance_matrix(spec, queries, self._sample)

    def score_samples(self, X) -> np.ndarray:
        """Transport ranks of new query objects against the fitted sample."""
        self._check_fitted()
        rows = self._cross_rows(X)
        return np.array(
            [transport_rank(out_of_sample_profile(row), self.profiles_) for row in rows]
        )

    def transform(self, X) -> np.ndarray:
        return self.score_samples(X).reshape(-1, 1)

    def predict(self, X) -> np.ndarray:
        """Rank-bin labels (1 = most central) for new query objects."""
        ranks = self.score_samples(X)
        below = (self.thresholds_[None, :] < ranks[:, None]).sum(axis=1)
        return (self.bins - below).astype(int)


class ClassicalMDS(BaseEstimator):
    """Torgerson scaling of object distances to ``n_components`` dimensions.

    With ``metric="precomputed"`` (the default), ``fit`` takes a distance
    matrix; otherwise raw objects are accepted and measured first.
    """

    def __init__(
        self,
        n_components: int = 2,
        metric: Union[str, MetricSpec] = "precomputed",
    ):
        self.n_components = n_components
        self.metric = metric

    def _distances(self, X) -> np.ndarray:
        spec = _as_spec(self.metric)
        if spec.kind == "precomputed":
            return check_distance_matrix(X)
        return distance_matrix(spec, validate_objects(spec, X))

    def fit(self, X, y=None):
        emb = classical_mds(self._distances(X), self.n_components)
        self.embedding_ = emb.coordinates
        self.eigenvalues_ = emb.eigenvalues
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).embedding_


class ProfileMDS(BaseEstimator):
    """Classical MDS of the pairwise profile-metric matrix.

    Objects that sit differently within the sample separate here even when
    the raw metric cannot embed well; coinciding profiles collapse to one
    point regardless of their original distance.
    """

    def __init__(
        self,
        n_components: int = 2,
        metric: Union[str, MetricSpec] = "precomputed",
        mode: str = "with_self",
    ):
        self.n_components = n_components
        self.metric = metric
        self.mode = mode

    def fit(self, X, y=None):
        spec = _as_spec(self.metric)
        if spec.kind == "precomputed":
            d = check_distance_matrix(X)
        else:
            d = distance_matrix(spec, validate_objects(spec, X))
        profiles = build_profiles(d, mode=self.mode)
        self.profile_distances_ = profile_distance_matrix(profiles)
        emb = classical_mds(self.profile_distances_, self.n_components)
        self.embedding_ = emb.coordinates
        self.eigenvalues_ = emb.eigenvalues
        return self

    def fit_transform(self, X, y=None) -> np.ndarray:
        return self.fit(X).embedding_
