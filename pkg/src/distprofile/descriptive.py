"""Location and spread descriptors over a distance matrix.

General metric spaces only admit the sample-restricted (medoid-style)
Fréchet mean; closed-form minimizers are available for Euclidean vectors
and one-dimensional distributions.  Metric variance, covariance and
correlation need no mean at all and work from pairwise distances alone.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .empirical import EmpiricalDistribution, barycenter
from .metrics import MetricSpec, ObjectSample, check_distance_matrix, validate_objects

__all__ = [
    "FrechetSummary",
    "frechet_mean_sample",
    "frechet_mean_exact",
    "metric_variance",
    "metric_covariance",
    "metric_correlation",
]


@dataclass(frozen=True)
class FrechetSummary:
    """Sample-candidate Fréchet mean with the attained variance."""

    mean_index: int
    tie_indices: np.ndarray
    frechet_variance: float
    candidate_values: np.ndarray


def frechet_mean_sample(d) -> FrechetSummary:
    """Fréchet mean restricted to sample candidates (the medoid).

    Candidate j's value is the mean squared distance from the sample to
    object j; the reported variance is the attained minimum and ties are
    kept, with the smallest index chosen as representative.
    """
    d = check_distance_matrix(d)
    values = np.mean(d * d, axis=0)
    best = values.min()
    ties = np.flatnonzero(values == best)
    return FrechetSummary(
        mean_index=int(ties[0]),
        tie_indices=ties,
        frechet_variance=float(best),
        candidate_values=values,
    )


def frechet_mean_exact(sample, spec: MetricSpec) -> np.ndarray:
    """Closed-form Fréchet mean for the spaces that have one.

    Euclidean vectors average coordinatewise; one-dimensional distributions
    average their quantile functions pointwise.
    """
    if not isinstance(sample, ObjectSample):
        sample = validate_objects(spec, sample)
    if spec.kind == "euclidean":
        return sample.objects.mean(axis=0)
    if spec.kind == "wasserstein1d":
        return sample.objects.mean(axis=0)
    raise ValueError(
        f"no closed-form Fréchet mean for metric kind {spec.kind!r}; "
        "use frechet_mean_sample on the distance matrix"
    )


def metric_variance(d) -> float:
    """Half the mean squared distance between independent copies.

    The sample version ``sum d^2 / (2 n (n-1))`` reduces exactly to the
    unbiased sample variance when the objects are real numbers.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    if n < 2:
        raise ValueError("metric variance needs at least two objects")
    return float((d * d).sum() / (2.0 * n * (n - 1)))


def metric_covariance(dx, dy, dxy) -> float:
    """Metric covariance of paired samples in a common metric space.

    ``dxy[i, j]`` holds the distance between the i-th first-sample object
    and the j-th second-sample object; the paired distances sit on its
    diagonal and the independent-copy terms average over ordered pairs
    with distinct indices.
    """
    dx = check_distance_matrix(dx)
    dy = check_distance_matrix(dy)
    dxy = np.asarray(dxy, dtype=float)
    n = dx.shape[0]
    if dy.shape[0] != n or dxy.shape != (n, n):
        raise ValueError(
            f"paired samples must share size: got {dx.shape[0]}, {dy.shape[0]}, {dxy.shape}"
        )
    if n < 2:
        raise ValueError("metric covariance needs at least two pairs")
    sq = dxy * dxy
    off = sq.sum() - np.trace(sq)
    cross = off / (n * (n - 1))  # the d(X, Y') and d(X', Y) averages coincide
    paired = np.trace(sq) / n
    return float(0.25 * (2.0 * cross - 2.0 * paired))


def metric_correlation(dx, dy, dxy) -> float:
    """Metric covariance normalized by the two self-covariances."""
    cov = metric_covariance(dx, dy, dxy)
    vx = metric_variance(dx)
    vy = metric_variance(dy)
    if vx == 0.0 or vy == 0.0:
        raise ValueError("metric correlation undefined for a constant sample")
    return float(cov / np.sqrt(vx * vy))


def profile_frechet_variance(profiles, grid: int = 100) -> float:
    """Fréchet variance of a set of profiles around their Wasserstein barycenter."""
    from .empirical import wasserstein2

    center = barycenter(profiles, grid)
    sq = [wasserstein2(prof, center) ** 2 for prof in profiles]
    return float(np.mean(sq))
