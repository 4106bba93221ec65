"""Baseline two-sample tests sharing the permutation harness.

The energy statistic runs on any pooled distance matrix; Hotelling's T^2
needs raw vector samples.  Both are calibrated by the same permutation
scheme as the distance-profile test, so p-values are directly comparable.
"""

from __future__ import annotations

from typing import Optional, Union

import numpy as np

from .twosample import PooledDistances, TestResult, critical_value, p_value

__all__ = [
    "energy_statistic",
    "energy_statistic_permuted",
    "hotelling_statistic",
    "energy_test",
    "hotelling_test",
]


def _energy_from_labels(d: np.ndarray, in_x: np.ndarray, n: int, m: int) -> float:
    z = in_x.astype(float)
    sxx = z @ d @ z
    syy = (1.0 - z) @ d @ (1.0 - z)
    sxy = z @ d @ (1.0 - z)
    return (n * m / (n + m)) * (2.0 * sxy / (n * m) - sxx / (n * n) - syy / (m * m))


def energy_statistic(p: PooledDistances) -> float:
    """Energy two-sample statistic from the pooled distances.

    Within-sample means run over all ordered pairs including the zero
    diagonal; the value is nonnegative for metrics of negative type, which
    is checked in tests rather than assumed here.
    """
    in_x = np.zeros(p.n + p.m, dtype=bool)
    in_x[: p.n] = True
    return _energy_from_labels(p.d, in_x, p.n, p.m)


def energy_statistic_permuted(p: PooledDistances, perm) -> float:
    """Energy statistic after relabeling the pooled sample."""
    perm = np.asarray(perm, dtype=int)
    in_x = np.zeros(p.n + p.m, dtype=bool)
    in_x[perm[: p.n]] = True
    return _energy_from_labels(p.d, in_x, p.n, p.m)


def hotelling_statistic(x, y, ridge: Optional[float] = None) -> float:
    """Two-sample Hotelling's T^2 with a ridge-regularized pooled covariance.

    The default ridge is ``1e-8 * trace(S) / p``, which keeps the statistic
    defined when the dimension reaches or exceeds ``n + m - 2``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    n, m = x.shape[0], y.shape[0]
    if n + m - 2 < 1:
        raise ValueError("Hotelling's T^2 needs n + m - 2 >= 1")
    if x.shape[1] != y.shape[1]:
        raise ValueError("samples must share the vector dimension")
    dim = x.shape[1]
    gap = x.mean(axis=0) - y.mean(axis=0)
    sx = np.cov(x, rowvar=False, ddof=1) if n > 1 else np.zeros((dim, dim))
    sy = np.cov(y, rowvar=False, ddof=1) if m > 1 else np.zeros((dim, dim))
    pooled = ((n - 1) * np.atleast_2d(sx) + (m - 1) * np.atleast_2d(sy)) / (n + m - 2)
    if ridge is None:
        ridge = 1e-8 * float(np.trace(pooled)) / dim
    solved = np.linalg.solve(pooled + ridge * np.eye(dim), gap)
    return float(n * m / (n + m) * gap @ solved)


def _permute_with_substreams(k, seed, big):
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    for j in range(k):
        rng = np.random.default_rng(
            np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (j,))
        )
        yield rng.permutation(big)


def energy_test(
    p: PooledDistances,
    k: int = 1000,
    alpha: float = 0.05,
    seed: Union[int, np.random.SeedSequence, None] = 42,
) -> TestResult:
    """Permutation-calibrated energy test on a pooled distance matrix."""
    stat = energy_statistic(p)
    reps = np.fromiter(
        (energy_statistic_permuted(p, perm) for perm in _permute_with_substreams(k, seed, p.n + p.m)),
        dtype=float,
        count=k,
    )
    return TestResult(
        method="energy",
        statistic=stat,
        replicates=reps,
        p_value=p_value(stat, reps),
        q_alpha_hat=critical_value(reps, alpha),
        alpha=alpha,
        k=k,
        seed=seed if isinstance(seed, int) else None,
        n=p.n,
        m=p.m,
    )


def hotelling_test(
    x,
    y,
    ridge: Optional[float] = None,
    k: int = 1000,
    alpha: float = 0.05,
    seed: Union[int, np.random.SeedSequence, None] = 42,
) -> TestResult:
    """Permutation-calibrated Hotelling's T^2 on raw vector samples.

    Calibration is by pooled relabeling rather than the F reference, so the
    test shares one calibration path with the other methods.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    y = np.atleast_2d(np.asarray(y, dtype=float))
    n, m = x.shape[0], y.shape[0]
    pooled = np.vstack([x, y])
    stat = hotelling_statistic(x, y, ridge=ridge)
    reps = np.empty(k)
    for j, perm in enumerate(_permute_with_substreams(k, seed, n + m)):
        reps[j] = hotelling_statistic(pooled[perm[:n]], pooled[perm[n:]], ridge=ridge)
    return TestResult(
        method="hotelling",
        statistic=stat,
        replicates=reps,
        p_value=p_value(stat, reps),
        q_alpha_hat=critical_value(reps, alpha),
        alpha=alpha,
        k=k,
        seed=seed if isinstance(seed, int) else None,
        n=n,
        m=m,
    )
