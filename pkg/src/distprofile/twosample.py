"""Two-sample testing with distance profiles.

The statistic aggregates, over every pooled object, the integrated squared
gap between its in-sample profile CDF (leave-one-out within its own group)
and its out-of-sample profile CDF (against the other group), scaled by
``nm / (n + m)``.  Calibration is by random permutation of the pooled
sample; replicates are recomputed by index relabeling on the pooled
distance matrix, never by re-measuring distances.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .empirical import StepWeight
from .metrics import MetricSpec, check_distance_matrix, cross_distance_matrix, distance_matrix

__all__ = [
    "PooledDistances",
    "TestResult",
    "pool_samples",
    "dp_statistic",
    "dp_statistic_permuted",
    "permutation_replicates",
    "p_value",
    "critical_value",
    "dw_plugin",
    "distance_profile_test",
]

Weights = Union[None, StepWeight, Sequence[StepWeight]]


@dataclass(frozen=True)
class PooledDistances:
    """Distances over a pooled two-sample arrangement.

    Objects ``0..n-1`` come from the first sample and ``n..n+m-1`` from the
    second; both groups need at least two members so leave-one-out profiles
    are nonempty.
    """

    n: int
    m: int
    d: np.ndarray

    def __post_init__(self):
        d = check_distance_matrix(self.d)
        object.__setattr__(self, "d", d)
        if self.n < 2 or self.m < 2:
            raise ValueError(
                f"both samples need at least two objects, got n={self.n}, m={self.m}"
            )
        if d.shape[0] != self.n + self.m:
            raise ValueError(
                f"pooled matrix has order {d.shape[0]}, expected {self.n + self.m}"
            )


def pool_samples(spec: MetricSpec, x, y) -> PooledDistances:
    """Assemble the pooled distance matrix from two object samples."""
    dxx = distance_matrix(spec, x)
    dyy = distance_matrix(spec, y)
    dxy = cross_distance_matrix(spec, x, y)
    n, m = dxx.shape[0], dyy.shape[0]
    d = np.zeros((n + m, n + m))
    d[:n, :n] = dxx
    d[:n, n:] = dxy
    d[n:, :n] = dxy.T
    d[n:, n:] = dyy
    return PooledDistances(n=n, m=m, d=d)


class _PooledKernel:
    """Row-sorted view of the pooled matrix reused across permutations.

    For every object the off-diagonal distances are sorted once; only the
    group labels of the sorted entries change under a permutation, so each
    replicate costs a cumulative count per row.
    """

    def __init__(self, p: PooledDistances, w: Weights = None):
        n, m, d = p.n, p.m, p.d
        big = n + m
        mask = ~np.eye(big, dtype=bool)
        cols = np.broadcast_to(np.arange(big), (big, big))[mask].reshape(big, big - 1)
        rows = d[mask].reshape(big, big - 1)
        order = np.argsort(rows, axis=1, kind="stable")
        self.vals = np.take_along_axis(rows, order, axis=1)
        self.sorted_idx = np.take_along_axis(cols, order, axis=1)
        self.n, self.m = n, m
        self.seg = self._segment_weights(w)
        # permutation-independent pieces of the expanded square
        pos = np.arange(1, big, dtype=float)[: big - 2]
        self._segpos = self.seg * pos
        self._segpos2 = (self._segpos * pos).sum(axis=1)

    def _segment_weights(self, w: Weights) -> np.ndarray:
        """Integral of the weight profile over each inter-breakpoint segment."""
        gaps = np.diff(self.vals, axis=1)
        if w is None:
            return gaps
        if isinstance(w, StepWeight):
            cum = w.integral_to(self.vals)
            return np.diff(cum, axis=1)
        profiles = list(w)
        if len(profiles) != self.n + self.m:
            raise ValueError(
                f"need one weight profile per pooled object "
                f"({self.n + self.m}), got {len(profiles)}"
            )
        seg = np.empty_like(gaps)
        for i, wi in enumerate(profiles):
            seg[i] = np.diff(wi.integral_to(self.vals[i]))
        return seg

    @property
    def prefactor(self) -> float:
        return self.n * self.m / (self.n + self.m)

    def totals(self, perms: Optional[np.ndarray]) -> np.ndarray:
        """Unscaled discrepancy (the two group averages summed) per permutation.

        ``perms=None`` evaluates the identity labeling only.  The squared
        CDF gap of row i is ``(cx * c1 - pos * c2)**2`` with coefficients
        set by the row's own group, which expands into one permutation
        dependent quadratic and one linear contraction of the prefix
        counts ``cx`` against precomputed segment weights.
        """
        n, m = self.n, self.m
        big = n + m
        if perms is None:
            in_x = np.ones((1, big), dtype=bool)
            in_x[:, n:] = False
        else:
            in_x = np.zeros((perms.shape[0], big), dtype=bool)
            in_x[np.arange(perms.shape[0])[:, None], perms[:, :n]] = True
        sorted_x = in_x[:, self.sorted_idx]  # (r, big, big-1)
        ctype = np.int16 if big < 32000 else np.int64
        cx = sorted_x.cumsum(axis=2, dtype=ctype)[:, :, :-1].astype(np.float64)
        quad = np.einsum("rik,rik,ik->ri", cx, cx, self.seg)
        lin = np.einsum("rik,ik->ri", cx, self._segpos)
        c1 = np.where(in_x, 1.0 / (n - 1) + 1.0 / m, 1.0 / (m - 1) + 1.0 / n)
        c2 = np.where(in_x, 1.0 / m, 1.0 / (m - 1))
        rowint = c1 * c1 * quad - 2.0 * c1 * c2 * lin + c2 * c2 * self._segpos2
        row_scale = np.where(in_x, 1.0 / n, 1.0 / m)
        return (rowint * row_scale).sum(axis=1)


def dp_statistic(p: PooledDistances, w: Weights = None) -> float:
    """Observed distance-profile test statistic (weights default to one)."""
    kernel = _PooledKernel(p, w)
    return float(kernel.prefactor * kernel.totals(None)[0])


def dp_statistic_permuted(p: PooledDistances, w: Weights, perm) -> float:
    """Statistic after relabeling the pooled sample by one permutation."""
    perm = np.asarray(perm, dtype=int)
    kernel = _PooledKernel(p, w)
    return float(kernel.prefactor * kernel.totals(perm[None, :])[0])


def dw_plugin(p: PooledDistances, w: Weights = None) -> float:
    """Plug-in estimate of the population profile discrepancy.

    This is the unscaled statistic: multiplying by ``nm / (n + m)``
    recovers :func:`dp_statistic` exactly.
    """
    return float(_PooledKernel(p, w).totals(None)[0])


_PERM_BATCH = 32


def permutation_replicates(
    p: PooledDistances,
    w: Weights = None,
    k: int = 1000,
    seed: Union[int, np.random.SeedSequence, None] = 42,
) -> np.ndarray:
    """K statistic replicates under uniformly random pooled relabelings.

    Each replicate draws its permutation from its own counter-indexed
    substream of the seed, so the vector is reproducible and independent
    of any batching or scheduling.
    """
    if k < 1:
        raise ValueError(f"need at least one replicate, got k={k}")
    kernel = _PooledKernel(p, w)
    big = p.n + p.m
    if isinstance(seed, np.random.SeedSequence):
        root = seed
    else:
        root = np.random.SeedSequence(seed)
    out = np.empty(k)
    for start in range(0, k, _PERM_BATCH):
        stop = min(start + _PERM_BATCH, k)
        perms = np.empty((stop - start, big), dtype=int)
        for j in range(start, stop):
            rng = np.random.default_rng(
                np.random.SeedSequence(root.entropy, spawn_key=root.spawn_key + (j,))
            )
            perms[j - start] = rng.permutation(big)
        out[start:stop] = kernel.prefactor * kernel.totals(perms)
    return out


def p_value(statistic: float, replicates) -> float:
    """Permutation p-value; the observed statistic counts itself."""
    replicates = np.asarray(replicates, dtype=float)
    k = replicates.size
    if k < 1:
        raise ValueError("p_value needs at least one replicate")
    return (1 + int(np.count_nonzero(replicates >= statistic))) / (k + 1)


def critical_value(replicates, alpha: float) -> float:
    """Estimated critical value: the ceil((1-alpha)K)-th replicate order statistic."""
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha!r}")
    replicates = np.sort(np.asarray(replicates, dtype=float))
    k = replicates.size
    idx = min(max(int(np.ceil((1.0 - alpha) * k)), 1), k)
    return float(replicates[idx - 1])


@dataclass(frozen=True)
class TestResult:
    """Outcome of a permutation-calibrated two-sample test."""

    method: str
    statistic: float
    replicates: np.ndarray
    p_value: float
    q_alpha_hat: float
    alpha: float
    k: int
    seed: Optional[int]
    n: int
    m: int


def distance_profile_test(
    p: PooledDistances,
    w: Weights = None,
    k: int = 1000,
    alpha: float = 0.05,
    seed: Union[int, np.random.SeedSequence, None] = 42,
) -> TestResult:
    """Run the distance-profile test on a pooled distance matrix."""
    stat = dp_statistic(p, w)
    reps = permutation_replicates(p, w, k=k, seed=seed)
    return TestResult(
        method="dp",
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
