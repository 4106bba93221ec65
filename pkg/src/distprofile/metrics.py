"""Object encodings and the metrics between them.

Everything downstream of this module sees only distances: a sample of
encoded objects plus a :class:`MetricSpec` is turned into a symmetric
distance matrix, which is the hub all other statistics consume.

Supported metric kinds and their object encodings:

==================  =====================================================
kind                encoding of one object
==================  =====================================================
euclidean           real vector
wasserstein1d       nondecreasing quantile values (equal-weight atoms)
l2cdf               CDF values on a rectangular grid, flattened row-major
sphere_geodesic     composition: nonnegative vector summing to 1
fisher_rao          density values on a 1-D grid with declared cell widths
frobenius           symmetric nonnegative matrix with zero diagonal
precomputed         no objects; a distance matrix is supplied directly
==================  =====================================================
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy.spatial.distance import pdist, squareform, cdist

__all__ = [
    "METRIC_KINDS",
    "MetricSpec",
    "ObjectSample",
    "ValidationError",
    "distance",
    "distance_matrix",
    "cross_distance_matrix",
    "check_distance_matrix",
    "validate_objects",
]

METRIC_KINDS = (
    "euclidean",
    "wasserstein1d",
    "l2cdf",
    "sphere_geodesic",
    "fisher_rao",
    "frobenius",
    "precomputed",
)

#: tolerance for "sums to one" style encoding checks
_SUM_TOL = 1e-9


class ValidationError(ValueError):
    """Raised when an input violates its encoding's invariants."""


@dataclass(frozen=True)
class MetricSpec:
    """A named metric over a declared object encoding.

    Parameters
    ----------
    kind : str
        One of :data:`METRIC_KINDS`.
    cell_area : float, optional
        Area of one grid cell for ``l2cdf`` (uniform rectangle rule).
    cell_widths : array-like, optional
        Cell widths of the 1-D grid for ``fisher_rao``.
    """

    kind: str
    cell_area: Optional[float] = None
    cell_widths: Optional[np.ndarray] = field(default=None)

    def __post_init__(self):
        if self.kind not in METRIC_KINDS:
            raise ValidationError(
                f"unknown metric kind {self.kind!r}; expected one of {METRIC_KINDS}"
            )
        if self.kind == "l2cdf":
            area = 1.0 if self.cell_area is None else float(self.cell_area)
            if not area > 0:
                raise ValidationError(f"cell_area must be positive, got {area}")
            object.__setattr__(self, "cell_area", area)
        if self.cell_widths is not None:
            w = np.asarray(self.cell_widths, dtype=float)
            if w.ndim != 1 or np.any(w <= 0):
                raise ValidationError("cell_widths must be a 1-D positive array")
            object.__setattr__(self, "cell_widths", w)


@dataclass(frozen=True)
class ObjectSample:
    """A validated sample of encoded objects stacked along the first axis."""

    kind: str
    objects: np.ndarray

    @property
    def n(self) -> int:
        return self.objects.shape[0]

    def __len__(self) -> int:
        return self.n


def _as_2d(objects) -> np.ndarray:
    arr = np.asarray(objects, dtype=float)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def validate_objects(spec: MetricSpec, objects) -> ObjectSample:
    """Validate raw objects against ``spec.kind``'s encoding constraints.

    Raises :class:`ValidationError` naming the offending object (and entry
    where applicable).  Returns an :class:`ObjectSample` wrapping a float
    array of shape ``(n, ...)``.
    """
    kind = spec.kind
    if kind == "precomputed":
        raise ValidationError(
            "precomputed metrics carry no objects; ingest a distance matrix instead"
        )

    if kind == "frobenius":
        arr = np.asarray(objects, dtype=float)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValidationError(
                f"adjacency sample must have shape (n, v, v), got {arr.shape}"
            )
    elif kind == "l2cdf":
        arr = np.asarray(objects, dtype=float)
        if arr.ndim != 3:
            raise ValidationError(
                f"cdf_grid sample must have shape (n, rows, cols), got {arr.shape}"
            )
    else:
        arr = _as_2d(objects)

    if arr.shape[0] < 1:
        raise ValidationError("sample must contain at least one object")
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i = int(bad[0][0])
        raise ValidationError(f"object {i} contains a non-finite value")

    if kind == "wasserstein1d":
        drops = np.diff(arr, axis=1) < 0
        if drops.any():
            i = int(np.argwhere(drops.any(axis=1))[0][0])
            raise ValidationError(f"object {i}: quantile values must be nondecreasing")
    elif kind == "l2cdf":
        if np.any(arr < -1e-12) or np.any(arr > 1 + 1e-12):
            i = int(np.argwhere((arr < -1e-12) | (arr > 1 + 1e-12))[0][0])
            raise ValidationError(f"object {i}: CDF values must lie in [0, 1]")
        drops = (np.diff(arr, axis=1) < -1e-12).any(axis=(1, 2)) | (
            np.diff(arr, axis=2) < -1e-12
        ).any(axis=(1, 2))
        if drops.any():
            i = int(np.argmax(drops))
            raise ValidationError(
                f"object {i}: CDF grid must be monotone along rows and columns"
            )
        corner_gap = np.abs(arr[:, -1, -1] - 1.0)
        if np.any(corner_gap > _SUM_TOL):
            i = int(np.argmax(corner_gap > _SUM_TOL))
            raise ValidationError(
                f"object {i}: terminal CDF value is {arr[i, -1, -1]!r}, expected 1"
            )
    elif kind == "sphere_geodesic":
        if np.any(arr < 0):
            i = int(np.argwhere((arr < 0).any(axis=1))[0][0])
            raise ValidationError(f"object {i}: compositions must be nonnegative")
        sums = arr.sum(axis=1)
        off = np.abs(sums - 1.0) > _SUM_TOL
        if off.any():
            i = int(np.argmax(off))
            raise ValidationError(
                f"object {i}: composition sums to {sums[i]!r}, expected 1"
            )
    elif kind == "fisher_rao":
        if np.any(arr < 0):
            i = int(np.argwhere((arr < 0).any(axis=1))[0][0])
            raise ValidationError(f"object {i}: densities must be nonnegative")
        if spec.cell_widths is not None:
            if spec.cell_widths.shape[0] != arr.shape[1]:
                raise ValidationError(
                    f"cell_widths has length {spec.cell_widths.shape[0]}, "
                    f"objects have {arr.shape[1]} cells"
                )
            masses = arr @ spec.cell_widths
        else:
            masses = arr.sum(axis=1)
        off = np.abs(masses - 1.0) > _SUM_TOL
        if off.any():
            i = int(np.argmax(off))
            raise ValidationError(
                f"object {i}: density integrates to {masses[i]!r}, expected 1"
            )
    elif kind == "frobenius":
        asym = np.abs(arr - arr.transpose(0, 2, 1)).max(axis=(1, 2))
        if np.any(asym > 0):
            i = int(np.argmax(asym > 0))
            raise ValidationError(f"object {i}: adjacency matrix is not symmetric")
        diag = np.abs(np.diagonal(arr, axis1=1, axis2=2)).max(axis=1)
        if np.any(diag > 0):
            i = int(np.argmax(diag > 0))
            raise ValidationError(f"object {i}: adjacency diagonal must be zero")
        if np.any(arr < 0):
            i = int(np.argwhere((arr < 0).any(axis=(1, 2)))[0][0])
            raise ValidationError(f"object {i}: adjacency entries must be nonnegative")

    return ObjectSample(kind=kind, objects=arr)


def _coerce_sample(spec: MetricSpec, sample) -> ObjectSample:
    if isinstance(sample, ObjectSample):
        if sample.kind != spec.kind:
            raise ValidationError(
                f"sample encoded for {sample.kind!r} cannot be used with "
                f"a {spec.kind!r} metric"
            )
        return sample
    return validate_objects(spec, sample)


def _check_same_grid(spec: MetricSpec, a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise ValidationError(
            f"grid mismatch: objects have shapes {a.shape} and {b.shape}"
        )


def _fsum_dot(x: np.ndarray, y: np.ndarray) -> float:
    # exact compensated accumulation; symmetric in its arguments
    return math.fsum((x * y).tolist())


def _sqrt_vector_cos(a: np.ndarray, b: np.ndarray) -> float:
    ra, rb = np.sqrt(a), np.sqrt(b)
    na = math.sqrt(math.fsum((ra * ra).tolist()))
    nb = math.sqrt(math.fsum((rb * rb).tolist()))
    if na == 0.0 or nb == 0.0:
        raise ValidationError("zero-mass object has no square-root representation")
    return _fsum_dot(ra, rb) / (na * nb)


def distance(spec: MetricSpec, a, b) -> float:
    """Distance between two objects under ``spec``.

    Arguments must conform to the encoding of ``spec.kind``; grid encodings
    require identical grids.  Inverse-cosine arguments are clamped to
    ``[-1, 1]`` before evaluation, so the result is always finite.
    """
    if spec.kind == "precomputed":
        raise ValidationError("precomputed metrics cannot evaluate object pairs")
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(~np.isfinite(a)) or np.any(~np.isfinite(b)):
        raise ValidationError("distance inputs must be finite")

    if spec.kind == "euclidean":
        _check_same_grid(spec, a, b)
        d = a - b
        return math.sqrt(math.fsum((d * d).tolist()))
    if spec.kind == "wasserstein1d":
        from .empirical import EmpiricalDistribution, wasserstein2

        _check_same_grid(spec, a, b)
        return wasserstein2(
            EmpiricalDistribution.from_values(a), EmpiricalDistribution.from_values(b)
        )
    if spec.kind == "l2cdf":
        _check_same_grid(spec, a, b)
        area = spec.cell_area if spec.cell_area is not None else 1.0
        d = (a - b).ravel()
        return math.sqrt(area * math.fsum((d * d).tolist()))
    if spec.kind == "sphere_geodesic":
        _check_same_grid(spec, a, b)
        return math.acos(min(1.0, max(-1.0, _sqrt_vector_cos(a, b))))
    if spec.kind == "fisher_rao":
        _check_same_grid(spec, a, b)
        if spec.cell_widths is not None:
            cosv = _sqrt_vector_cos(a * spec.cell_widths, b * spec.cell_widths)
        else:
            cosv = _sqrt_vector_cos(a, b)
        return math.acos(min(1.0, max(-1.0, cosv)))
    if spec.kind == "frobenius":
        _check_same_grid(spec, a, b)
        d = (a - b).ravel()
        return math.sqrt(math.fsum((d * d).tolist()))
    raise ValidationError(f"unsupported metric kind {spec.kind!r}")


def _pairwise_sqrt_sphere(v: np.ndarray, w: Optional[np.ndarray] = None) -> np.ndarray:
    """arccos of normalized square-root inner products, rows = objects."""
    rv = np.sqrt(v)
    rv /= np.linalg.norm(rv, axis=1, keepdims=True)
    rw = rv if w is None else np.sqrt(w) / np.linalg.norm(np.sqrt(w), axis=1, keepdims=True)
    cos = np.clip(rv @ rw.T, -1.0, 1.0)
    return np.arccos(cos)


def _rowwise_norm_matrix(v: np.ndarray, scale: float = 1.0) -> np.ndarray:
    """Upper-triangle norm-of-difference distances, mirrored to be exact."""
    n = v.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        diff = v[i + 1 :] - v[i]
        out[i, i + 1 :] = np.sqrt(scale * np.einsum("ij,ij->i", diff, diff))
    return out + out.T


def _is_binary(v: np.ndarray) -> bool:
    return bool(((v == 0.0) | (v == 1.0)).all())


def _binary_frobenius_matrix(v: np.ndarray, w: Optional[np.ndarray] = None) -> np.ndarray:
    """Exact Frobenius distances for 0/1 matrices via sparse co-occurrence.

    The squared distance is an integer count of differing entries, so the
    result is bit-identical to the dense difference-norm computation.
    """
    from scipy import sparse

    mv = sparse.csr_matrix(v)
    mw = mv if w is None else sparse.csr_matrix(w)
    common = np.asarray((mv @ mw.T).todense(), dtype=float)
    ones_v = np.count_nonzero(v, axis=1).astype(float)
    ones_w = ones_v if w is None else np.count_nonzero(w, axis=1).astype(float)
    sq = ones_v[:, None] + ones_w[None, :] - 2.0 * common
    if w is None:
        np.fill_diagonal(sq, 0.0)
    return np.sqrt(np.maximum(sq, 0.0))


def distance_matrix(spec: MetricSpec, sample) -> np.ndarray:
    """Symmetric matrix of pairwise distances for one sample.

    The result is exactly symmetric with a zero diagonal and deterministic
    regardless of evaluation order.
    """
    sample = _coerce_sample(spec, sample)
    v = sample.objects
    n = sample.n
    if n == 1:
        return np.zeros((1, 1))

    if spec.kind == "euclidean":
        return squareform(pdist(v))
    if spec.kind == "wasserstein1d":
        # rows share one u-grid, so pairwise W2 is an RMS of row differences
        return _rowwise_norm_matrix(v, scale=1.0 / v.shape[1])
    if spec.kind == "l2cdf":
        area = spec.cell_area if spec.cell_area is not None else 1.0
        flat = v.reshape(n, -1)
        return _rowwise_norm_matrix(flat, scale=area)
    if spec.kind == "sphere_geodesic":
        d = _pairwise_sqrt_sphere(v)
        np.fill_diagonal(d, 0.0)
        return np.triu(d, 1) + np.triu(d, 1).T
    if spec.kind == "fisher_rao":
        mass = v * spec.cell_widths if spec.cell_widths is not None else v
        d = _pairwise_sqrt_sphere(mass)
        np.fill_diagonal(d, 0.0)
        return np.triu(d, 1) + np.triu(d, 1).T
    if spec.kind == "frobenius":
        flat = v.reshape(n, -1)
        if _is_binary(flat):
            return _binary_frobenius_matrix(flat)
        return _rowwise_norm_matrix(flat)
    raise ValidationError(f"unsupported metric kind {spec.kind!r}")


def cross_distance_matrix(spec: MetricSpec, x, y) -> np.ndarray:
    """Rectangular matrix with entry ``(i, j) = d(x_i, y_j)``."""
    x = _coerce_sample(spec, x)
    y = _coerce_sample(spec, y)
    vx, vy = x.objects, y.objects
    if vx.shape[1:] != vy.shape[1:]:
        raise ValidationError(
            f"samples have incompatible encodings: {vx.shape[1:]} vs {vy.shape[1:]}"
        )

    if spec.kind == "euclidean":
        return cdist(vx, vy)
    if spec.kind == "wasserstein1d":
        scale = 1.0 / vx.shape[1]
        out = np.empty((x.n, y.n))
        for i in range(x.n):
            diff = vy - vx[i]
            out[i] = np.sqrt(scale * np.einsum("ij,ij->i", diff, diff))
        return out
    if spec.kind == "l2cdf":
        area = spec.cell_area if spec.cell_area is not None else 1.0
        fx, fy = vx.reshape(x.n, -1), vy.reshape(y.n, -1)
        out = np.empty((x.n, y.n))
        for i in range(x.n):
            diff = fy - fx[i]
            out[i] = np.sqrt(area * np.einsum("ij,ij->i", diff, diff))
        return out
    if spec.kind == "sphere_geodesic":
        return _pairwise_sqrt_sphere(vx, vy)
    if spec.kind == "fisher_rao":
        if spec.cell_widths is not None:
            return _pairwise_sqrt_sphere(vx * spec.cell_widths, vy * spec.cell_widths)
        return _pairwise_sqrt_sphere(vx, vy)
    if spec.kind == "frobenius":
        fx, fy = vx.reshape(x.n, -1), vy.reshape(y.n, -1)
        if _is_binary(fx) and _is_binary(fy):
            return _binary_frobenius_matrix(fx, fy)
        out = np.empty((x.n, y.n))
        for i in range(x.n):
            diff = fy - fx[i]
            out[i] = np.sqrt(np.einsum("ij,ij->i", diff, diff))
        return out
    raise ValidationError(f"unsupported metric kind {spec.kind!r}")


def check_distance_matrix(d, sym_tol: float = 0.0) -> np.ndarray:
    """Validate a distance matrix: square, symmetric, zero diagonal, >= 0.

    With ``sym_tol > 0`` an asymmetry up to that tolerance is accepted and
    removed by averaging; the worst offending entry is reported otherwise.
    """
    d = np.asarray(d, dtype=float)
    if d.ndim != 2 or d.shape[0] != d.shape[1]:
        raise ValidationError(f"distance matrix must be square, got shape {d.shape}")
    if np.any(~np.isfinite(d)):
        i, j = np.argwhere(~np.isfinite(d))[0]
        raise ValidationError(f"distance matrix entry ({i}, {j}) is not finite")
    gap = np.abs(d - d.T)
    worst = float(gap.max()) if d.size else 0.0
    if worst > sym_tol:
        i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
        raise ValidationError(
            f"distance matrix is asymmetric: |d[{i},{j}] - d[{j},{i}]| = {worst!r}"
        )
    if worst > 0:
        d = 0.5 * (d + d.T)
    diag = np.abs(np.diagonal(d))
    if np.any(diag > sym_tol):
        i = int(np.argmax(diag))
        raise ValidationError(f"distance matrix diagonal entry {i} is {d[i, i]!r}, expected 0")
    if np.any(d < 0):
        i, j = np.argwhere(d < 0)[0]
        raise ValidationError(f"distance matrix entry ({i}, {j}) is negative")
    if worst > 0 or np.any(diag > 0):
        d = d.copy()
        np.fill_diagonal(d, 0.0)
    return d
