"""Classical (Torgerson) multidimensional scaling.

Object MDS embeds the original distance matrix; profile MDS embeds the
matrix of pairwise profile-metric values.  Both double-center the squared
distances and keep the top eigenpairs; negative eigenvalues are reported
but contribute zero coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .metrics import check_distance_matrix
from .profiles import ProfileSet, profile_distance_matrix

__all__ = ["MDSEmbedding", "classical_mds", "profile_mds"]


@dataclass(frozen=True)
class MDSEmbedding:
    """Centered coordinates with their eigenvalues, both in descending order."""

    coordinates: np.ndarray  # (n, q)
    eigenvalues: np.ndarray  # (q,)
    q: int


def classical_mds(d, q: int) -> MDSEmbedding:
    """Torgerson scaling of a distance matrix to ``q`` dimensions.

    Coordinates are eigenvectors of the double-centered squared-distance
    matrix scaled by the square roots of their (clipped) eigenvalues; each
    column's largest-magnitude entry is made nonnegative so plots are
    reproducible up to nothing at all.
    """
    d = check_distance_matrix(d)
    n = d.shape[0]
    if not 1 <= q <= n - 1:
        raise ValueError(f"embedding dimension must be in [1, {n - 1}], got {q}")
    sq = d * d
    row = sq.mean(axis=1, keepdims=True)
    col = sq.mean(axis=0, keepdims=True)
    b = -0.5 * (sq - row - col + sq.mean())
    b = 0.5 * (b + b.T)
    evals, evecs = np.linalg.eigh(b)
    order = np.argsort(evals)[::-1][:q]
    evals = evals[order]
    coords = evecs[:, order] * np.sqrt(np.maximum(evals, 0.0))
    # sign convention: dominant entry of each column is nonnegative
    for j in range(coords.shape[1]):
        col_j = coords[:, j]
        if col_j.any() and col_j[np.argmax(np.abs(col_j))] < 0:
            coords[:, j] = -col_j
    return MDSEmbedding(coordinates=coords, eigenvalues=evals, q=q)


def profile_mds(p: ProfileSet, q: int) -> MDSEmbedding:
    """Classical MDS of the pairwise profile-metric matrix."""
    return classical_mds(profile_distance_matrix(p), q)
