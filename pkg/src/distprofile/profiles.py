"""Distance profiles built from distance matrices, and the profile metric.

A distance profile of an object is the empirical distribution of its
distances to the sample; the profile metric compares two objects through
the 2-Wasserstein distance of their profiles, which can vanish even when
the objects themselves differ.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import List

import numpy as np

from .empirical import EmpiricalDistribution, wasserstein2
from .metrics import check_distance_matrix

__all__ = [
    "ProfileSet",
    "build_profiles",
    "out_of_sample_profile",
    "profile_metric",
    "profile_distance_matrix",
]


@dataclass(frozen=True)
class ProfileSet:
    """Per-object distance profiles, one row of sorted atoms per object.

    ``mode`` records whether each profile keeps the zero self-distance
    (``"with_self"``, n atoms) or drops it (``"leave_one_out"``, n-1 atoms).
    """

    atoms: np.ndarray  # shape (n, n) or (n, n-1), rows sorted ascending
    mode: str

    @property
    def n(self) -> int:
        return self.atoms.shape[0]

    @cached_property
    def profiles(self) -> List[EmpiricalDistribution]:
        return [EmpiricalDistribution(row) for row in self.atoms]

    def __len__(self) -> int:
        return self.n


def build_profiles(d, mode: str = "with_self") -> ProfileSet:
    """Read each object's profile off its row of the distance matrix."""
    d = check_distance_matrix(d)
    n = d.shape[0]
    if mode == "with_self":
        atoms = np.sort(d, axis=1)
    elif mode == "leave_one_out":
        if n < 2:
            raise ValueError("leave_one_out profiles need at least two objects")
        mask = ~np.eye(n, dtype=bool)
        atoms = np.sort(d[mask].reshape(n, n - 1), axis=1)
    else:
        raise ValueError(f"unknown profile mode {mode!r}")
    return ProfileSet(atoms=atoms, mode=mode)


def out_of_sample_profile(crossrow) -> EmpiricalDistribution:
    """Equal-weight profile of one object's distances to another sample."""
    row = np.asarray(crossrow, dtype=float)
    if row.ndim != 1 or row.size == 0:
        raise ValueError("cross-distance row must be a nonempty 1-D array")
    if np.any(row < 0):
        raise ValueError("cross-distances must be nonnegative")
    return EmpiricalDistribution.from_values(row)


def profile_metric(p1: EmpiricalDistribution, p2: EmpiricalDistribution) -> float:
    """Wasserstein distance between two distance profiles.

    A pseudo-metric on the object space: it is zero whenever the profiles
    coincide, even for distinct objects.
    """
    return wasserstein2(p1, p2)


def profile_distance_matrix(p: ProfileSet) -> np.ndarray:
    """Symmetric matrix of pairwise profile-metric values."""
    a = p.atoms
    n, k = a.shape
    w = 1.0 / k  # equal-weight rows share the u-grid, so W2 is a row RMS
    out = np.zeros((n, n))
    for i in range(n - 1):
        diff = a[i + 1 :] - a[i]
        out[i, i + 1 :] = np.sqrt(w * np.einsum("ij,ij->i", diff, diff))
    return out + out.T
