import numpy as np
import pytest

from distprofile import (
    MetricSpec,
    build_profiles,
    classical_mds,
    distance_matrix,
    profile_distance_matrix,
    profile_mds,
)

EUCLID = MetricSpec("euclidean")


class TestClassicalMds:
    def test_collinear_points_one_dimension(self):
        d = distance_matrix(EUCLID, [[0.0], [1.0], [3.0]])
        emb = classical_mds(d, 1)
        rebuilt = distance_matrix(EUCLID, emb.coordinates)
        assert np.abs(rebuilt - d).max() < 1e-8

    def test_zero_matrix(self):
        emb = classical_mds(np.zeros((4, 4)), 2)
        assert np.all(emb.coordinates == 0.0)

    def test_planar_reconstruction(self):
        rng = np.random.default_rng(1)
        pts = rng.normal(size=(12, 2))
        d = distance_matrix(EUCLID, pts)
        emb = classical_mds(d, 2)
        rebuilt = distance_matrix(EUCLID, emb.coordinates)
        assert np.abs(rebuilt - d).max() < 1e-8

    def test_eigenvalues_descending_and_trace_bound(self):
        rng = np.random.default_rng(2)
        pts = rng.normal(size=(10, 4))
        d = distance_matrix(EUCLID, pts)
        emb = classical_mds(d, 4)
        assert np.all(np.diff(emb.eigenvalues) <= 1e-12)
        sq = d * d
        b = -0.5 * (sq - sq.mean(0) - sq.mean(1)[:, None] + sq.mean())
        retained = emb.eigenvalues[emb.eigenvalues > 0].sum()
        assert retained <= np.trace(b) + 1e-8

    def test_columns_centered(self):
        rng = np.random.default_rng(3)
        d = distance_matrix(EUCLID, rng.normal(size=(9, 3)))
        emb = classical_mds(d, 3)
        assert np.abs(emb.coordinates.mean(axis=0)).max() < 1e-10

    def test_sign_convention(self):
        rng = np.random.default_rng(4)
        d = distance_matrix(EUCLID, rng.normal(size=(8, 2)))
        emb = classical_mds(d, 2)
        for j in range(2):
            col = emb.coordinates[:, j]
            assert col[np.argmax(np.abs(col))] >= 0.0

    def test_negative_eigenvalue_zero_column(self):
        # a four-point non-Euclidean configuration (violates the parallelogram law)
        d = np.array(
            [
                [0.0, 1.0, 1.0, 1.0],
                [1.0, 0.0, 1.0, 1.0],
                [1.0, 1.0, 0.0, 1.0],
                [1.0, 1.0, 1.0, 2.0 - 1e-9],
            ]
        )
        d[3, 3] = 0.0
        d = 0.5 * (d + d.T)
        emb = classical_mds(d, 3)
        if emb.eigenvalues[-1] < 0:
            assert np.all(emb.coordinates[:, -1] == 0.0)

    def test_dimension_bounds(self):
        d = np.zeros((3, 3))
        with pytest.raises(ValueError):
            classical_mds(d, 0)
        with pytest.raises(ValueError):
            classical_mds(d, 3)


class TestProfileMds:
    def test_identical_profiles_zero(self):
        p = build_profiles(np.zeros((5, 5)), "with_self")
        emb = profile_mds(p, 2)
        assert np.all(emb.coordinates == 0.0)

    def test_matches_classical_on_profile_distances(self):
        rng = np.random.default_rng(5)
        pts = rng.normal(size=(10, 2))
        p = build_profiles(distance_matrix(EUCLID, pts), "with_self")
        via_profile = profile_mds(p, 2)
        direct = classical_mds(profile_distance_matrix(p), 2)
        assert np.allclose(via_profile.coordinates, direct.coordinates, atol=1e-12)

    def test_line_profile_distances_reembed(self):
        # shifted profiles have Wasserstein gaps equal to the shifts, so the
        # profile distances are exactly collinear
        from distprofile import ProfileSet

        base = np.array([0.0, 1.0, 2.0])
        p = ProfileSet(atoms=np.vstack([base, base + 1.0, base + 3.0]), mode="with_self")
        pd = profile_distance_matrix(p)
        assert pd[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert pd[0, 2] == pytest.approx(3.0, abs=1e-12)
        emb = profile_mds(p, 1)
        rebuilt = distance_matrix(EUCLID, emb.coordinates)
        assert np.abs(rebuilt - pd).max() < 1e-8

    def test_relabeling_equivariance(self):
        rng = np.random.default_rng(6)
        pts = rng.normal(size=(8, 2))
        d = distance_matrix(EUCLID, pts)
        perm = rng.permutation(8)
        base = profile_mds(build_profiles(d, "with_self"), 2)
        moved = profile_mds(build_profiles(d[np.ix_(perm, perm)], "with_self"), 2)
        gram_base = base.coordinates @ base.coordinates.T
        gram_moved = moved.coordinates @ moved.coordinates.T
        assert np.allclose(gram_base[np.ix_(perm, perm)], gram_moved, atol=1e-8)
