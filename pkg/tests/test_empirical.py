import math

import numpy as np
import pytest

from distprofile import (
    EmpiricalDistribution,
    StepWeight,
    barycenter,
    integral_sq_cdf_diff,
    integral_weighted_sq_cdf_diff,
    quantile_gap_integral,
    transport_map_eval,
    wasserstein2,
)

from oracles import oracle_quantile_integral, oracle_sq_cdf_integral, oracle_wasserstein2


def dist(*values):
    return EmpiricalDistribution.from_values(values)


class TestConstruction:
    def test_rejects_unsorted_atoms(self):
        with pytest.raises(ValueError, match="sorted"):
            EmpiricalDistribution([1.0, 0.0])

    def test_rejects_bad_weights(self):
        with pytest.raises(ValueError, match="positive"):
            EmpiricalDistribution([0.0, 1.0], [1.0, 0.0])
        with pytest.raises(ValueError, match="sum"):
            EmpiricalDistribution([0.0, 1.0], [0.6, 0.6])

    def test_from_values_sorts(self):
        d = EmpiricalDistribution.from_values([3.0, 0.0, 1.0])
        assert d.atoms.tolist() == [0.0, 1.0, 3.0]


class TestCdf:
    def test_single_step(self):
        d = dist(2.0)
        assert d.cdf(1.0) == 0.0
        assert d.cdf(2.0) == 1.0

    def test_two_thirds(self):
        assert dist(0.0, 1.0, 3.0).cdf(1.0) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_below_min(self):
        assert dist(0.0, 1.0, 3.0).cdf(-0.5) == 0.0


class TestQuantile:
    def test_ceil_index(self):
        # ceil(0.5 * 3) = 2nd atom
        assert dist(0.0, 1.0, 3.0).quantile(0.5) == 1.0

    def test_u_one_is_max(self):
        assert dist(0.0, 1.0, 3.0).quantile(1.0) == 3.0

    def test_point_mass(self):
        assert dist(7.0).quantile(0.123) == 7.0

    def test_domain(self):
        with pytest.raises(ValueError):
            dist(1.0).quantile(0.0)
        with pytest.raises(ValueError):
            dist(1.0).quantile(1.5)

    def test_matches_ceil_convention_everywhere(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(1, 30))
            d = EmpiricalDistribution.from_values(rng.normal(size=n))
            for u in rng.uniform(1e-9, 1.0, size=20):
                k = min(max(int(math.ceil(u * n)), 1), n)
                assert d.quantile(u) == d.atoms[k - 1]

    def test_galois_duality(self):
        rng = np.random.default_rng(5)
        d = EmpiricalDistribution.from_values(rng.normal(size=17))
        for a in d.atoms:
            assert d.quantile(d.cdf(a)) == a


class TestMean:
    def test_examples(self):
        assert dist(0.0, 1.0, 3.0).mean() == pytest.approx(4.0 / 3.0, abs=1e-15)
        assert dist(7.0).mean() == 7.0
        assert dist(-1.0, 1.0).mean() == 0.0

    def test_equals_quantile_integral(self):
        rng = np.random.default_rng(3)
        for _ in range(30):
            n = int(rng.integers(1, 40))
            vals = rng.normal(size=n)
            d = EmpiricalDistribution.from_values(vals)
            zero = EmpiricalDistribution([0.0])
            assert d.mean() == pytest.approx(quantile_gap_integral(d, zero), abs=1e-12)


class TestWasserstein:
    def test_identical_zero(self):
        d = dist(0.3, 1.7, 2.0)
        assert wasserstein2(d, d) == 0.0

    def test_point_masses(self):
        assert wasserstein2(dist(1.5), dist(-2.5)) == 4.0

    def test_sorted_difference_formula(self):
        assert wasserstein2(dist(0.0, 1.0), dist(0.0, 3.0)) == pytest.approx(
            math.sqrt(2.0), abs=1e-15
        )

    def test_against_oracle_unequal_sizes(self):
        rng = np.random.default_rng(7)
        for _ in range(40):
            a = rng.normal(size=int(rng.integers(1, 12)))
            b = rng.normal(size=int(rng.integers(1, 12)))
            got = wasserstein2(
                EmpiricalDistribution.from_values(a), EmpiricalDistribution.from_values(b)
            )
            assert got == pytest.approx(oracle_wasserstein2(a, b), abs=1e-12)

    def test_metric_axioms(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            ds = [
                EmpiricalDistribution.from_values(rng.normal(size=int(rng.integers(1, 8))))
                for _ in range(3)
            ]
            dab = wasserstein2(ds[0], ds[1])
            dba = wasserstein2(ds[1], ds[0])
            assert dab == dba
            assert wasserstein2(ds[0], ds[2]) <= dab + wasserstein2(ds[1], ds[2]) + 1e-12


class TestQuantileGapIntegral:
    def test_against_oracle(self):
        rng = np.random.default_rng(23)
        for _ in range(40):
            a = rng.normal(size=int(rng.integers(1, 10)))
            b = rng.normal(size=int(rng.integers(1, 10)))
            got = quantile_gap_integral(
                EmpiricalDistribution.from_values(a), EmpiricalDistribution.from_values(b)
            )
            want = oracle_quantile_integral(
                sorted(a), [1 / len(a)] * len(a), sorted(b), [1 / len(b)] * len(b)
            )
            assert got == pytest.approx(want, abs=1e-12)


class TestTransportMap:
    def test_identity_at_atoms(self):
        d = dist(0.5, 1.0, 2.0)
        for u in d.atoms:
            assert transport_map_eval(d, d, u) == 0.0

    def test_point_masses(self):
        assert transport_map_eval(dist(1.0), dist(3.0), 1.0) == 2.0

    def test_shift_equivariance(self):
        rng = np.random.default_rng(2)
        vals = np.sort(rng.uniform(0, 4, size=9))
        src = EmpiricalDistribution(vals)
        tgt = EmpiricalDistribution(vals + 2.5)
        for a in vals:
            assert transport_map_eval(src, tgt, a) == pytest.approx(2.5, abs=1e-12)

    def test_below_first_atom_uses_smallest_weight(self):
        src = dist(1.0, 2.0)
        tgt = dist(10.0, 20.0)
        # F_src(0.5) = 0, so the target quantile is taken at u = 1/2
        assert transport_map_eval(src, tgt, 0.5) == 10.0 - 0.5

    def test_negative_u_rejected(self):
        with pytest.raises(ValueError):
            transport_map_eval(dist(1.0), dist(2.0), -0.1)


class TestBarycenter:
    def test_single_distribution_grid_sample(self):
        d = dist(0.0, 1.0, 3.0)
        bc = barycenter([d], 6)
        us = (np.arange(1, 7) - 0.5) / 6
        assert bc.atoms.tolist() == [d.quantile(u) for u in us]

    def test_two_point_masses(self):
        bc = barycenter([dist(0.0), dist(2.0)], 4)
        assert np.all(bc.atoms == 1.0)

    def test_pointwise_quantile_mean(self):
        bc = barycenter([dist(0.0, 2.0), dist(1.0, 3.0)], 2)
        assert bc.atoms.tolist() == [0.5, 2.5]

    def test_copies_reproduce_grid_exactly(self):
        d = dist(0.25, 1.5, 2.0, 7.0)
        bc = barycenter([d, d, d, d], 8)
        us = (np.arange(1, 9) - 0.5) / 8
        assert bc.atoms.tolist() == [d.quantile(u) for u in us]

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            barycenter([], 4)


class TestCdfIntegrals:
    def test_identical_zero(self):
        d = dist(0.0, 2.0, 5.0)
        assert integral_sq_cdf_diff(d, d) == 0.0

    def test_point_mass_gap(self):
        assert integral_sq_cdf_diff(dist(0.0), dist(2.0)) == 2.0
        assert integral_sq_cdf_diff(dist(0.0), dist(0.0)) == 0.0

    def test_negative_atoms_rejected(self):
        with pytest.raises(ValueError, match="nonnegative"):
            integral_sq_cdf_diff(dist(-1.0, 2.0), dist(0.0))

    def test_against_oracle(self):
        rng = np.random.default_rng(31)
        for _ in range(40):
            a = rng.uniform(0, 5, size=int(rng.integers(1, 10)))
            b = rng.uniform(0, 5, size=int(rng.integers(1, 10)))
            got = integral_sq_cdf_diff(
                EmpiricalDistribution.from_values(a), EmpiricalDistribution.from_values(b)
            )
            assert got == pytest.approx(oracle_sq_cdf_integral(a, b), abs=1e-12)

    def test_weighted_constant_one_matches_unweighted(self):
        rng = np.random.default_rng(37)
        for _ in range(20):
            a = EmpiricalDistribution.from_values(rng.uniform(0, 3, size=5))
            b = EmpiricalDistribution.from_values(rng.uniform(0, 3, size=7))
            assert integral_weighted_sq_cdf_diff(a, b, StepWeight.constant(1.0)) == (
                integral_sq_cdf_diff(a, b)
            )

    def test_weighted_zero_and_scaling(self):
        a, b = dist(0.0), dist(2.0)
        assert integral_weighted_sq_cdf_diff(a, b, StepWeight.constant(0.0)) == 0.0
        assert integral_weighted_sq_cdf_diff(a, b, StepWeight.constant(2.0)) == 4.0

    def test_weighted_step_profile_against_oracle(self):
        rng = np.random.default_rng(41)
        knots, values = [1.0, 2.5], [0.5, 2.0, 0.0]
        w = StepWeight(knots, values)
        for _ in range(15):
            a = rng.uniform(0, 4, size=6)
            b = rng.uniform(0, 4, size=4)
            got = integral_weighted_sq_cdf_diff(
                EmpiricalDistribution.from_values(a),
                EmpiricalDistribution.from_values(b),
                w,
            )
            want = oracle_sq_cdf_integral(a, b, step_weight=(knots, values))
            assert got == pytest.approx(want, abs=1e-12)

    def test_negative_weight_rejected(self):
        with pytest.raises(ValueError):
            StepWeight([1.0], [1.0, -0.5])


class TestStepWeight:
    def test_integral_to(self):
        w = StepWeight([1.0, 3.0], [2.0, 1.0, 0.5])
        assert w.integral_to(0.5) == pytest.approx(1.0)
        assert w.integral_to(1.0) == pytest.approx(2.0)
        assert w.integral_to(2.0) == pytest.approx(3.0)
        assert w.integral_to(4.0) == pytest.approx(4.5)

    def test_lookup(self):
        w = StepWeight([1.0], [2.0, 3.0])
        assert w(0.0) == 2.0
        assert w(1.0) == 3.0
        assert w(9.0) == 3.0
