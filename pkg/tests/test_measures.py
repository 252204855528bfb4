import math

import numpy as np
import pytest
from numpy.testing import assert_allclose

import gmminfo as gi
from gmminfo import GmmParams, Permutation

from conftest import random_params


class TestInfoReport:
    def test_value_is_per_rank_sum(self):
        rng = np.random.default_rng(0)
        rep = gi.entropy(random_params(6, rng))
        assert_allclose(rep.value, rep.per_rank.sum(), atol=1e-13)

    def test_json_shape(self):
        rep = gi.entropy(gi.mallows(Permutation.identity(3), 0.5))
        d = rep.to_dict()
        assert set(d) == {"value", "per_rank", "units"}
        assert d["units"] == "nats"
        assert len(d["per_rank"]) == 2

    def test_bits_conversion(self):
        rep = gi.entropy(gi.mallows(Permutation.identity(4), 1.0))
        bits = rep.in_bits()
        assert bits.units == "bits"
        assert_allclose(bits.value, rep.value / math.log(2), atol=1e-13)
        assert_allclose(bits.per_rank * math.log(2), rep.per_rank, atol=1e-13)
        assert bits.in_bits() is bits

    def test_meta_records_relative_center(self):
        rng = np.random.default_rng(1)
        p, q = random_params(5, rng), random_params(5, rng)
        rep = gi.cross_entropy(p, q)
        assert rep.meta["p"] is p and rep.meta["q"] is q
        assert rep.meta["rho"] == gi.relabel(q.sigma, p.sigma)


class TestEntropy:
    def test_uniform_is_log_factorial(self):
        for n in range(2, 11):
            rep = gi.entropy(gi.mallows(Permutation.identity(n), 1.0))
            assert_allclose(rep.value, math.log(math.factorial(n)), atol=1e-12)

    def test_two_item_anchor(self):
        rep = gi.entropy(gi.mallows(Permutation.identity(2), 0.5))
        assert_allclose(rep.value, 0.6365141683, atol=1e-9)

    def test_matches_oracle(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            p = random_params(5, rng)
            assert_allclose(gi.entropy(p).value, gi.oracle_measures(p, p)[0], atol=1e-10)

    def test_center_invariance_is_bitwise(self):
        rng = np.random.default_rng(3)
        theta = rng.uniform(0.2, 1.0, 5)
        reports = [
            gi.entropy(GmmParams(Permutation.random(6, rng), theta)) for _ in range(10)
        ]
        for rep in reports[1:]:
            assert np.array_equal(rep.per_rank, reports[0].per_rank)
            assert rep.value == reports[0].value

    def test_trivial_n1(self):
        rep = gi.entropy(GmmParams(Permutation.of([1]), np.zeros(0)))
        assert rep.value == 0.0 and rep.per_rank.size == 0


class TestCrossEntropy:
    def test_self_equals_entropy(self):
        rng = np.random.default_rng(4)
        for _ in range(5):
            p = random_params(5, rng)
            assert_allclose(
                gi.cross_entropy(p, p).value, gi.entropy(p).value, atol=1e-12
            )

    def test_against_uniform_is_log_factorial(self):
        rng = np.random.default_rng(5)
        p = random_params(6, rng)
        q = gi.mallows(Permutation.random(6, rng), 1.0)
        assert_allclose(
            gi.cross_entropy(p, q).value, math.log(math.factorial(6)), atol=1e-12
        )

    def test_matches_oracle(self):
        rng = np.random.default_rng(6)
        for n in (4, 5):
            for _ in range(5):
                p, q = random_params(n, rng), random_params(n, rng)
                assert_allclose(
                    gi.cross_entropy(p, q).value,
                    gi.oracle_measures(p, q)[1],
                    atol=1e-10,
                )

    def test_gibbs_inequality(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            p, q = random_params(5, rng), random_params(5, rng)
            assert gi.cross_entropy(p, q).value >= gi.entropy(p).value - 1e-12

    def test_size_mismatch(self):
        rng = np.random.default_rng(8)
        with pytest.raises(gi.DimensionMismatchError):
            gi.cross_entropy(random_params(4, rng), random_params(5, rng))


class TestKl:
    def test_self_is_zero(self):
        rng = np.random.default_rng(9)
        p = random_params(6, rng)
        assert abs(gi.kl_divergence(p, p).value) <= 1e-12

    def test_matches_oracle(self):
        rng = np.random.default_rng(10)
        for n in (4, 5):
            for _ in range(5):
                p, q = random_params(n, rng), random_params(n, rng)
                assert_allclose(
                    gi.kl_divergence(p, q).value,
                    gi.oracle_measures(p, q)[2],
                    atol=1e-10,
                )

    def test_nonnegative(self):
        rng = np.random.default_rng(11)
        for _ in range(50):
            n = int(rng.integers(2, 7))
            p, q = random_params(n, rng), random_params(n, rng)
            assert gi.kl_divergence(p, q).value >= -1e-12

    def test_same_center_reduces_to_stage_divergences(self):
        rng = np.random.default_rng(12)
        sigma = Permutation.random(6, rng)
        p = GmmParams(sigma, rng.uniform(0.2, 1.0, 5))
        q = GmmParams(sigma, rng.uniform(0.2, 1.0, 5))
        rep = gi.kl_divergence(p, q)
        stages = [p.stage(r).kl(q.stage(r)) for r in range(1, 6)]
        assert_allclose(rep.per_rank, stages, atol=1e-12)
        assert_allclose(rep.value, sum(stages), atol=1e-12)

    def test_equal_rank_contributes_zero_with_same_center(self):
        sigma = Permutation.of([3, 1, 2, 4])
        p = GmmParams(sigma, np.array([0.5, 0.7, 0.9]))
        q = GmmParams(sigma, np.array([0.5, 0.3, 0.9]))
        rep = gi.kl_divergence(p, q)
        assert abs(rep.per_rank[0]) <= 1e-14
        assert abs(rep.per_rank[2]) <= 1e-14
        assert rep.per_rank[1] > 0.0

    def test_same_theta_different_center_form(self):
        # only the code expectations move: per-rank gap times -ln(theta)
        rng = np.random.default_rng(13)
        theta = rng.uniform(0.2, 0.95, 4)
        p = GmmParams(Permutation.random(5, rng), theta)
        q = GmmParams(Permutation.random(5, rng), theta)
        rho = gi.relabel(q.sigma, p.sigma)
        gap = gi.sbar(rho, theta) - np.array(
            [p.stage(r).mean() for r in range(1, 5)]
        )
        assert_allclose(
            gi.kl_divergence(p, q).per_rank, gap * (-np.log(theta)), atol=1e-12
        )
        assert np.all(gi.kl_divergence(p, q).per_rank >= -1e-12)

    def test_relabel_invariance(self):
        rng = np.random.default_rng(14)
        p, q = random_params(5, rng), random_params(5, rng)
        rho = gi.relabel(q.sigma, p.sigma)
        direct = gi.kl_divergence(p, q).value
        reduced = gi.kl_divergence(
            GmmParams(Permutation.identity(5), p.theta), GmmParams(rho, q.theta)
        ).value
        assert_allclose(direct, reduced, atol=1e-12)

    def test_trivial_n1(self):
        p = GmmParams(Permutation.of([1]), np.zeros(0))
        assert gi.kl_divergence(p, p).value == 0.0
