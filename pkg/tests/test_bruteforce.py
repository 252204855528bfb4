import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

import gmminfo as gi
from gmminfo import Permutation

from conftest import all_perms, random_params


class TestCap:
    def test_default_cap_is_eight(self):
        assert gi.max_enumeration_n() == 8
        with pytest.raises(gi.EnumerationLimitError):
            list(gi.all_permutations(9))

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("ORACLE_MAX_N", "4")
        assert gi.max_enumeration_n() == 4
        with pytest.raises(gi.EnumerationLimitError):
            list(gi.all_permutations(5))
        # per-call override still wins
        assert sum(1 for _ in gi.all_permutations(5, max_n=5)) == 120

    def test_measures_respect_cap(self):
        rng = np.random.default_rng(0)
        p = random_params(9, rng)
        with pytest.raises(gi.EnumerationLimitError):
            gi.oracle_measures(p, p)


class TestEnumeration:
    def test_lexicographic_order_and_count(self):
        perms = list(gi.all_permutations(3))
        assert [p.items for p in perms] == [
            (1, 2, 3),
            (1, 3, 2),
            (2, 1, 3),
            (2, 3, 1),
            (3, 1, 2),
            (3, 2, 1),
        ]
        assert sum(1 for _ in gi.all_permutations(5)) == 120


class TestOracleMeasures:
    def test_equal_models(self):
        rng = np.random.default_rng(1)
        p = random_params(3, rng)
        h, xe, kl = gi.oracle_measures(p, p)
        assert_allclose(kl, 0.0, atol=1e-13)
        assert_allclose(h, xe, atol=1e-13)

    def test_uniform_entropy(self):
        p = gi.mallows(Permutation.identity(3), 1.0)
        h, _, _ = gi.oracle_measures(p, p)
        assert_allclose(h, math.log(6), atol=1e-13)

    def test_kl_is_xe_minus_h(self):
        rng = np.random.default_rng(2)
        for _ in range(5):
            p = random_params(4, rng)
            q = random_params(4, rng)
            h, xe, kl = gi.oracle_measures(p, q)
            assert_allclose(kl, xe - h, atol=1e-13)
            assert kl >= -1e-13


class TestOracleSbar:
    def test_identity_center_gives_geom_means(self):
        alpha = np.array([0.3, 0.8, 1.0, 0.5])
        got = gi.oracle_sbar(Permutation.identity(5), alpha)
        want = [gi.TruncGeom(float(alpha[r]), 5 - r).mean() for r in range(4)]
        assert_allclose(got, want, atol=1e-12)

    def test_single_swap_uniform(self):
        # one inverted pair under uniform sampling contributes 1/2
        got = gi.oracle_sbar(Permutation.of([2, 1]), np.array([1.0]))
        assert_allclose(got, [0.5], atol=1e-14)

    def test_expected_distance_decomposition(self):
        rng = np.random.default_rng(3)
        sigma = Permutation.random(5, rng)
        alpha = rng.uniform(0.2, 1.0, 4)
        sampling = gi.GmmParams(Permutation.identity(5), alpha)
        expected_d = sum(
            gi.prob(sampling, pi) * gi.kendall_distance(pi, sigma)
            for pi in all_perms(5)
        )
        assert_allclose(gi.oracle_sbar(sigma, alpha).sum(), expected_d, atol=1e-11)


class TestOracleQbar:
    def test_rank_one_is_inversion_matrix(self):
        rng = np.random.default_rng(4)
        sigma = Permutation.random(5, rng)
        alpha = rng.uniform(0.2, 1.0, 4)
        assert_array_equal(
            gi.oracle_qbar(sigma, alpha, 1), gi.inversion_matrix(sigma).astype(float)
        )

    def test_identity_center_stays_upper(self):
        alpha = np.array([0.6, 0.9, 0.4])
        for r in (1, 2, 3):
            q = gi.oracle_qbar(Permutation.identity(4), alpha, r)
            assert np.all(np.tril(q) == 0.0)

    def test_occupancy_bound(self):
        rng = np.random.default_rng(5)
        sigma = Permutation.random(5, rng)
        alpha = rng.uniform(0.2, 1.0, 4)
        for r in (2, 3, 4):
            q = gi.oracle_qbar(sigma, alpha, r)
            occ = q + q.T
            assert np.all(occ <= 1.0 + 1e-12)
            assert np.all(q >= 0.0)
