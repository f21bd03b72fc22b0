import logging
import math

import numpy as np
import pytest

from mgae.anomaly import (
    ScoreDistribution,
    default_q_grid,
    detect,
    node_scores,
    score_distribution,
    shannon_entropy,
    sweep_q,
    tsallis_entropy,
)
from mgae.errors import DistributionError, EntropyDomainError


def dist_of(p):
    p = np.asarray(p, dtype=float)
    return ScoreDistribution(node_ids=tuple(f"n{i}" for i in range(p.size)), p=p)


def tsallis_direct(p, q):
    """Independent brute-force evaluation of (1 - sum p_i^q) / (q - 1)."""
    return (1.0 - sum(pi**q for pi in p)) / (q - 1.0)


class TestShannon:
    def test_uniform_four_states(self):
        assert shannon_entropy(dist_of([0.25] * 4)) == pytest.approx(2.0, abs=1e-15)

    def test_degenerate(self):
        assert shannon_entropy(dist_of([1.0, 0.0, 0.0])) == 0.0

    def test_direct_value(self):
        assert shannon_entropy(dist_of([0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-15)

    def test_invalid_distribution(self):
        with pytest.raises(DistributionError):
            dist_of([0.5, 0.6])
        with pytest.raises(DistributionError):
            dist_of([1.5, -0.5])


class TestTsallis:
    @pytest.mark.parametrize("W", [2, 10, 100])
    @pytest.mark.parametrize("q", [-0.5, 0.5, 2.0])
    def test_uniform_closed_form(self, W, q):
        got = tsallis_entropy(dist_of([1.0 / W] * W), q)
        want = (1.0 - W ** (1.0 - q)) / (q - 1.0)
        assert got == pytest.approx(want, abs=1e-12)

    def test_degenerate_q2(self):
        assert tsallis_entropy(dist_of([1.0, 0.0, 0.0, 0.0]), 2.0) == pytest.approx(0.0, abs=1e-15)

    def test_half_half_q_half(self):
        got = tsallis_entropy(dist_of([0.5, 0.5]), 0.5)
        assert got == pytest.approx(2.0 * (math.sqrt(2.0) - 1.0), abs=1e-12)
        assert got == pytest.approx(0.82843, abs=5e-6)

    def test_limit_consistency_near_one(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = rng.random(6)
            p /= p.sum()
            shannon_nat = -(p * np.log(p)).sum()
            for q in (1.0 - 1e-6, 1.0 + 1e-6):
                assert abs(tsallis_entropy(dist_of(p), q) - shannon_nat) < 1e-5

    def test_zero_probability_with_nonpositive_q(self):
        with pytest.raises(EntropyDomainError):
            tsallis_entropy(dist_of([1.0, 0.0]), -0.5)
        with pytest.raises(EntropyDomainError):
            tsallis_entropy(dist_of([1.0, 0.0]), 0.0)

    def test_nonnegative_for_positive_q(self):
        rng = np.random.default_rng(5)
        for _ in range(1000):
            p = rng.random(int(rng.integers(2, 10)))
            p /= p.sum()
            for q in (0.3, 0.5, 2.0, 3.0):
                assert tsallis_entropy(dist_of(p), q) >= 0.0

    def test_uniform_maximality(self):
        rng = np.random.default_rng(7)
        for q in (0.5, 2.0):
            for _ in range(1000):
                W = int(rng.integers(2, 8))
                p = rng.random(W)
                p /= p.sum()
                uniform = tsallis_entropy(dist_of([1.0 / W] * W), q)
                assert uniform >= tsallis_entropy(dist_of(p), q) - 1e-12


class TestScoreDistribution:
    def test_uniform_from_equal_errors(self):
        dist = score_distribution(np.array([1.0, 1.0, 1.0, 1.0]))
        np.testing.assert_array_equal(dist.p, [0.25] * 4)

    def test_direct_normalization(self):
        dist = score_distribution(np.array([3.0, 1.0]))
        np.testing.assert_array_equal(dist.p, [0.75, 0.25])

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(9)
        re = rng.random(8)
        perm = rng.permutation(8)
        a = score_distribution(re).p
        b = score_distribution(re[perm]).p
        np.testing.assert_array_equal(a[perm], b)

    def test_all_zero_rejected(self):
        with pytest.raises(DistributionError):
            score_distribution(np.zeros(4))


class TestNodeScores:
    def test_sum_equals_entropy(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            p = rng.random(int(rng.integers(2, 12)))
            p /= p.sum()
            q = float(rng.uniform(-0.5, 0.5))
            if abs(q - 1.0) <= 1e-9:
                continue
            dist = dist_of(p)
            assert abs(node_scores(dist, q).sum() - tsallis_entropy(dist, q)) < 1e-12

    def test_uniform_scores_equal(self):
        scores = node_scores(dist_of([0.2] * 5), 0.5)
        assert np.all(scores == scores[0])

    def test_direct_evaluation(self):
        scores = node_scores(dist_of([0.9, 0.1]), 0.5)
        assert scores[0] == pytest.approx((0.9 - math.sqrt(0.9)) / (-0.5), abs=1e-12)
        assert scores[1] == pytest.approx((0.1 - math.sqrt(0.1)) / (-0.5), abs=1e-12)
        assert scores[0] == pytest.approx(0.09737, abs=5e-6)
        assert scores[1] == pytest.approx(0.43246, abs=5e-6)

    def test_limit_branch(self):
        p = np.array([0.7, 0.3])
        scores = node_scores(dist_of(p), 1.0)
        np.testing.assert_allclose(scores, -p * np.log(p), atol=1e-15)


class TestDetect:
    def test_constant_scores_empty(self):
        result = detect(np.full(6, 0.5), tuple(f"n{i}" for i in range(6)))
        assert result.anomalies == ()

    def test_single_outlier(self):
        scores = np.array([0.0] * 9 + [10.0])
        result = detect(scores, tuple(f"n{i}" for i in range(10)), c=2.0)
        assert result.threshold == pytest.approx(7.0)
        assert result.anomalies == ("n9",)

    def test_huge_c_empty(self):
        rng = np.random.default_rng(13)
        result = detect(rng.random(20), tuple(f"n{i}" for i in range(20)), c=1e9)
        assert result.anomalies == ()

    def test_ordered_by_descending_score(self):
        scores = np.array([0.0] * 8 + [5.0, 9.0])
        result = detect(scores, tuple(f"n{i}" for i in range(10)), c=1.0)
        assert result.anomalies == ("n9", "n8")

    def test_permutation_equivariance(self):
        rng = np.random.default_rng(15)
        scores = rng.random(12) ** 4
        ids = tuple(f"n{i}" for i in range(12))
        base = detect(scores, ids, c=1.0)
        perm = rng.permutation(12)
        permuted = detect(scores[perm], tuple(ids[i] for i in perm), c=1.0)
        assert set(base.anomalies) == set(permuted.anomalies)


class TestSweep:
    def test_default_grid(self):
        grid = default_q_grid()
        assert len(grid) == 11
        assert grid[0] == -0.5 and grid[-1] == 0.5
        assert 0.0 in grid and 1.0 not in grid
        assert len(default_q_grid(step=0.05)) == 21

    def test_output_length_matches_grid(self):
        rng = np.random.default_rng(17)
        re = rng.random(20) + 0.01
        results = sweep_q(re)
        assert len(results) == 11
        assert [q for q, _ in results] == list(default_q_grid())

    def test_zero_re_skips_nonpositive_q(self, caplog):
        re = np.array([0.0, 1.0, 2.0, 3.0])
        with caplog.at_level(logging.WARNING):
            results = sweep_q(re)
        kept = [q for q, _ in results]
        assert kept == [q for q in default_q_grid() if q > 0.0]
        assert "skipping" in caplog.text

    def test_uniform_re_yields_empty_sets(self):
        results = sweep_q(np.ones(10))
        for _, s in results:
            assert s.anomalies == ()

    def test_counts_match_brute_force_oracle(self):
        rng = np.random.default_rng(19)
        re = rng.pareto(1.2, size=30) + 1e-6
        results = sweep_q(re, c=2.0)
        p = re / re.sum()
        for q, s in results:
            # independent re-evaluation of the per-state summands of
            # (1 - sum p^q)/(q - 1) and the mean + 2 std cut
            scores = [(pi - pi**q) / (q - 1.0) for pi in p]
            mean = sum(scores) / len(scores)
            std = math.sqrt(sum((x - mean) ** 2 for x in scores) / len(scores))
            want = sum(1 for x in scores if x > mean + 2.0 * std)
            assert len(s.anomalies) == want
            assert abs(sum(scores) - tsallis_direct(p, q)) < 1e-12
