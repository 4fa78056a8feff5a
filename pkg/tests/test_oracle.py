import numpy as np
import pytest

from streamsample.core import make_rng
from streamsample.oracle import (
    chi_square_gof,
    chi_square_two_sample,
    enumerate_bernoulli_tree,
    exact_count_pmf,
    exact_marginals,
    truncated_binomial_pmf,
    tv_distance,
)


class TestExactMarginals:
    def test_symmetric(self):
        np.testing.assert_allclose(exact_marginals([1.0, 1.0]), [0.5, 0.5])

    def test_proportional(self):
        np.testing.assert_allclose(
            exact_marginals([1.0, 2.0, 3.0]), [1 / 6, 1 / 3, 1 / 2]
        )

    def test_single(self):
        np.testing.assert_allclose(exact_marginals([5.0]), [1.0])

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            exact_marginals([])

    def test_invalid_rejected(self):
        with pytest.raises(ValueError):
            exact_marginals([1.0, -2.0])


class TestExactCountPmf:
    def test_two_equal_items(self):
        np.testing.assert_allclose(
            exact_count_pmf([1.0, 1.0], 2, 0), [0.25, 0.5, 0.25], atol=1e-12
        )

    def test_bernoulli_case(self):
        np.testing.assert_allclose(
            exact_count_pmf([1.0, 3.0], 1, 1), [0.25, 0.75], atol=1e-12
        )

    def test_zero_size_rejected(self):
        with pytest.raises(ValueError):
            exact_count_pmf([1.0, 1.0], 0, 0)

    def test_index_out_of_range(self):
        with pytest.raises(ValueError):
            exact_count_pmf([1.0, 1.0], 2, 2)

    def test_pmf_sums_to_one(self):
        pmf = exact_count_pmf([1.0, 2.0, 3.0, 4.0], 5, 2)
        assert abs(pmf.sum() - 1.0) < 1e-12

    def test_expected_counts_sum_to_size(self):
        # sum over items of m * w_i/W is exactly m
        weights = [1.0, 2.0, 3.0, 4.0]
        m = 5
        total = sum(
            (np.arange(m + 1) * exact_count_pmf(weights, m, i)).sum()
            for i in range(4)
        )
        assert abs(total - m) < 1e-9


class TestTruncatedPmf:
    def test_normalized(self):
        for m, p in [(2, 0.5), (5, 0.2), (10, 0.9)]:
            assert abs(truncated_binomial_pmf(m, p).sum() - 1.0) < 1e-12

    def test_rejects_bad_p(self):
        with pytest.raises(ValueError):
            truncated_binomial_pmf(3, 0.0)


class TestChiSquare:
    def test_perfect_fit(self):
        report = chi_square_gof([50, 50], [0.5, 0.5])
        assert report.statistic == 0.0
        assert report.p_value == 1.0
        assert report.replications == 100

    def test_known_statistic(self):
        # (60-50)^2/50 + (40-50)^2/50 = 4
        report = chi_square_gof([60, 40], [0.5, 0.5])
        assert report.statistic == pytest.approx(4.0)
        assert report.dof == 1

    def test_pooling_of_rare_bins(self):
        # expected counts 98, 1, 1: the two rare bins pool into one tail
        report = chi_square_gof([97, 2, 1], [0.98, 0.01, 0.01])
        assert report.dof == 1

    def test_degenerate_after_pooling(self):
        # every bin under-expected: everything pools into one tail bin
        with pytest.raises(ValueError, match="degenerate"):
            chi_square_gof([1, 1], [0.5, 0.5])

    def test_rejects_unnormalized_pmf(self):
        with pytest.raises(ValueError, match="sums"):
            chi_square_gof([1, 1], [0.4, 0.4])

    def test_tv_distance_reported(self):
        report = chi_square_gof([75, 25], [0.5, 0.5])
        assert report.tv_distance == pytest.approx(0.25)

    def test_calibration(self):
        # p-values of a correct null are uniform: far fewer than 1% of
        # 1000 independent tests may fall below 0.001
        rng = make_rng(314159)
        pmf = np.array([0.4, 0.3, 0.2, 0.1])
        low = 0
        for _ in range(1000):
            obs = rng.multinomial(500, pmf)
            if chi_square_gof(obs, pmf).p_value < 0.001:
                low += 1
        assert low < 10

    def test_two_sample_same_source_high_p(self):
        rng = make_rng(7)
        pmf = np.array([0.5, 0.3, 0.2])
        a = rng.multinomial(20_000, pmf)
        b = rng.multinomial(20_000, pmf)
        assert chi_square_two_sample(a, b).p_value > 0.001

    def test_two_sample_detects_difference(self):
        rng = make_rng(8)
        a = rng.multinomial(20_000, [0.5, 0.3, 0.2])
        b = rng.multinomial(20_000, [0.3, 0.5, 0.2])
        assert chi_square_two_sample(a, b).p_value < 1e-6


class TestBruteForceTree:
    @pytest.mark.parametrize(
        "weights,m",
        [
            ([2.0], 1),
            ([2.0], 2),
            ([1.0, 2.0], 1),
            ([1.0, 2.0], 2),
            ([3.0, 1.0, 2.0], 1),
            ([3.0, 1.0, 2.0], 2),
            ([0.5, 0.25, 4.0], 2),
        ],
    )
    def test_matches_analytic_binomial(self, weights, m):
        # the literal per-slot procedure enumerated exhaustively agrees
        # with the analytic Binomial(m, w/W) law
        pmfs = enumerate_bernoulli_tree(weights, m)
        for i in range(len(weights)):
            np.testing.assert_allclose(
                pmfs[i], exact_count_pmf(weights, m, i), atol=1e-12
            )

    def test_masses_sum_to_one(self):
        pmfs = enumerate_bernoulli_tree([1.0, 2.0, 3.0], 2)
        for pmf in pmfs.values():
            assert abs(pmf.sum() - 1.0) < 1e-12


class TestTvDistance:
    def test_zero_for_identical(self):
        assert tv_distance([0.5, 0.5], [0.5, 0.5]) == 0.0

    def test_one_for_disjoint(self):
        assert tv_distance([1.0, 0.0], [0.0, 1.0]) == pytest.approx(1.0)
