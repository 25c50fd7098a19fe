"""Instance generators: determinism, statistics, and format invariants."""

import numpy as np
import pytest

from wsqopt.generators import GbmConfig, complete_graph, gbm_portfolio, random_graph


class TestRandomGraph:
    def test_full_probability_unit_weights(self):
        g = random_graph(6, 1.0, weights=(1.0,), seed=0)
        assert g.m == 15
        assert all(w == 1.0 for _, _, w in g.edges)

    def test_zero_probability(self):
        assert random_graph(6, 0.0, seed=0).m == 0

    def test_determinism(self):
        a = random_graph(12, 0.5, seed=99)
        b = random_graph(12, 0.5, seed=99)
        assert a.edges == b.edges

    def test_edge_count_statistics(self):
        # 435 candidate pairs at p=1/2: mean 217.5, sd sqrt(435)/2 per graph
        counts = [random_graph(30, 0.5, seed=s).m for s in range(1000)]
        mean = np.mean(counts)
        sigma = np.sqrt(435 * 0.25 / 1000)
        assert abs(mean - 217.5) < 3 * sigma


class TestCompleteGraph:
    def test_weights_in_range_and_zero_dropped(self):
        g = complete_graph(10, seed=4)
        assert g.m <= 45
        for _, _, w in g.edges:
            assert -10 <= w <= 10
            assert w != 0.0
            assert w == int(w)

    def test_determinism(self):
        assert complete_graph(8, seed=5).edges == complete_graph(8, seed=5).edges


class TestGbmPortfolio:
    def test_zero_volatility_degenerates(self):
        cfg = GbmConfig(n_assets=3, sigma_range=(0.0, 0.0), seed=1)
        instance = gbm_portfolio(cfg)
        np.testing.assert_allclose(instance.sigma, 0.0, atol=1e-15)
        # constant daily return exp(mu/N) - 1 per asset
        rng = np.random.default_rng(1)
        mus = rng.uniform(-0.05, 0.05, size=3)
        np.testing.assert_allclose(
            instance.mu, np.exp(mus / 250) - 1.0, rtol=1e-10
        )

    def test_covariance_psd(self):
        instance = gbm_portfolio(GbmConfig(n_assets=6, seed=2))
        eigs = np.linalg.eigvalsh(instance.sigma)
        assert eigs.min() >= -1e-9

    def test_determinism(self):
        a = gbm_portfolio(GbmConfig(n_assets=5, seed=77))
        b = gbm_portfolio(GbmConfig(n_assets=5, seed=77))
        np.testing.assert_array_equal(a.sigma, b.sigma)
        np.testing.assert_array_equal(a.mu, b.mu)

    def test_default_budget(self):
        instance = gbm_portfolio(GbmConfig(n_assets=6, seed=0))
        assert instance.budget == 3

    def test_config_validation(self):
        with pytest.raises(ValueError):
            GbmConfig(n_assets=2, n_days=1)
