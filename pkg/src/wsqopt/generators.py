"""Seeded instance generators: random graphs and simulated portfolio data."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .problems import PortfolioInstance, WeightedGraph


@dataclass
class GbmConfig:
    """Configuration of the geometric-Brownian-motion price simulator."""

    n_assets: int
    n_days: int = 250
    mu_range: tuple = (-0.05, 0.05)
    sigma_range: tuple = (-0.20, 0.20)
    seed: int = 0

    def __post_init__(self):
        if self.n_assets < 1:
            raise ValueError("need at least one asset")
        if self.n_days < 2:
            raise ValueError("need at least two days")
        for lo, hi in (self.mu_range, self.sigma_range):
            if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
                raise ValueError("ranges must be finite with lo <= hi")


def random_graph(n: int, p_edge: float, weights=(-1.0, 1.0), seed: int = 0) -> WeightedGraph:
    """Graph where each pair (i, j) appears with probability ``p_edge``.

    Edge weights are drawn uniformly from ``weights``; draws equal to zero
    are treated as absent edges so the graph stays canonical.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    weights = list(weights)
    if not weights:
        raise ValueError("weight set must be non-empty")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p_edge:
                w = float(weights[rng.integers(len(weights))])
                if w != 0.0:
                    edges.append((i, j, w))
    return WeightedGraph(n=n, edges=edges)


def complete_graph(n: int, weight_lo: int = -10, weight_hi: int = 10, seed: int = 0) -> WeightedGraph:
    """Fully connected graph with integer weights uniform on [lo, hi].

    Zero draws are kept as absent edges.
    """
    if n < 2:
        raise ValueError("need at least two nodes")
    if weight_lo > weight_hi:
        raise ValueError("weight_lo must not exceed weight_hi")
    rng = np.random.default_rng(seed)
    edges = []
    for i in range(n):
        for j in range(i + 1, n):
            w = float(rng.integers(weight_lo, weight_hi + 1))
            if w != 0.0:
                edges.append((i, j, w))
    return WeightedGraph(n=n, edges=edges)


def gbm_portfolio(
    cfg: GbmConfig,
    q: float = 2.0,
    budget: int | None = None,
    penalty: float = 3.0,
) -> PortfolioInstance:
    """Portfolio instance from simulated daily prices.

    Each asset follows an independent geometric Brownian motion: the price on
    day k is ``exp[(mu - sigma^2/2) k/N + sigma W_k]`` with ``W_k`` a random
    walk of N(0, 1) steps scaled by ``1/sqrt(N)`` and initial price 1. The
    instance's ``mu`` is the per-asset mean of the N daily returns
    ``S_k / S_{k-1} - 1`` and ``sigma`` their sample covariance.

    Per-asset drift and volatility are drawn uniformly from ``mu_range`` and
    ``sigma_range``; a negative volatility draw only flips the sign of the
    driving walk. ``q``, ``budget`` and ``penalty`` parameterize the
    downstream objective (budget defaults to n // 2).
    """
    rng = np.random.default_rng(cfg.seed)
    n, days = cfg.n_assets, cfg.n_days
    mus = rng.uniform(cfg.mu_range[0], cfg.mu_range[1], size=n)
    sigmas = rng.uniform(cfg.sigma_range[0], cfg.sigma_range[1], size=n)
    steps = rng.standard_normal((n, days))
    walk = np.cumsum(steps, axis=1) / np.sqrt(days)

    k = np.arange(1, days + 1, dtype=float)
    log_prices = (mus - 0.5 * sigmas**2)[:, None] * (k / days) + sigmas[:, None] * walk
    prices = np.exp(log_prices)
    prev = np.concatenate([np.ones((n, 1)), prices[:, :-1]], axis=1)
    returns = prices / prev - 1.0

    mean_returns = returns.mean(axis=1)
    if n == 1:
        covariance = np.array([[float(np.var(returns[0], ddof=1))]])
    else:
        covariance = np.cov(returns)
    if budget is None:
        budget = n // 2
    return PortfolioInstance(
        sigma=covariance, mu=mean_returns, q=q, budget=budget, penalty=penalty
    )
