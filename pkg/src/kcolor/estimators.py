"""Scikit-learn style estimator wrappers around the solvers.

Every solver is exposed as an estimator with ``fit(graph)`` /
``fit_predict(graph)``, cluster-style ``labels_`` output, and
``get_params``/``set_params`` inherited from :class:`sklearn.base.BaseEstimator`
so instances compose with the wider ecosystem (cloning, grid search over
solver hyperparameters, pipelines that end in a coloring step).
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from .coloring import loss_hard
from .gcn import TrainConfig
from .local_search import SearchStats, discrete_color, full_color, random_coloring, triple_color
from .rng import SearchRng
from .train import full_gcn, mod_gcn
from .validation import check_budget, check_graph

__all__ = ["DiscreteColor", "FullColor", "TripleColor", "ModGCN", "FullGCN"]


class _LocalSearchEstimator(BaseEstimator):
    """Shared fit plumbing for the greedy solvers."""

    def __init__(self, k=2, seed=0):
        self.k = k
        self.seed = seed

    def _solve(self, graph, rng, stats):
        raise NotImplementedError

    def fit(self, graph, y=None):
        graph = check_graph(graph)
        k = check_budget(self.k)
        rng = SearchRng(self.seed)
        stats = SearchStats()
        coloring = self._solve(graph, k, rng, stats)
        self.coloring_ = coloring
        self.labels_ = np.asarray(coloring.colors)
        self.loss_ = loss_hard(graph, coloring)
        self.is_proper_ = self.loss_ == 0
        self.n_discrete_color_calls_ = stats.discrete_color_calls
        return self

    def fit_predict(self, graph, y=None):
        return self.fit(graph).labels_


class DiscreteColor(_LocalSearchEstimator):
    """Greedy 1-flip descent from a uniformly random k-coloring."""

    def _solve(self, graph, k, rng, stats):
        init = random_coloring(graph, k, rng)
        return discrete_color(graph, k, init, rng, stats)


class FullColor(_LocalSearchEstimator):
    """Greedy descent warm-started recursively from the 1-coloring."""

    def _solve(self, graph, k, rng, stats):
        return full_color(graph, k, rng, stats)


class TripleColor(_LocalSearchEstimator):
    """Best of three recursive warm-started descents per budget step."""

    def _solve(self, graph, k, rng, stats):
        return triple_color(graph, k, rng, stats=stats)


class _GCNEstimator(BaseEstimator):
    def __init__(
        self,
        k=2,
        depth=1,
        features=200,
        init="orthogonal",
        loss_kind="degree-power",
        loss_power=3,
        learning_rate=1e-3,
        dropout=0.0,
        weight_decay=0.01,
        max_epochs=100_000,
        patience=1000,
        min_improvement=1e-4,
        seed=0,
    ):
        self.k = k
        self.depth = depth
        self.features = features
        self.init = init
        self.loss_kind = loss_kind
        self.loss_power = loss_power
        self.learning_rate = learning_rate
        self.dropout = dropout
        self.weight_decay = weight_decay
        self.max_epochs = max_epochs
        self.patience = patience
        self.min_improvement = min_improvement
        self.seed = seed

    def _config(self) -> TrainConfig:
        return TrainConfig(
            depth=self.depth,
            features=self.features,
            init=self.init,
            loss_kind=self.loss_kind,
            loss_power=self.loss_power,
            learning_rate=self.learning_rate,
            dropout=self.dropout,
            weight_decay=self.weight_decay,
            max_epochs=self.max_epochs,
            patience=self.patience,
            min_improvement=self.min_improvement,
            seed=self.seed,
        )

    def _run(self, graph, k, cfg):
        raise NotImplementedError

    def fit(self, graph, y=None):
        graph = check_graph(graph)
        k = check_budget(self.k)
        result = self._run(graph, k, self._config())
        self.result_ = result
        self.coloring_ = result.hard
        self.labels_ = np.asarray(result.hard.colors)
        self.soft_ = result.soft
        self.loss_ = loss_hard(graph, result.hard)
        self.is_proper_ = self.loss_ == 0
        self.soft_loss_ = result.soft_loss
        self.n_epochs_ = len(result.trace)
        return self

    def fit_predict(self, graph, y=None):
        return self.fit(graph).labels_


class ModGCN(_GCNEstimator):
    """Per-instance differentiable solver with the tuned defaults."""

    def _run(self, graph, k, cfg):
        return mod_gcn(graph, k, cfg)


class FullGCN(_GCNEstimator):
    """Differentiable solver with recursive warm-start pretraining."""

    def _run(self, graph, k, cfg):
        return full_gcn(graph, k, cfg)
