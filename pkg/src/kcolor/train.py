"""Training pipelines: Mod-GCN, warm-start pretraining, Full-GCN.

A run stops when the best training loss has not improved by more than
``min_improvement`` for ``patience`` consecutive epochs (hard cap
``max_epochs``). The returned coloring is taken at the best-loss epoch, not
the final one: Adam keeps oscillating near a minimum and the best visited
point is the meaningful output. The final-epoch soft coloring is kept as
well for convergence diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .coloring import HardColoring, SoftColoring, loss_hard
from .gcn import (
    ModelParams,
    TrainConfig,
    WarmStartTarget,
    adamw_init,
    adamw_step,
    init_params,
    loss_and_grads,
    normalize_adjacency,
    weighted_adjacency,
)
from .graph import Graph
from .rng import seed_for

__all__ = ["Trace", "TrainResult", "mod_gcn", "pretrain_warmstart", "full_gcn", "write_trace"]


@dataclass
class Trace:
    """Per-epoch record of a training run."""

    soft_loss: np.ndarray
    best_soft_loss: np.ndarray
    hard_loss: np.ndarray

    def __len__(self) -> int:
        return int(self.soft_loss.size)


@dataclass
class TrainResult:
    soft: SoftColoring
    hard: HardColoring
    final_soft: SoftColoring
    trace: Trace
    best_epoch: int

    @property
    def soft_loss(self) -> float:
        return float(self.trace.best_soft_loss[-1])

    @property
    def hard_loss(self) -> int:
        return int(self.trace.hard_loss[self.best_epoch])


def _hard_loss_of(P: np.ndarray, eu: np.ndarray, ev: np.ndarray) -> int:
    col = np.argmax(P, axis=1)
    return int(np.count_nonzero(col[eu] == col[ev]))


def mod_gcn(
    g: Graph,
    k: int,
    cfg: TrainConfig | None = None,
    warm_params: ModelParams | None = None,
) -> TrainResult:
    """Minimize the configured coloring loss over (X, W) with AdamW."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if cfg is None:
        cfg = TrainConfig()
    rng = np.random.default_rng(cfg.seed)
    adj = normalize_adjacency(g)
    S = weighted_adjacency(g, cfg.loss_spec(g))
    if warm_params is not None:
        if warm_params.out_width != k:
            raise ValueError("warm-start params have the wrong output width")
        params = warm_params.copy()
    else:
        params = init_params(g.n, k, cfg, rng)
    opt = adamw_init(params)
    eu, ev = g.edges[:, 0], g.edges[:, 1]

    soft_losses: list[float] = []
    hard_losses: list[int] = []
    best_loss = np.inf
    best_P: np.ndarray | None = None
    best_epoch = 0
    sig_best = np.inf
    stale = 0
    P = None
    for epoch in range(cfg.max_epochs):
        loss, grads, P = loss_and_grads(params, adj, cfg, S, training=True, rng=rng)
        soft_losses.append(loss)
        hard_losses.append(_hard_loss_of(P, eu, ev))
        if loss < best_loss:
            best_loss = loss
            best_P = P
            best_epoch = epoch
        if loss < sig_best - cfg.min_improvement:
            sig_best = loss
            stale = 0
        else:
            stale += 1
            if stale >= cfg.patience:
                break
        adamw_step(opt, params, grads, cfg)
    soft = np.array(soft_losses)
    trace = Trace(soft, np.minimum.accumulate(soft), np.array(hard_losses))
    best_soft = SoftColoring(best_P)
    return TrainResult(
        soft=best_soft,
        hard=HardColoring(np.argmax(best_P, axis=1).astype(np.int64), k),
        final_soft=SoftColoring(P),
        trace=trace,
        best_epoch=best_epoch,
    )


def pretrain_warmstart(
    g: Graph, k: int, coloring: HardColoring, cfg: TrainConfig | None = None
) -> ModelParams:
    """Train the model to predict ``coloring`` through the peaked soft target,
    minimizing the squared Frobenius distance; returns the final parameters."""
    if cfg is None:
        cfg = TrainConfig()
    if coloring.n != g.n:
        raise ValueError("coloring does not cover the graph")
    if coloring.k > k:
        raise ValueError("coloring uses more than k colors")
    rng = np.random.default_rng(cfg.seed)
    adj = normalize_adjacency(g)
    target = WarmStartTarget.from_coloring(coloring.colors, k)
    params = init_params(g.n, k, cfg, rng)
    opt = adamw_init(params)
    sig_best = np.inf
    stale = 0
    for _ in range(cfg.pretrain_max_epochs):
        loss, grads, _ = loss_and_grads(params, adj, cfg, target, training=True, rng=rng)
        if loss < sig_best - cfg.min_improvement:
            sig_best = loss
            stale = 0
        else:
            stale += 1
            if stale >= cfg.pretrain_patience:
                break
        adamw_step(opt, params, grads, cfg)
    return params


def full_gcn(g: Graph, k: int, cfg: TrainConfig | None = None) -> TrainResult:
    """Recursive warm starts for the differentiable solver: for each budget
    j = 2..k, pretrain on the previous (j-1)-coloring and continue from the
    pretrained parameters."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if cfg is None:
        cfg = TrainConfig()
    if k == 1:
        ones = HardColoring.ones(g.n)
        P = np.ones((g.n, 1), dtype=np.float64)
        empty = Trace(np.zeros(1), np.zeros(1), np.array([loss_hard(g, ones)]))
        soft = SoftColoring(P)
        return TrainResult(soft, ones, soft, empty, 0)
    coloring = HardColoring.ones(g.n)
    result: TrainResult | None = None
    for j in range(2, k + 1):
        stage_cfg = cfg.with_seed(seed_for(cfg.seed, j))
        warm = pretrain_warmstart(g, j, coloring, stage_cfg)
        result = mod_gcn(g, j, stage_cfg, warm_params=warm)
        coloring = result.hard
    return result


def write_trace(trace: Trace, fh) -> None:
    fh.write("epoch,soft_loss,best_soft_loss,hard_loss_of_rounding\n")
    for i in range(len(trace)):
        fh.write(
            f"{i},{float(trace.soft_loss[i])!r},"
            f"{float(trace.best_soft_loss[i])!r},{int(trace.hard_loss[i])}\n"
        )
