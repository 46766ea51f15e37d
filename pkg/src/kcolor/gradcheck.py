"""Gradient verification against central finite differences.

The finite-difference side only evaluates the loss (forward pass), so it is
an independent oracle for the hand-derived reverse-mode gradients. Dropout
is kept off: a stochastic forward pass has no well-defined derivative to
compare against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .coloring import LossSpec
from .gcn import (
    ModelParams,
    TrainConfig,
    WarmStartTarget,
    init_params,
    loss_and_grads,
    normalize_adjacency,
    weighted_adjacency,
)
from .generators import gen_erdos_renyi
from .rng import seed_for

__all__ = ["gradient_check", "run_battery", "GradCheckResult"]


@dataclass(frozen=True)
class GradCheckResult:
    label: str
    max_rel_error: float


def _loss_at(params: ModelParams, adj, cfg, target) -> float:
    loss, _, _ = loss_and_grads(params, adj, cfg, target, training=False)
    return loss


def gradient_check(
    params: ModelParams, adj, cfg: TrainConfig, target, h: float = 1e-5
) -> float:
    """Max relative error between analytic and central-difference gradients.

    The error of each tensor is ||analytic - fd||_inf normalized by
    max(||fd||_inf, 1e-8); the worst tensor wins.
    """
    _, grads, _ = loss_and_grads(params, adj, cfg, target, training=False)
    tensors = [(params.X, grads.X)] + list(zip(params.W, grads.W))
    worst = 0.0
    for theta, analytic in tensors:
        fd = np.empty_like(theta)
        for i in range(theta.size):
            orig = theta.flat[i]
            theta.flat[i] = orig + h
            up = _loss_at(params, adj, cfg, target)
            theta.flat[i] = orig - h
            down = _loss_at(params, adj, cfg, target)
            theta.flat[i] = orig
            fd.flat[i] = (up - down) / (2.0 * h)
        denom = max(np.max(np.abs(fd)), 1e-8)
        worst = max(worst, float(np.max(np.abs(analytic - fd)) / denom))
    return worst


def run_battery(seed: int = 0, count: int = 20) -> list[GradCheckResult]:
    """Random instances sweeping depths 0-2, k in {2, 3, 5}, and the three
    loss kinds, with the pretraining objective mixed in every fifth case."""
    losses = (("standard", None), ("degree-power", 3), ("triangle", None))
    combos = list(itertools.product((0, 1, 2), (2, 3, 5), losses))
    rng = np.random.default_rng(seed)
    results = []
    for i in range(count):
        depth, k, (kind, power) = combos[i % len(combos)]
        n = int(rng.integers(5, 13))
        g = gen_erdos_renyi(n, min(n - 1, 4.0), int(seed_for(seed, 100 + i)))
        cfg = TrainConfig(
            depth=depth,
            features=6,
            init="normal",
            loss_kind=kind,
            loss_power=power if power is not None else 0,
            seed=int(seed_for(seed, 200 + i)),
        )
        params = init_params(g.n, k, cfg, np.random.default_rng(cfg.seed))
        adj = normalize_adjacency(g)
        if i % 5 == 4:  # exercise the pretraining objective too
            colors = rng.integers(0, k, size=g.n).astype(np.int64)
            target = WarmStartTarget.from_coloring(colors, k)
            label = f"{i}: n={n} depth={depth} k={k} warmstart"
        else:
            target = weighted_adjacency(g, LossSpec.for_graph(g, kind, power))
            label = f"{i}: n={n} depth={depth} k={k} {kind}"
        results.append(GradCheckResult(label, gradient_check(params, adj, cfg, target)))
    return results
