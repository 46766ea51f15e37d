"""Per-instance differentiable coloring: forward pass, exact gradients, AdamW.

The model is a graph convolution stack over the degree-normalized adjacency
with zero diagonal (no self-loops, unit edge weights): each layer maps
H -> act(A_hat @ H @ W), with ReLU on all but the last layer and none on the
last. Depth 0 means no convolution at all: the feature matrix itself is the
logit matrix. Row-wise softmax turns logits into a soft coloring.

Both the feature matrix X and every layer weight W_t are trained. Gradients
are hand-derived reverse mode for this fixed computation graph; the
accompanying tests check them against central finite differences.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
import scipy.sparse as sp

from .coloring import LossSpec, SoftColoring
from .graph import Graph

__all__ = [
    "NormalizedAdjacency",
    "ModelParams",
    "TrainConfig",
    "WarmStartTarget",
    "normalize_adjacency",
    "weighted_adjacency",
    "init_features",
    "init_params",
    "forward",
    "loss_and_grads",
    "Gradients",
    "AdamWState",
    "adamw_init",
    "adamw_step",
    "detect_oversmoothing",
]


@dataclass(frozen=True)
class NormalizedAdjacency:
    """Sparse symmetric matrix with 1/sqrt(deg(u)*deg(v)) per edge, zero diagonal."""

    matrix: sp.csr_matrix

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def normalize_adjacency(g: Graph) -> NormalizedAdjacency:
    deg = g.degree.astype(np.float64)
    u, v = g.edges[:, 0], g.edges[:, 1]
    vals = 1.0 / np.sqrt(deg[u] * deg[v]) if g.m else np.empty(0)
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.concatenate([vals, vals])
    mat = sp.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))
    return NormalizedAdjacency(mat)


def weighted_adjacency(g: Graph, spec: LossSpec) -> sp.csr_matrix:
    """Symmetric matrix carrying the loss spec's per-edge weights."""
    if spec.weights.size != g.m:
        raise ValueError("loss spec was built for a different graph")
    u, v = g.edges[:, 0], g.edges[:, 1]
    rows = np.concatenate([u, v])
    cols = np.concatenate([v, u])
    data = np.concatenate([spec.weights, spec.weights])
    return sp.csr_matrix((data, (rows, cols)), shape=(g.n, g.n))


@dataclass
class ModelParams:
    """Feature matrix X plus per-layer weights; empty W means depth 0 and
    X is directly the n x k logit matrix."""

    X: np.ndarray
    W: list[np.ndarray] = field(default_factory=list)

    def __post_init__(self):
        width = self.X.shape[1]
        for i, w in enumerate(self.W):
            if w.shape[0] != width:
                raise ValueError(f"layer {i} expects width {width}, got {w.shape[0]}")
            width = w.shape[1]

    @property
    def out_width(self) -> int:
        return int(self.W[-1].shape[1]) if self.W else int(self.X.shape[1])

    def copy(self) -> "ModelParams":
        return ModelParams(self.X.copy(), [w.copy() for w in self.W])


@dataclass
class Gradients:
    X: np.ndarray
    W: list[np.ndarray]


@dataclass(frozen=True)
class TrainConfig:
    """Trainer configuration; the defaults are the tuned general-purpose setup
    (depth 1, 200 features, orthogonal rows, degree-power loss with p=3,
    AdamW at learning rate 0.001, no dropout)."""

    depth: int = 1
    features: int = 200
    init: str = "orthogonal"
    loss_kind: str = "degree-power"
    loss_power: int = 3
    learning_rate: float = 1e-3
    dropout: float = 0.0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    weight_decay: float = 0.01
    max_epochs: int = 100_000
    patience: int = 1000
    min_improvement: float = 1e-4
    pretrain_max_epochs: int = 20_000
    pretrain_patience: int = 500
    seed: int = 0

    def __post_init__(self):
        if not 0 <= self.depth <= 4:
            raise ValueError("depth must be in [0, 4]")
        if self.features < 1:
            raise ValueError("features must be >= 1")
        if self.init not in ("orthogonal", "identity", "normal"):
            raise ValueError(f"unknown init scheme {self.init!r}")
        if not 0 <= self.dropout < 1:
            raise ValueError("dropout must be in [0, 1)")

    def loss_spec(self, g: Graph) -> LossSpec:
        power = self.loss_power if self.loss_kind == "degree-power" else None
        return LossSpec.for_graph(g, self.loss_kind, power)

    def with_seed(self, seed: int) -> "TrainConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class WarmStartTarget:
    """Peaked soft target for pretraining: 0.55 at the assigned color,
    0.45/(k-1) everywhere else."""

    P: np.ndarray

    @classmethod
    def from_coloring(cls, colors: np.ndarray, k: int) -> "WarmStartTarget":
        n = colors.size
        if k == 1:
            return cls(np.ones((n, 1), dtype=np.float64))
        P = np.full((n, k), 0.45 / (k - 1), dtype=np.float64)
        P[np.arange(n), colors] = 0.55
        return cls(P)


def init_features(scheme: str, n: int, f: int, rng: np.random.Generator) -> np.ndarray:
    """Initial feature rows: standard normal, truncated identity, or
    orthonormal rows (QR of a Gaussian; falls back to the identity scheme
    when n > f, where orthonormal rows cannot exist)."""
    if f < 1:
        raise ValueError("f must be >= 1")
    if scheme == "normal":
        return rng.standard_normal((n, f))
    if scheme == "identity":
        X = np.zeros((n, f), dtype=np.float64)
        X[np.arange(n), np.arange(n) % f] = 1.0
        return X
    if scheme == "orthogonal":
        if n > f:
            return init_features("identity", n, f, rng)
        A = rng.standard_normal((f, n))
        Q, R = np.linalg.qr(A)
        Q = Q * np.sign(np.diag(R))  # fix signs for determinism
        return np.ascontiguousarray(Q.T)
    raise ValueError(f"unknown init scheme {scheme!r}")


def init_params(n: int, k: int, cfg: TrainConfig, rng: np.random.Generator) -> ModelParams:
    if cfg.depth == 0:
        return ModelParams(init_features(cfg.init, n, k, rng), [])
    X = init_features(cfg.init, n, cfg.features, rng)
    widths = [cfg.features] * cfg.depth + [k]
    W = []
    for fan_in, fan_out in zip(widths[:-1], widths[1:]):
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        W.append(rng.uniform(-limit, limit, size=(fan_in, fan_out)))
    return ModelParams(X, W)


def _softmax_rows(Q: np.ndarray) -> np.ndarray:
    Z = Q - Q.max(axis=1, keepdims=True)
    np.exp(Z, out=Z)
    Z /= Z.sum(axis=1, keepdims=True)
    return Z


def _forward(params, adj, cfg, training, rng):
    """Returns (Q, P, Zs, Ms, masks) with per-layer caches for backprop."""
    A = adj.matrix
    L = len(params.W)
    H = params.X
    Zs, Ms, masks = [], [], []
    for t in range(L):
        Z = A @ H
        M = Z @ params.W[t]
        Zs.append(Z)
        Ms.append(M)
        if t < L - 1:
            H = np.maximum(M, 0.0)
            if training and cfg.dropout > 0.0:
                mask = rng.random(H.shape) >= cfg.dropout
                H = H * mask / (1.0 - cfg.dropout)
                masks.append(mask)
            else:
                masks.append(None)
        else:
            H = M
    Q = H
    return Q, _softmax_rows(Q), Zs, Ms, masks


def forward(
    params: ModelParams,
    adj: NormalizedAdjacency,
    cfg: TrainConfig,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[np.ndarray, SoftColoring]:
    """Logits and soft coloring for the current parameters."""
    if params.X.shape[0] != adj.n:
        raise ValueError("feature rows do not match the graph order")
    if training and cfg.dropout > 0.0 and rng is None:
        raise ValueError("training with dropout needs an rng")
    Q, P, _, _, _ = _forward(params, adj, cfg, training, rng)
    return Q, SoftColoring(P)


def loss_and_grads(
    params: ModelParams,
    adj: NormalizedAdjacency,
    cfg: TrainConfig,
    target,
    training: bool = False,
    rng: np.random.Generator | None = None,
) -> tuple[float, Gradients, np.ndarray]:
    """Loss and exact gradients for every entry of X and all W_t.

    ``target`` is either a sparse weighted adjacency (coloring loss
    0.5 * sum_{uv} S_uv p_u . p_v) or a :class:`WarmStartTarget` (squared
    Frobenius distance to the peaked soft target). Also returns the soft
    assignment P of this forward pass.
    """
    if params.X.shape[0] != adj.n:
        raise ValueError("feature rows do not match the graph order")
    Q, P, Zs, Ms, masks = _forward(params, adj, cfg, training, rng)
    if isinstance(target, WarmStartTarget):
        diff = P - target.P
        loss = float(np.sum(diff * diff))
        dP = 2.0 * diff
    else:
        SP = target @ P
        loss = 0.5 * float(np.sum(P * SP))
        dP = SP
    # softmax backward
    dQ = P * (dP - np.sum(dP * P, axis=1, keepdims=True))
    L = len(params.W)
    if L == 0:
        return loss, Gradients(dQ, []), P
    A = adj.matrix
    gW: list[np.ndarray | None] = [None] * L
    dH = dQ
    for t in range(L - 1, -1, -1):
        if t < L - 1:  # hidden layer: dropout then ReLU backward
            if masks[t] is not None:
                dH = dH * masks[t] / (1.0 - cfg.dropout)
            dM = dH * (Ms[t] > 0.0)
        else:
            dM = dH
        gW[t] = Zs[t].T @ dM
        dH = A @ (dM @ params.W[t].T)
    return loss, Gradients(dH, gW), P


@dataclass
class AdamWState:
    mX: np.ndarray
    vX: np.ndarray
    mW: list[np.ndarray]
    vW: list[np.ndarray]
    step: int = 0


def adamw_init(params: ModelParams) -> AdamWState:
    return AdamWState(
        mX=np.zeros_like(params.X),
        vX=np.zeros_like(params.X),
        mW=[np.zeros_like(w) for w in params.W],
        vW=[np.zeros_like(w) for w in params.W],
    )


def adamw_step(
    state: AdamWState, params: ModelParams, grads: Gradients, cfg: TrainConfig
) -> tuple[AdamWState, ModelParams]:
    """One AdamW update in place. Decoupled weight decay applies to the W
    matrices only: X is an embedding, and decaying it would pull all logits
    toward the uniform distribution."""
    state.step += 1
    t = state.step
    b1, b2 = cfg.beta1, cfg.beta2
    c1 = 1.0 - b1**t
    c2 = 1.0 - b2**t
    lr = cfg.learning_rate

    def update(theta, g, m, v, decay):
        m *= b1
        m += (1.0 - b1) * g
        v *= b2
        v += (1.0 - b2) * (g * g)
        theta -= lr * (m / c1) / (np.sqrt(v / c2) + cfg.eps)
        if decay and cfg.weight_decay:
            theta -= lr * cfg.weight_decay * theta

    update(params.X, grads.X, state.mX, state.vX, decay=False)
    for w, gw, m, v in zip(params.W, grads.W, state.mW, state.vW):
        update(w, gw, m, v, decay=True)
    return state, params


def detect_oversmoothing(s: SoftColoring, tol: float) -> bool:
    """True iff every entry deviates from 1/k by less than ``tol``."""
    return bool(np.max(np.abs(s.P - 1.0 / s.k)) < tol)
