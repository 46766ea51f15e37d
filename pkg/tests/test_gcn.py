import numpy as np
import pytest

from kcolor import (
    Graph,
    LossSpec,
    ModelParams,
    SoftColoring,
    TrainConfig,
    WarmStartTarget,
    adamw_init,
    adamw_step,
    detect_oversmoothing,
    forward,
    gen_erdos_renyi,
    init_features,
    loss_and_grads,
    normalize_adjacency,
)
from kcolor.gcn import Gradients, init_params, weighted_adjacency
from kcolor.gradcheck import gradient_check, run_battery

from conftest import random_graph


# --- normalized adjacency -----------------------------------------------------


def test_normalize_single_edge():
    g = Graph.from_edges(2, [(0, 1)])
    A = normalize_adjacency(g).matrix.toarray()
    assert A[0, 1] == A[1, 0] == pytest.approx(1.0)
    assert A[0, 0] == A[1, 1] == 0.0


def test_normalize_star():
    g = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    A = normalize_adjacency(g).matrix.toarray()
    for leaf in (1, 2, 3):
        assert A[0, leaf] == pytest.approx(1 / np.sqrt(3))
    assert np.all(np.diag(A) == 0.0)


def test_normalize_zero_diagonal_random(rng):
    g = gen_erdos_renyi(30, 5.0, 3)
    A = normalize_adjacency(g).matrix.toarray()
    assert np.all(np.diag(A) == 0.0)
    assert np.allclose(A, A.T)
    assert np.count_nonzero(A) == 2 * g.m


def test_normalize_isolated_vertex_rows_zero():
    g = Graph.from_edges(3, [(0, 1)])
    A = normalize_adjacency(g).matrix.toarray()
    assert np.all(A[2] == 0) and np.all(A[:, 2] == 0)


# --- forward -------------------------------------------------------------------


def test_forward_edgeless_depth1_uniform():
    g = Graph(4, np.empty((0, 2), dtype=np.int64))
    cfg = TrainConfig(depth=1, features=5, init="normal", seed=0)
    params = init_params(4, 3, cfg, np.random.default_rng(0))
    Q, P = forward(params, normalize_adjacency(g), cfg)
    assert np.allclose(Q, 0.0)
    assert np.allclose(P.P, 1 / 3)


def test_forward_single_edge_row_swap():
    g = Graph.from_edges(2, [(0, 1)])
    params = ModelParams(np.eye(2), [np.eye(2)])
    cfg = TrainConfig(depth=1, features=2, seed=0)
    Q, _ = forward(params, normalize_adjacency(g), cfg)
    assert np.allclose(Q, np.array([[0.0, 1.0], [1.0, 0.0]]))


def test_forward_depth0_logits_are_features():
    X = np.array([[3.0, -1.0], [0.0, 0.5], [2.0, 2.0]])
    params = ModelParams(X.copy(), [])
    g = Graph.from_edges(3, [(0, 1), (1, 2)])
    cfg = TrainConfig(depth=0, seed=0)
    Q, P = forward(params, normalize_adjacency(g), cfg)
    assert np.array_equal(Q, X)
    assert np.allclose(P.P.sum(axis=1), 1.0)


def test_forward_permutation_equivariance(rng):
    for _ in range(5):
        g = random_graph(8, 12, rng)
        cfg = TrainConfig(depth=2, features=6, init="normal", seed=1)
        params = init_params(8, 3, cfg, np.random.default_rng(2))
        Q, _ = forward(params, normalize_adjacency(g), cfg)
        perm = rng.permutation(8)
        remap = np.empty(8, dtype=np.int64)
        remap[perm] = np.arange(8)
        g2 = Graph.from_edges(8, [(remap[u], remap[v]) for u, v in g.edges])
        params2 = ModelParams(params.X[perm], [w.copy() for w in params.W])
        Q2, _ = forward(params2, normalize_adjacency(g2), cfg)
        # vertex i of g maps to remap[i] in g2
        assert np.allclose(Q2[remap], Q, atol=1e-12)


def test_forward_softmax_rows_valid(rng):
    g = random_graph(10, 15, rng)
    cfg = TrainConfig(depth=1, features=7, init="normal", seed=3)
    params = init_params(10, 4, cfg, np.random.default_rng(4))
    params.X *= 40.0  # stress the softmax
    _, P = forward(params, normalize_adjacency(g), cfg)
    assert np.max(np.abs(P.P.sum(axis=1) - 1.0)) <= 1e-9
    SoftColoring(P.P)  # revalidates


def test_forward_dropout_needs_rng():
    g = Graph.from_edges(2, [(0, 1)])
    cfg = TrainConfig(depth=2, features=3, dropout=0.5, init="normal", seed=0)
    params = init_params(2, 2, cfg, np.random.default_rng(0))
    with pytest.raises(ValueError):
        forward(params, normalize_adjacency(g), cfg, training=True)
    # inert when not training
    forward(params, normalize_adjacency(g), cfg, training=False)


# --- loss_and_grads -------------------------------------------------------------


def test_edgeless_coloring_loss_zero_grads():
    g = Graph(5, np.empty((0, 2), dtype=np.int64))
    cfg = TrainConfig(depth=1, features=4, init="normal", seed=0)
    params = init_params(5, 3, cfg, np.random.default_rng(1))
    S = weighted_adjacency(g, LossSpec.for_graph(g, "standard"))
    loss, grads, _ = loss_and_grads(params, normalize_adjacency(g), cfg, S)
    assert loss == 0.0
    assert np.all(grads.X == 0.0)
    assert all(np.all(gw == 0.0) for gw in grads.W)


def test_symmetric_saddle_zero_gradient():
    # single edge, depth 0, zero logits: loss 0.5 and exactly zero gradient
    g = Graph.from_edges(2, [(0, 1)])
    params = ModelParams(np.zeros((2, 2)), [])
    cfg = TrainConfig(depth=0, seed=0)
    S = weighted_adjacency(g, LossSpec.for_graph(g, "standard"))
    loss, grads, _ = loss_and_grads(params, normalize_adjacency(g), cfg, S)
    assert loss == pytest.approx(0.5, abs=1e-15)
    assert np.all(grads.X == 0.0)


def test_gradient_check_battery_subset():
    results = run_battery(seed=7, count=6)
    for r in results:
        assert r.max_rel_error <= 1e-4, r.label


def test_gradient_check_warmstart_target(rng):
    g = random_graph(7, 9, rng)
    cfg = TrainConfig(depth=1, features=5, init="normal", seed=5)
    params = init_params(7, 3, cfg, np.random.default_rng(6))
    target = WarmStartTarget.from_coloring(rng.integers(0, 3, 7).astype(np.int64), 3)
    err = gradient_check(params, normalize_adjacency(g), cfg, target)
    assert err <= 1e-4


def test_warmstart_target_rows():
    t = WarmStartTarget.from_coloring(np.array([2, 0]), 10)
    assert t.P[0, 2] == pytest.approx(0.55)
    assert t.P[0, 0] == pytest.approx(0.05)
    assert np.allclose(t.P.sum(axis=1), 1.0)
    t2 = WarmStartTarget.from_coloring(np.array([0, 1]), 2)
    assert t2.P[0].tolist() == [0.55, 0.45]


# --- AdamW ----------------------------------------------------------------------


def test_adamw_zero_gradient_no_motion():
    params = ModelParams(np.ones((2, 3)), [np.ones((3, 2))])
    cfg = TrainConfig(depth=1, features=3, weight_decay=0.0, seed=0)
    state = adamw_init(params)
    grads = Gradients(np.zeros((2, 3)), [np.zeros((3, 2))])
    before_x = params.X.copy()
    before_w = params.W[0].copy()
    adamw_step(state, params, grads, cfg)
    assert np.array_equal(params.X, before_x)
    assert np.array_equal(params.W[0], before_w)


def test_adamw_first_step_closed_form():
    # scalar theta=1, g=2: m_hat=2, v_hat=4, step = lr*2/(2+eps)
    params = ModelParams(np.array([[1.0]]), [])
    cfg = TrainConfig(depth=0, learning_rate=1e-3, weight_decay=0.0, seed=0)
    state = adamw_init(params)
    adamw_step(state, params, Gradients(np.array([[2.0]]), []), cfg)
    expected = 1.0 - 1e-3 * 2.0 / (2.0 + 1e-8)
    assert params.X[0, 0] == pytest.approx(expected, abs=1e-15)


def test_adamw_identical_params_stay_identical():
    params = ModelParams(np.array([[0.3, 0.3]]), [])
    cfg = TrainConfig(depth=0, seed=0)
    state = adamw_init(params)
    for step in range(25):
        g = np.array([[0.1 * np.sin(step), 0.1 * np.sin(step)]])
        adamw_step(state, params, Gradients(g, []), cfg)
        assert params.X[0, 0] == params.X[0, 1]


def test_adamw_weight_decay_only_on_w():
    params = ModelParams(np.full((1, 2), 5.0), [np.full((2, 2), 5.0)])
    cfg = TrainConfig(depth=1, features=2, weight_decay=0.5, seed=0)
    state = adamw_init(params)
    grads = Gradients(np.zeros((1, 2)), [np.zeros((2, 2))])
    adamw_step(state, params, grads, cfg)
    assert np.all(params.X == 5.0)  # no decay on X
    assert np.all(params.W[0] == 5.0 - cfg.learning_rate * 0.5 * 5.0)


# --- init_features ----------------------------------------------------------------


def test_init_orthogonal_rows():
    X = init_features("orthogonal", 3, 4, np.random.default_rng(0))
    assert np.allclose(X @ X.T, np.eye(3), atol=1e-9)


def test_init_orthogonal_fallback_when_n_exceeds_f():
    X = init_features("orthogonal", 5, 2, np.random.default_rng(0))
    expect = init_features("identity", 5, 2, np.random.default_rng(0))
    assert np.array_equal(X, expect)


def test_init_identity_rows():
    X = init_features("identity", 5, 200, np.random.default_rng(0))
    assert np.array_equal(X[:5, :5], np.eye(5))
    assert np.all(X.sum(axis=1) == 1.0)


def test_init_identity_wraps():
    X = init_features("identity", 5, 3, np.random.default_rng(0))
    assert X[3, 0] == 1.0 and X[4, 1] == 1.0


def test_init_normal_statistics():
    n = f = 200
    X = init_features("normal", n, f, np.random.default_rng(1))
    assert abs(X.mean()) < 4 / np.sqrt(n * f)
    assert abs(X.std() - 1.0) < 0.02


def test_init_deterministic():
    a = init_features("normal", 10, 10, np.random.default_rng(42))
    b = init_features("normal", 10, 10, np.random.default_rng(42))
    assert np.array_equal(a, b)


# --- detect_oversmoothing -----------------------------------------------------------


def test_detect_exact_uniform():
    assert detect_oversmoothing(SoftColoring(np.full((6, 4), 0.25)), 0.01)


def test_detect_one_hot_false():
    P = np.full((4, 4), 0.25)
    P[2] = [1.0, 0.0, 0.0, 0.0]
    assert not detect_oversmoothing(SoftColoring(P), 0.01)


def test_detect_near_uniform_within_tol(rng):
    noise = (rng.random((5, 4)) - 0.5) * 0.005
    P = 0.25 + noise - noise.mean(axis=1, keepdims=True)
    assert detect_oversmoothing(SoftColoring(P), 0.01)
    assert not detect_oversmoothing(SoftColoring(P), 1e-5)
