import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kcolor import (
    Graph,
    HardColoring,
    LossSpec,
    SoftColoring,
    gen_erdos_renyi,
    k_d,
    loss_hard,
    loss_soft,
    one_hot,
    round_soft,
)
from kcolor.coloring import (
    read_hard_coloring,
    read_soft_coloring,
    write_hard_coloring,
    write_soft_coloring,
)
from kcolor.generators import complete, cycle

from conftest import brute_force_expected_loss_fast, random_graph, random_soft

TRIANGLE = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
PATH3 = Graph.from_edges(3, [(0, 1), (1, 2)])


# --- hard loss ---------------------------------------------------------------


def test_loss_hard_proper_triangle():
    assert loss_hard(TRIANGLE, HardColoring(np.array([0, 1, 2]), 3)) == 0


def test_loss_hard_monochromatic_triangle():
    assert loss_hard(TRIANGLE, HardColoring(np.array([0, 0, 0]), 3)) == 3


def test_loss_hard_c8_frozen():
    # direct edge count oracle: edges (0,1) and (2,3) are monochromatic
    c8 = cycle(8)
    c = HardColoring(np.array([0, 0, 1, 1, 0, 1, 0, 1]), 2)
    assert loss_hard(c8, c) == 2


def test_loss_hard_length_mismatch():
    with pytest.raises(ValueError):
        loss_hard(TRIANGLE, HardColoring(np.array([0, 1]), 2))


def test_loss_hard_zero_iff_proper():
    g = gen_erdos_renyi(12, 4.0, 0)
    rng = np.random.default_rng(1)
    for _ in range(20):
        c = HardColoring(rng.integers(0, 3, g.n).astype(np.int64), 3)
        mono = sum(1 for u, v in g.edges if c.colors[u] == c.colors[v])
        assert loss_hard(g, c) == mono
        assert (loss_hard(g, c) == 0) == (mono == 0)


# --- soft loss ---------------------------------------------------------------


def test_loss_soft_single_edge_uniform():
    g = Graph.from_edges(2, [(0, 1)])
    s = SoftColoring(np.full((2, 2), 0.5))
    assert loss_soft(g, s) == pytest.approx(0.5, abs=1e-12)


def test_loss_soft_k5_uniform():
    g = complete(5)
    s = SoftColoring(np.full((5, 5), 0.2))
    assert loss_soft(g, s) == pytest.approx(2.0, abs=1e-12)


def test_loss_soft_degree_power_path_frozen():
    # two edges, each weight (1^3 + 2^3)/2 = 4.5; one-hot same color -> 9.0
    s = one_hot(HardColoring(np.array([1, 1, 1]), 3))
    spec = LossSpec.for_graph(PATH3, "degree-power", 3)
    assert loss_soft(PATH3, s, spec) == pytest.approx(9.0, abs=1e-12)


def test_loss_soft_matches_brute_force_enumeration(rng):
    for _ in range(30):
        n = int(rng.integers(1, 7))
        g = random_graph(n, int(rng.integers(0, n * (n - 1) // 2 + 1)), rng)
        for k in (2, 3):
            P = random_soft(n, k, rng)
            expected = brute_force_expected_loss_fast(g, P)
            assert loss_soft(g, SoftColoring(P)) == pytest.approx(expected, abs=1e-9)


def test_one_hot_embedding_exact(rng):
    for _ in range(20):
        n = int(rng.integers(1, 10))
        g = random_graph(n, int(rng.integers(0, 12)), rng)
        k = int(rng.integers(1, 5))
        c = HardColoring(rng.integers(0, k, n).astype(np.int64), k)
        assert loss_soft(g, one_hot(c)) == float(loss_hard(g, c))


def test_degree_power_zero_equals_standard(rng):
    for _ in range(100):
        n = int(rng.integers(2, 12))
        g = random_graph(n, int(rng.integers(1, 14)), rng)
        spec0 = LossSpec.for_graph(g, "degree-power", 0)
        std = LossSpec.for_graph(g, "standard")
        assert np.array_equal(spec0.weights, std.weights)
        P = SoftColoring(random_soft(n, 3, rng))
        assert loss_soft(g, P, spec0) == loss_soft(g, P, std)


def test_triangle_weights():
    spec = LossSpec.for_graph(TRIANGLE, "triangle")
    assert spec.weights.tolist() == [2.0, 2.0, 2.0]
    spec_p = LossSpec.for_graph(PATH3, "triangle")
    assert spec_p.weights.tolist() == [1.0, 1.0]
    k4 = complete(4)
    assert LossSpec.for_graph(k4, "triangle").weights.tolist() == [3.0] * 6


def test_loss_soft_nonnegative(rng):
    for _ in range(30):
        n = int(rng.integers(1, 8))
        g = random_graph(n, int(rng.integers(0, 10)), rng)
        s = SoftColoring(random_soft(n, 4, rng))
        for spec in [
            LossSpec.for_graph(g, "standard"),
            LossSpec.for_graph(g, "degree-power", 2),
            LossSpec.for_graph(g, "triangle"),
        ]:
            assert loss_soft(g, s, spec) >= 0.0


def test_loss_soft_shape_errors():
    g = Graph.from_edges(2, [(0, 1)])
    with pytest.raises(ValueError):
        loss_soft(g, SoftColoring(np.full((3, 2), 0.5)))
    other = LossSpec.for_graph(TRIANGLE, "standard")
    with pytest.raises(ValueError):
        loss_soft(g, SoftColoring(np.full((2, 2), 0.5)), other)


def test_soft_coloring_rejects_bad_rows():
    with pytest.raises(ValueError):
        SoftColoring(np.array([[0.5, 0.6]]))
    with pytest.raises(ValueError):
        SoftColoring(np.array([[1.2, -0.2]]))


def test_soft_coloring_tolerance():
    SoftColoring(np.array([[0.5, 0.5 + 5e-10]]))
    with pytest.raises(ValueError):
        SoftColoring(np.array([[0.5, 0.5 + 5e-9]]))


# --- rounding ----------------------------------------------------------------


def test_round_soft_basic():
    s = SoftColoring(np.array([[0.9, 0.1], [0.2, 0.8]]))
    assert round_soft(s).colors.tolist() == [0, 1]


def test_round_soft_tie_lowest_index():
    s = SoftColoring(np.array([[0.5, 0.5]]))
    assert round_soft(s).colors.tolist() == [0]


def test_round_one_hot_identity(rng):
    g = random_graph(6, 8, rng)
    c = HardColoring(rng.integers(0, 3, 6).astype(np.int64), 3)
    s = one_hot(c)
    assert loss_hard(g, round_soft(s)) == loss_soft(g, s)


# --- k_d ---------------------------------------------------------------------


@pytest.mark.parametrize("d,expected", [(10, 4), (16, 5), (20, 6), (1, 2)])
def test_k_d_values(d, expected):
    assert k_d(d) == expected


def test_k_d_definition():
    for d in (0.5, 3.0, 10.0, 33.3):
        k = k_d(d)
        assert 2 * k * math.log(k) > d
        if k > 1:
            assert 2 * (k - 1) * math.log(k - 1) <= d


@given(st.floats(min_value=0.01, max_value=80.0), st.floats(min_value=0.0, max_value=10.0))
@settings(max_examples=80, deadline=None)
def test_k_d_nondecreasing(d, delta):
    assert k_d(d + delta) >= k_d(d)


def test_k_d_rejects_nonpositive():
    with pytest.raises(ValueError):
        k_d(0)


# --- serialization ------------------------------------------------------------


def test_hard_coloring_roundtrip():
    c = HardColoring(np.array([0, 2, 1, 2]), 3)
    buf = io.StringIO()
    write_hard_coloring(c, buf)
    buf.seek(0)
    c2 = read_hard_coloring(buf, k=3)
    assert c2.colors.tolist() == c.colors.tolist()


def test_soft_coloring_roundtrip(rng):
    s = SoftColoring(random_soft(4, 3, rng))
    buf = io.StringIO()
    write_soft_coloring(s, buf)
    buf.seek(0)
    s2 = read_soft_coloring(buf)
    assert np.array_equal(s2.P, s.P)


def test_hard_coloring_validation():
    with pytest.raises(ValueError):
        HardColoring(np.array([0, 3]), 3)
    with pytest.raises(ValueError):
        HardColoring(np.array([0, 1]), 0)
