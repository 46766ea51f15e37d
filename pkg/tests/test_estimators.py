import numpy as np
import pytest
from sklearn.base import clone

from kcolor import DiscreteColor, FullColor, FullGCN, ModGCN, TripleColor, gen_erdos_renyi, loss_hard
from kcolor.generators import complete


def test_discrete_color_fit():
    g = gen_erdos_renyi(20, 4.0, 1)
    est = DiscreteColor(k=3, seed=5).fit(g)
    assert est.labels_.shape == (20,)
    assert est.labels_.max() < 3
    assert est.is_proper_ == (est.loss_ == 0)
    assert est.n_discrete_color_calls_ == 1


def test_full_color_fit_predict():
    g = complete(4)
    labels = FullColor(k=4, seed=0).fit_predict(g)
    assert len(set(labels.tolist())) == 4


def test_triple_color_call_count_attribute():
    g = gen_erdos_renyi(15, 3.0, 2)
    est = TripleColor(k=3, seed=1).fit(g)
    assert est.n_discrete_color_calls_ == 12


def test_estimator_get_set_params():
    est = TripleColor(k=5, seed=9)
    assert est.get_params() == {"k": 5, "seed": 9}
    est.set_params(k=2)
    assert est.k == 2
    cloned = clone(est)
    assert cloned.get_params() == est.get_params()


def test_estimator_determinism():
    g = gen_erdos_renyi(25, 5.0, 3)
    a = DiscreteColor(k=4, seed=7).fit(g).labels_
    b = DiscreteColor(k=4, seed=7).fit(g).labels_
    assert np.array_equal(a, b)


def test_estimator_rejects_non_graph():
    with pytest.raises(TypeError):
        DiscreteColor(k=2).fit(np.zeros((3, 3)))


def test_estimator_rejects_bad_budget():
    g = gen_erdos_renyi(5, 2.0, 0)
    with pytest.raises(ValueError):
        DiscreteColor(k=0).fit(g)


def test_mod_gcn_estimator():
    g = gen_erdos_renyi(12, 3.0, 4)
    est = ModGCN(k=3, features=16, patience=100, max_epochs=2000, seed=2).fit(g)
    assert est.labels_.shape == (12,)
    assert est.soft_.P.shape == (12, 3)
    assert est.loss_ == loss_hard(g, est.coloring_)
    assert est.n_epochs_ <= 2000
    params = est.get_params()
    assert params["features"] == 16 and params["k"] == 3
    clone(est)


def test_full_gcn_estimator_smoke():
    g = gen_erdos_renyi(10, 2.0, 6)
    est = FullGCN(k=2, features=8, patience=60, max_epochs=800, seed=0).fit(g)
    assert est.labels_.max() < 2
