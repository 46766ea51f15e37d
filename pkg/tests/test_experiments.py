import io
import math

import numpy as np
import pytest

from kcolor import Graph, TrainConfig, gen_erdos_renyi, loss_hard
from kcolor.experiments import (
    CaseStudyRow,
    GraphSpec,
    TrialRecord,
    case_study,
    confidence_interval,
    fit_and_extrapolate,
    oversmoothing_threshold,
    parse_config,
    read_records,
    run_trials,
    solve_with,
    write_records,
    DENSITY_GRID,
)


# --- run_trials -----------------------------------------------------------------


def test_run_trials_single_fixed_graph():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    spec = GraphSpec(family="fixed", graph=g, name="triangle")
    records = run_trials("discrete", spec, 3, 1, base_seed=5)
    assert len(records) == 1
    r = records[0]
    assert r.family == "triangle" and r.n == 3 and r.k == 3
    assert r.proper == (r.loss == 0)
    assert r.ms > 0


def test_run_trials_reproducible():
    spec = GraphSpec(family="er", n=30, d=5.0)
    a = run_trials("full", spec, 4, 10, base_seed=3)
    b = run_trials("full", spec, 4, 10, base_seed=3)
    assert [(r.loss, r.seed) for r in a] == [(r.loss, r.seed) for r in b]


def test_run_trials_fresh_instances_for_random_families():
    spec = GraphSpec(family="er", n=25, d=4.0)
    records = run_trials("discrete", spec, 4, 8, base_seed=1)
    assert len({r.seed for r in records}) == 8


def test_run_trials_proper_flag_consistency():
    spec = GraphSpec(family="er", n=40, d=8.0)
    records = run_trials("discrete", spec, 3, 30, base_seed=2)
    for r in records:
        assert r.proper == (r.loss == 0)


def test_run_trials_unknown_algorithm():
    with pytest.raises(ValueError):
        run_trials("anneal", GraphSpec(family="er", n=5, d=1.0), 2, 1, 0)


def test_trial_record_flag_validation():
    with pytest.raises(ValueError):
        TrialRecord("discrete", "er", 5, 1.0, 2, 0, 0, loss=3, proper=True, ms=1.0)


def test_solve_with_gcn_smoke():
    g = gen_erdos_renyi(12, 3.0, 4)
    cfg = TrainConfig(features=16, patience=100, max_epochs=2000)
    c = solve_with("mod-gcn", g, 3, seed=1, cfg=cfg)
    assert c.k == 3 and c.n == 12


# --- confidence_interval -----------------------------------------------------------


def test_ci_frozen_example():
    mean, half = confidence_interval([1, 2, 3])
    assert mean == pytest.approx(2.0)
    assert half == pytest.approx(1.96 / math.sqrt(3))


def test_ci_all_equal():
    mean, half = confidence_interval([4.0] * 10)
    assert mean == 4.0 and half == 0.0


def test_ci_single_sample_error():
    with pytest.raises(ValueError):
        confidence_interval([1.0])


def test_ci_matches_high_precision_reference(rng):
    xs = rng.random(100) * 7
    mean, half = confidence_interval(xs)
    ref_mean = sum(float(x) for x in xs) / 100
    ref_var = sum((float(x) - ref_mean) ** 2 for x in xs) / 99
    assert mean == pytest.approx(ref_mean, abs=1e-12)
    assert half == pytest.approx(1.96 * math.sqrt(ref_var / 100), abs=1e-12)


# --- fit_and_extrapolate -------------------------------------------------------------


def test_ols_exact_line():
    points = [(n, 2.0 * n) for n in range(110, 210, 10)]
    slope, intercept, preds = fit_and_extrapolate(points, [1000])
    assert slope == pytest.approx(2.0)
    assert intercept == pytest.approx(0.0, abs=1e-9)
    assert preds[0] == pytest.approx(2000.0)


def test_ols_constant():
    slope, intercept, preds = fit_and_extrapolate([(1, 5.0), (2, 5.0), (3, 5.0)], [77])
    assert slope == 0.0 and intercept == 5.0 and preds[0] == 5.0


def test_ols_frozen_closed_form():
    slope, intercept, preds = fit_and_extrapolate([(1, 1), (2, 2), (3, 2)], [4])
    assert slope == pytest.approx(0.5)
    assert intercept == pytest.approx(2 / 3)
    assert preds[0] == pytest.approx(8 / 3)


def test_ols_degenerate():
    with pytest.raises(ValueError):
        fit_and_extrapolate([(5, 1.0), (5, 2.0)], [10])
    with pytest.raises(ValueError):
        fit_and_extrapolate([(5, 1.0)], [10])


# --- oversmoothing_threshold ----------------------------------------------------------


def test_threshold_stub_linear_scan_agreement():
    for cut in (0.10, 0.37, 0.99, 1.00):
        calls = []

        def probe(p, cut=cut):
            calls.append(p)
            return p >= cut

        got = oversmoothing_threshold(60, 2, 0.1, 0, probe=probe)
        linear = next((p for p in DENSITY_GRID if p >= cut), None)
        assert got == linear
        assert len(calls) <= 10  # binary search, not a scan


def test_threshold_never_fires():
    assert oversmoothing_threshold(60, 2, 0.1, 0, probe=lambda p: False) is None


def test_threshold_depth_validation():
    with pytest.raises(ValueError):
        oversmoothing_threshold(60, 3, 0.1, 0, probe=lambda p: True)


# --- case_study -------------------------------------------------------------------------


def test_case_study_edgeless():
    g = Graph(5, np.empty((0, 2), dtype=np.int64))
    row = case_study(g, "discrete", [1, 2], runs=3, base_seed=0, name="empty")
    assert row.best_loss == 0
    assert row.chi == 1
    assert row.chi_star == 1
    assert row.k == 1


def test_case_study_triangle():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    row = case_study(g, "triple", [2, 3], runs=5, base_seed=1, name="K3", table_k=3)
    assert row.chi == 3
    assert row.k == 3 and row.best_loss == 0
    assert loss_hard(g, row.witnesses[3]) == 0
    assert row.chi <= row.chi_star


def test_case_study_row_invariant():
    with pytest.raises(ValueError):
        CaseStudyRow("x", 3, 3, 2, 1, chi=4, chi_star=3)


# --- CSV and config I/O -------------------------------------------------------------------


def test_records_roundtrip():
    spec = GraphSpec(family="er", n=20, d=4.0)
    records = run_trials("discrete", spec, 3, 5, base_seed=9)
    buf = io.StringIO()
    write_records(records, buf)
    buf.seek(0)
    back = read_records(buf)
    assert back == records


def test_read_records_rejects_bad_header():
    with pytest.raises(ValueError):
        read_records(io.StringIO("nope\n1,2,3\n"))


def test_parse_config():
    conf = parse_config("# comment\nalgo = discrete,full\nn=100\n\nd=10 # inline\n")
    assert conf == {"algo": "discrete,full", "n": "100", "d": "10"}


def test_parse_config_rejects_garbage():
    with pytest.raises(ValueError):
        parse_config("this is not a config\n")
