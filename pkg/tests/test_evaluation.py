import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from fuzzy_effort.dataset import SynthSpec, filter_cases, impute_mmsi, synth_generate
from fuzzy_effort.evaluation import (
    DEFAULT_THRESHOLDS,
    EvaluationReport,
    PredictionPair,
    acceptable,
    evaluate,
    mmre,
    mre,
    pred,
    threshold_sweep,
)
from fuzzy_effort.induction import GrowthConfig
from fuzzy_effort.inference import InferenceMode


def pairs_from_mres(mres, actual=100.0):
    return [PredictionPair(actual, actual * (1 - m)) for m in mres]


@pytest.mark.parametrize("actual, est, expected", [(100, 100, 0.0), (100, 75, 0.25), (100, 150, 0.5)])
def test_mre_examples(actual, est, expected):
    assert mre(PredictionPair(actual, est)) == expected


def test_mre_rejects_non_positive_actual():
    with pytest.raises(ValueError):
        PredictionPair(0.0, 10.0)


def test_mmre_examples():
    assert mmre([PredictionPair(5, 5), PredictionPair(9, 9)]) == 0.0
    assert mmre([PredictionPair(100, 50), PredictionPair(100, 150)]) == 50.0
    assert mmre(pairs_from_mres([0, 0.25, 0.5, 0.25])) == 25.0


def test_pred_examples():
    assert pred([PredictionPair(5, 5), PredictionPair(9, 9)]) == 100.0
    assert pred(pairs_from_mres([0.2, 0.3])) == 50.0
    assert pred([PredictionPair(100, 75)], 25) == 100.0


def test_empty_lists_rejected():
    with pytest.raises(ValueError):
        mmre([])
    with pytest.raises(ValueError):
        pred([])


def test_acceptable_examples():
    assert acceptable(13.49, 92.2) == (True, True)
    assert acceptable(25.0, 75.0) == (True, True)
    assert acceptable(64.82, 15.58) == (False, False)
    assert acceptable(25.01, 74.99) == (False, False)


positive = st.floats(0.01, 1e6)
pair_lists = st.lists(st.tuples(positive, st.floats(0, 1e6)), min_size=1, max_size=30)


@given(pair_lists)
def test_metrics_match_oracle(raw):
    pairs = [PredictionPair(a, e) for a, e in raw]
    want_mmre, want_pred = oracles.metrics([a for a, _ in raw], [e for _, e in raw])
    assert mmre(pairs) == want_mmre
    assert pred(pairs) == want_pred


@given(pair_lists, st.floats(0, 200), st.floats(0, 200))
def test_pred_monotone_in_level(raw, p1, p2):
    pairs = [PredictionPair(a, e) for a, e in raw]
    lo, hi = sorted((p1, p2))
    assert pred(pairs, lo) <= pred(pairs, hi)


@given(pair_lists, st.randoms())
def test_mmre_order_invariant(raw, rnd):
    pairs = [PredictionPair(a, e) for a, e in raw]
    shuffled = pairs[:]
    rnd.shuffle(shuffled)
    assert mmre(shuffled) == pytest.approx(mmre(pairs), rel=1e-12)


@pytest.fixture(scope="module")
def clean():
    return impute_mmsi(filter_cases(synth_generate(SynthSpec(count=151, seed=8, noise=0.2))))


@pytest.fixture(scope="module")
def report(clean):
    return threshold_sweep(clean, seed=8)


def test_sweep_shape(report):
    assert len(report.rows) == 18
    keys = [(r.effort_classes, r.threshold) for r in report.rows]
    assert keys == sorted(keys)
    assert {r.threshold for r in report.rows} == set(DEFAULT_THRESHOLDS)
    assert report.class_counts() == [11, 16]


def test_sweep_rows_finite(report):
    for r in report.rows:
        assert np.isfinite(r.mmre) and r.mmre >= 0
        assert 0 <= r.pred25 <= 100
        assert r.seed == 8


def test_sweep_node_counts_monotone(report):
    for k in report.class_counts():
        counts = [r.node_count for r in report.series(k)]
        assert counts == sorted(counts)


def test_sweep_deterministic(clean, report):
    assert threshold_sweep(clean, seed=8).to_csv() == report.to_csv()


def test_sweep_parallel_matches_serial(clean, report):
    assert threshold_sweep(clean, seed=8, workers=2).to_csv() == report.to_csv()


def test_noise_free_sweep_populated():
    ds = impute_mmsi(filter_cases(synth_generate(SynthSpec(count=60, seed=2, noise=0.0))))
    rep = threshold_sweep(ds, seed=2, mode=InferenceMode.SET_BASED)
    assert len(rep.rows) == 18
    assert all(np.isfinite(r.mmre) and np.isfinite(r.pred25) for r in rep.rows)


def test_report_csv_round_trip(report):
    again = EvaluationReport.from_csv(report.to_csv())
    assert again.to_csv() == report.to_csv()
    assert report.to_csv().splitlines()[0] == "effort_classes,threshold,mmre,pred25,node_count,seed"


def test_series_text(report):
    lines = report.series_text(16).splitlines()
    assert lines[0].startswith("#")
    assert len(lines) == 10
    assert lines[1].split()[0] == "0.1"


def test_evaluate_single_cell(clean):
    rep = evaluate(clean, GrowthConfig(fuzziness_control_threshold=0.4, effort_classes=16), seed=8)
    assert len(rep.rows) == 1
    row = rep.rows[0]
    assert (row.effort_classes, row.threshold) == (16, 0.4)
