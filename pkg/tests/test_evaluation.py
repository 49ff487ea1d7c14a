import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncr.data import Dataset, SynthSpec, generate_synthetic
from ncr.evaluation import (
    REPORT_SCHEMA_VERSION,
    boost,
    build_report,
    compute_metrics,
    mmse,
    r2_score,
    report_csv,
    report_json,
    summarize_boosts,
    write_report,
)
from ncr.models import ModelSpec, fit, predict

r2s = st.floats(0.01, 1.0)


class TestMetrics:
    def test_perfect(self):
        m = compute_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert (m.r2, m.mse, m.mae, m.n) == (1.0, 0.0, 0.0, 3)

    def test_mean_prediction(self):
        y = np.array([1.0, 4.0, 7.0])
        assert compute_metrics(y, np.full(3, y.mean())).r2 == 0.0

    def test_hand_arithmetic(self):
        m = compute_metrics([0.0, 2.0], [1.0, 1.0])
        assert (m.mse, m.mae, m.r2) == (1.0, 1.0, 0.0)

    def test_constant_target(self):
        assert r2_score([3.0, 3.0], [1.0, 5.0]) == 0.0

    def test_errors(self):
        with pytest.raises(ValueError):
            compute_metrics([1.0], [1.0, 2.0])
        with pytest.raises(ValueError):
            compute_metrics([], [])


class TestMmse:
    def test_noiseless(self):
        x = np.linspace(-10, 10, 30).reshape(-1, 1)
        assert mmse(Dataset(x, 2.0 * x[:, 0])) < 1e-10

    @pytest.mark.parametrize("variance,lo,hi", [(5.0, 4.0, 5.6), (1.0, 0.80, 1.12), (0.1, 0.080, 0.112)])
    def test_statistical_band(self, variance, lo, hi):
        assert lo <= mmse(generate_synthetic(SynthSpec(n=1000, noise_variance=variance))) <= hi

    @settings(max_examples=30, deadline=None)
    @given(seed=st.integers(0, 2**31), n=st.integers(3, 200))
    def test_equals_full_data_ols_and_bounds_linear_models(self, seed, n):
        ds = generate_synthetic(SynthSpec(n=n, seed=seed))
        ref = mmse(ds)
        ols = fit(ds.X, ds.y, ModelSpec("ols"))
        assert compute_metrics(ds.y, predict(ols, ds.X)).mse == pytest.approx(ref, abs=1e-8)
        for spec in (ModelSpec("ridge", alpha=1.0), ModelSpec("lasso", alpha=0.1), ModelSpec("svr", C=10.0)):
            model = fit(ds.X, ds.y, spec)
            assert compute_metrics(ds.y, predict(model, ds.X)).mse >= ref - 1e-8


class TestBoost:
    def test_published_pair(self):
        assert boost(0.442, 0.430) == pytest.approx(0.0279, abs=1e-4)

    def test_equal(self):
        assert boost(0.7, 0.7) == 0.0

    def test_hand_arithmetic(self):
        assert boost(0.5, 0.4) == pytest.approx(0.25)

    def test_undefined(self):
        assert boost(0.5, 0.0) is None

    @given(a=r2s, t=r2s)
    def test_sign_matches_ordering(self, a, t):
        b = boost(a, t)
        assert (b > 0) == (a > t) and (b < 0) == (a < t)


class TestSummarize:
    def test_all_equal(self):
        s = summarize_boosts([(0.5, 0.5), (0.3, 0.3)])
        assert s.improved_count == 0 and s.average_boost_over_improved is None

    def test_one_improved(self):
        s = summarize_boosts([(0.5, 0.4), (0.3, 0.4)])
        assert s.improved_count == 1
        assert s.average_boost_over_improved == pytest.approx(0.25)

    def test_nonpositive_baseline_skipped(self):
        s = summarize_boosts([(0.5, 0.0), (0.2, -0.1), (0.5, 0.4)])
        assert s.boosts[:2] == (None, None)
        assert s.improved_count == 1

    def test_empty(self):
        with pytest.raises(ValueError):
            summarize_boosts([])


def _run(ds_id, model, augmented, r2, mse=1.0):
    metrics = {"r2": r2, "mse": mse, "mae": 0.5, "n": 4}
    return {
        "dataset_id": ds_id,
        "model": model,
        "augmented": augmented,
        "hyperparams": {"alpha": 1.0},
        "train_metrics": metrics,
        "test_metrics": metrics,
        "mmse": 0.9,
    }


class TestReport:
    def test_single_run(self):
        rep = build_report([_run("a", "ols", False, 0.8)])
        assert rep["schema_version"] == REPORT_SCHEMA_VERSION
        assert len(rep["runs"]) == 1
        assert rep["runs"][0]["test_metrics"]["mse"] == 1.0 and rep["runs"][0]["mmse"] == 0.9
        assert rep["boost_summary"] == {}

    def test_boost_row(self):
        rep = build_report([_run("a", "ridge", True, 0.5), _run("a", "ridge", False, 0.4), _run("b", "ridge", True, 0.3), _run("b", "ridge", False, 0.4)])
        s = rep["boost_summary"]["ridge"]
        assert s["improved_count"] == 1
        assert s["average_boost_over_improved"] == pytest.approx(0.25)
        assert [r["dataset_id"] for r in s["per_dataset"]] == ["a", "b"]

    def test_stable_bytes_regardless_of_input_order(self):
        runs = [_run("b", "svr", True, 0.3), _run("a", "ols", False, 0.4), _run("a", "ols", True, 0.45)]
        a = report_json(build_report(runs, {"seed": 1, "grid_label": "coarse"}))
        b = report_json(build_report(runs[::-1], {"grid_label": "coarse", "seed": 1}))
        assert a == b

    def test_failed_runs_kept_but_not_paired(self):
        bad = {"dataset_id": "a", "model": "ols", "augmented": True, "hyperparams": {}, "error": "boom"}
        rep = build_report([bad, _run("a", "ols", False, 0.4)])
        assert len(rep["runs"]) == 2 and rep["boost_summary"] == {}
        assert "boom" in report_csv(rep)

    def test_non_finite_values_become_null(self):
        rep = build_report([_run("a", "ols", False, float("nan"))])
        assert rep["runs"][0]["test_metrics"]["r2"] is None
        json.loads(report_json(rep))

    def test_write(self, tmp_path):
        rep = build_report([_run("a", "ols", False, 0.4)])
        j, c = write_report(rep, tmp_path / "out", "r")
        assert json.loads(j.read_text()) == rep
        lines = c.read_text().splitlines()
        assert lines[0].startswith("dataset_id,model,augmented") and len(lines) == 2

    def test_empty(self):
        with pytest.raises(ValueError):
            build_report([])
